//! Typed graph representation of a layered architecture: diagrams of fixed
//! kinds holding kind-checked elements and edges, rule attachments and
//! provenance traces.

mod compat;
mod kinds;

pub use compat::{edge_allowed, element_allowed, multiplicity_valid, realization_allowed};
pub use kinds::{EdgeKind, ElementKind};

use crate::dsl::RuleAst;
use crate::name::NameSpec;
use crate::pattern::PatternInstance;
use crate::table::{DiagramLetter, UmlFamily};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "el{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ed{}", self.0)
    }
}

/// Either kind of graph item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemRef {
    Element(ElementId),
    Edge(EdgeId),
}

impl fmt::Display for ItemRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemRef::Element(id) => id.fmt(f),
            ItemRef::Edge(id) => id.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub id: ElementId,
    pub kind: ElementKind,
    pub spec: NameSpec,
    pub stereotype: Option<String>,
    pub container: Option<ElementId>,
    /// Scenario steps, use cases only.
    pub scenario: Vec<String>,
    /// Operations, classes only.
    pub operations: Vec<NameSpec>,
}

impl Element {
    pub fn merge_key(&self) -> (ElementKind, &NameSpec, Option<&str>) {
        (self.kind, &self.spec, self.stereotype.as_deref())
    }

    /// Human label: `kind spec<<stereotype>>`.
    pub fn describe(&self) -> String {
        let mut s = format!("{} {}", self.kind.letter(), self.spec);
        if let Some(st) = &self.stereotype {
            s.push_str(&format!("<<{st}>>"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub kind: EdgeKind,
    pub from: ElementId,
    pub to: ElementId,
    pub label: Option<String>,
    pub multiplicity: Option<String>,
    /// Return classifier of a message.
    pub returns: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub letter: DiagramLetter,
    pub name: String,
    pub elements: Vec<Element>,
    pub edges: Vec<Edge>,
}

impl Diagram {
    pub fn new(letter: DiagramLetter) -> Self {
        Diagram { letter, name: letter.kind().display_name.to_string(), elements: Vec::new(), edges: Vec::new() }
    }

    pub fn family(&self) -> UmlFamily {
        self.letter.family()
    }

    pub fn element(&self, id: ElementId) -> Option<&Element> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn element_mut(&mut self, id: ElementId) -> Option<&mut Element> {
        self.elements.iter_mut().find(|e| e.id == id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn find(&self, kind: ElementKind, spec: &NameSpec, stereotype: Option<&str>) -> Option<&Element> {
        self.elements.iter().find(|e| e.merge_key() == (kind, spec, stereotype))
    }

    pub fn of_kind(&self, kind: ElementKind) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(move |e| e.kind == kind)
    }

    pub fn contained_in(&self, container: ElementId) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(move |e| e.container == Some(container))
    }

    pub fn edges_from(&self, id: ElementId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == id)
    }

    pub fn edges_to(&self, id: ElementId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.to == id)
    }
}

/// How `find_or_create_element` resolved a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Created,
    Merged,
    /// Merged, and a previously unset attribute (container, multiplicity)
    /// was filled in.
    Refined,
}

impl Outcome {
    pub fn created(self) -> bool {
        self == Outcome::Created
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown diagram letter `{0}`")]
    UnknownDiagram(char),
    #[error("diagram {0} does not exist")]
    MissingDiagram(DiagramLetter),
    #[error("{kind} elements ({meaning}) are not allowed in {family} diagram {diagram}")]
    KindNotAllowed { kind: ElementKind, meaning: &'static str, family: UmlFamily, diagram: DiagramLetter },
    #[error("element {0} does not exist")]
    MissingElement(ElementId),
    #[error("element {0} cannot be a container: {1}")]
    BadContainer(ElementId, &'static str),
    #[error("`{element}` is already contained in `{existing}`, cannot move it to `{requested}`")]
    ContainerConflict { element: String, existing: String, requested: String },
    #[error("{kind} edge {from} -> {to} is not allowed in diagram {diagram}")]
    EdgeNotAllowed { kind: EdgeKind, from: ElementKind, to: ElementKind, diagram: DiagramLetter },
    #[error("invalid multiplicity `{0}`")]
    BadMultiplicity(String),
    #[error("edge {edge} already has {field} `{existing}`, cannot set `{requested}`")]
    EdgeConflict { edge: EdgeId, field: &'static str, existing: String, requested: String },
    #[error("{0} is only valid on {1} elements")]
    AttributeNotAllowed(&'static str, &'static str),
    #[error("no edge kind links {from} to {to} in diagram {diagram}")]
    NoEdgeKind { from: ElementKind, to: ElementKind, diagram: DiagramLetter },
    #[error("renaming `{from}` to `{to}` collides with an existing element")]
    RenameCollision { from: String, to: String },
}

/// The element a rule is placed on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Host {
    Element { kind: Option<ElementKind>, spec: NameSpec },
    Edge { kind: EdgeKind, from: Option<NameSpec>, to: Option<NameSpec>, label: Option<String> },
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Host::Element { kind, spec } => {
                if let Some(k) = kind {
                    write!(f, "{} ", k.keyword())?;
                }
                write!(f, "\"{spec}\"")
            }
            Host::Edge { kind, from, to, label } => {
                write!(f, "edge {kind}")?;
                if let (Some(a), Some(b)) = (from, to) {
                    write!(f, " \"{a}\" -> \"{b}\"")?;
                }
                if let Some(l) = label {
                    write!(f, " label \"{l}\"")?;
                }
                Ok(())
            }
        }
    }
}

/// A rule placed on an element of its source diagram. The host may not
/// exist yet; the fixpoint driver retries until it does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub host_diagram: DiagramLetter,
    pub host: Host,
    pub rule: RuleAst,
    pub fired: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule source diagram {rule} does not match host diagram {host}")]
pub struct HostMismatch {
    pub host: DiagramLetter,
    pub rule: DiagramLetter,
}

impl Attachment {
    pub fn new(host_diagram: DiagramLetter, host: Host, rule: RuleAst) -> Result<Self, HostMismatch> {
        let src = rule.source().diagram;
        if src != host_diagram {
            return Err(HostMismatch { host: host_diagram, rule: src });
        }
        Ok(Attachment { host_diagram, host, rule, fired: false })
    }
}

/// Provenance of one rule application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLink {
    pub rule_text: String,
    /// Catalog key of the rule form this application instantiates.
    pub catalog: Option<String>,
    pub pattern: Option<String>,
    /// Index into `Architecture::attachments`.
    pub attachment: usize,
    pub anchor: ItemRef,
    pub sources: Vec<ItemRef>,
    pub targets: Vec<ItemRef>,
    pub pass: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Architecture {
    pub name: String,
    diagrams: BTreeMap<DiagramLetter, Diagram>,
    pub attachments: Vec<Attachment>,
    pub traces: Vec<TraceLink>,
    pub patterns: Vec<PatternInstance>,
    next_element: u32,
    next_edge: u32,
}

impl Architecture {
    pub fn new(name: impl Into<String>) -> Self {
        Architecture {
            name: name.into(),
            diagrams: BTreeMap::new(),
            attachments: Vec::new(),
            traces: Vec::new(),
            patterns: Vec::new(),
            next_element: 1,
            next_edge: 1,
        }
    }

    /// Rebuilds an architecture from already-numbered parts.
    pub fn from_parts(
        name: String,
        diagrams: Vec<Diagram>,
        attachments: Vec<Attachment>,
        traces: Vec<TraceLink>,
        patterns: Vec<PatternInstance>,
    ) -> Self {
        let next_element = diagrams.iter().flat_map(|d| d.elements.iter().map(|e| e.id.0)).max().unwrap_or(0) + 1;
        let next_edge = diagrams.iter().flat_map(|d| d.edges.iter().map(|e| e.id.0)).max().unwrap_or(0) + 1;
        Architecture {
            name,
            diagrams: diagrams.into_iter().map(|d| (d.letter, d)).collect(),
            attachments,
            traces,
            patterns,
            next_element,
            next_edge,
        }
    }

    pub fn diagram(&self, letter: DiagramLetter) -> Option<&Diagram> {
        self.diagrams.get(&letter)
    }

    pub fn diagram_mut(&mut self, letter: DiagramLetter) -> Option<&mut Diagram> {
        self.diagrams.get_mut(&letter)
    }

    /// Diagrams in table order.
    pub fn diagrams(&self) -> impl Iterator<Item = &Diagram> {
        self.diagrams.values()
    }

    pub fn letters(&self) -> Vec<DiagramLetter> {
        self.diagrams.keys().copied().collect()
    }

    pub fn ensure_diagram(&mut self, letter: DiagramLetter) -> &mut Diagram {
        self.diagrams.entry(letter).or_insert_with(|| Diagram::new(letter))
    }

    pub fn ensure_diagram_char(&mut self, c: char) -> Result<&mut Diagram, ModelError> {
        let letter = DiagramLetter::from_char(c).ok_or(ModelError::UnknownDiagram(c))?;
        Ok(self.ensure_diagram(letter))
    }

    pub fn element(&self, id: ElementId) -> Option<(DiagramLetter, &Element)> {
        self.diagrams.values().find_map(|d| d.element(id).map(|e| (d.letter, e)))
    }

    pub fn edge(&self, id: EdgeId) -> Option<(DiagramLetter, &Edge)> {
        self.diagrams.values().find_map(|d| d.edge(id).map(|e| (d.letter, e)))
    }

    pub fn describe(&self, item: ItemRef) -> String {
        match item {
            ItemRef::Element(id) => match self.element(id) {
                Some((l, e)) => format!("{l}:{}", e.describe()),
                None => id.to_string(),
            },
            ItemRef::Edge(id) => match self.edge(id) {
                Some((l, e)) => {
                    let name = |x| self.element(x).map(|(_, el)| el.spec.to_string());
                    format!("{l}:{} {} -> {}", e.kind, name(e.from).unwrap_or_default(), name(e.to).unwrap_or_default())
                }
                None => id.to_string(),
            },
        }
    }

    pub fn find_or_create_element(
        &mut self,
        letter: DiagramLetter,
        kind: ElementKind,
        spec: NameSpec,
        stereotype: Option<String>,
        container: Option<ElementId>,
    ) -> Result<(ElementId, Outcome), ModelError> {
        let family = letter.family();
        if !element_allowed(family, kind) {
            return Err(ModelError::KindNotAllowed { kind, meaning: kind.meaning(), family, diagram: letter });
        }
        let next_id = ElementId(self.next_element);
        let diagram = self.ensure_diagram(letter);
        if let Some(c) = container {
            let owner = diagram.element(c).ok_or(ModelError::MissingElement(c))?;
            if !owner.kind.is_container() {
                return Err(ModelError::BadContainer(c, "only partitions and regions own elements"));
            }
        }
        if let Some(existing) = diagram.find(kind, &spec, stereotype.as_deref()) {
            let id = existing.id;
            return match (existing.container, container) {
                (_, None) => Ok((id, Outcome::Merged)),
                (Some(a), Some(b)) if a == b => Ok((id, Outcome::Merged)),
                (None, Some(b)) => {
                    diagram.element_mut(id).expect("present").container = Some(b);
                    Ok((id, Outcome::Refined))
                }
                (Some(a), Some(b)) => {
                    let name = |x| diagram.element(x).map(Element::describe).unwrap_or_default();
                    Err(ModelError::ContainerConflict {
                        element: existing.describe(),
                        existing: name(a),
                        requested: name(b),
                    })
                }
            };
        }
        diagram.elements.push(Element {
            id: next_id,
            kind,
            spec,
            stereotype,
            container,
            scenario: Vec::new(),
            operations: Vec::new(),
        });
        self.next_element += 1;
        Ok((next_id, Outcome::Created))
    }

    /// Creates (or merges) an edge inside `letter`. Realization edges may
    /// end in another diagram.
    pub fn create_edge(
        &mut self,
        letter: DiagramLetter,
        kind: EdgeKind,
        from: ElementId,
        to: ElementId,
        label: Option<String>,
        multiplicity: Option<String>,
    ) -> Result<(EdgeId, Outcome), ModelError> {
        self.create_edge_full(letter, kind, from, to, label, multiplicity, None)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn create_edge_full(
        &mut self,
        letter: DiagramLetter,
        kind: EdgeKind,
        from: ElementId,
        to: ElementId,
        label: Option<String>,
        multiplicity: Option<String>,
        returns: Option<String>,
    ) -> Result<(EdgeId, Outcome), ModelError> {
        if let Some(m) = &multiplicity {
            if !multiplicity_valid(m) {
                return Err(ModelError::BadMultiplicity(m.clone()));
            }
        }
        let diagram = self.diagram(letter).ok_or(ModelError::MissingDiagram(letter))?;
        let from_kind = diagram.element(from).ok_or(ModelError::MissingElement(from))?.kind;
        match diagram.element(to) {
            Some(e) => {
                if !edge_allowed(letter.family(), kind, from_kind, e.kind) {
                    return Err(ModelError::EdgeNotAllowed { kind, from: from_kind, to: e.kind, diagram: letter });
                }
            }
            None => {
                let (to_letter, e) = self.element(to).ok_or(ModelError::MissingElement(to))?;
                if kind != EdgeKind::Realization || !realization_allowed(letter, from_kind, to_letter, e.kind) {
                    return Err(ModelError::EdgeNotAllowed { kind, from: from_kind, to: e.kind, diagram: letter });
                }
            }
        }
        let next_id = EdgeId(self.next_edge);
        let diagram = self.diagram_mut(letter).expect("checked above");
        if let Some(existing) =
            diagram.edges.iter_mut().find(|e| e.kind == kind && e.from == from && e.to == to && e.label == label)
        {
            let mut outcome = Outcome::Merged;
            for (field, have, want) in [
                ("multiplicity", &mut existing.multiplicity, multiplicity),
                ("return type", &mut existing.returns, returns),
            ] {
                match (have.as_ref(), want) {
                    (_, None) => {}
                    (None, Some(w)) => {
                        *have = Some(w);
                        outcome = Outcome::Refined;
                    }
                    (Some(h), Some(w)) if *h == w => {}
                    (Some(h), Some(w)) => {
                        return Err(ModelError::EdgeConflict {
                            edge: existing.id,
                            field,
                            existing: h.clone(),
                            requested: w,
                        })
                    }
                }
            }
            return Ok((existing.id, outcome));
        }
        diagram.edges.push(Edge { id: next_id, kind, from, to, label, multiplicity, returns });
        self.next_edge += 1;
        Ok((next_id, Outcome::Created))
    }

    pub fn set_scenario(&mut self, id: ElementId, steps: Vec<String>) -> Result<(), ModelError> {
        let el = self.element_mut(id)?;
        if el.kind != ElementKind::UseCase {
            return Err(ModelError::AttributeNotAllowed("scenario", "use case"));
        }
        el.scenario = steps;
        Ok(())
    }

    pub fn set_operations(&mut self, id: ElementId, ops: Vec<NameSpec>) -> Result<(), ModelError> {
        let el = self.element_mut(id)?;
        if el.kind != ElementKind::Class {
            return Err(ModelError::AttributeNotAllowed("operations", "class"));
        }
        el.operations = ops;
        Ok(())
    }

    /// Replaces an element's name in place, keeping its id and links.
    pub fn rename_element(&mut self, id: ElementId, spec: NameSpec) -> Result<bool, ModelError> {
        let (letter, el) = self.element(id).ok_or(ModelError::MissingElement(id))?;
        if el.spec == spec {
            return Ok(false);
        }
        let diagram = self.diagram(letter).expect("element found");
        if diagram.find(el.kind, &spec, el.stereotype.as_deref()).is_some() {
            return Err(ModelError::RenameCollision { from: el.spec.to_string(), to: spec.to_string() });
        }
        self.element_mut(id)?.spec = spec;
        Ok(true)
    }

    pub fn relabel_edge(&mut self, id: EdgeId, label: String) -> Result<bool, ModelError> {
        for d in self.diagrams.values_mut() {
            if let Some(e) = d.edges.iter_mut().find(|e| e.id == id) {
                if e.label.as_deref() == Some(label.as_str()) {
                    return Ok(false);
                }
                e.label = Some(label);
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn element_mut(&mut self, id: ElementId) -> Result<&mut Element, ModelError> {
        self.diagrams.values_mut().find_map(|d| d.element_mut(id)).ok_or(ModelError::MissingElement(id))
    }

    /// Re-checks every schema invariant.
    pub fn validate(&self) -> Result<(), ModelError> {
        for d in self.diagrams.values() {
            let family = d.family();
            for (i, el) in d.elements.iter().enumerate() {
                if !element_allowed(family, el.kind) {
                    return Err(ModelError::KindNotAllowed {
                        kind: el.kind,
                        meaning: el.kind.meaning(),
                        family,
                        diagram: d.letter,
                    });
                }
                if let Some(c) = el.container {
                    match d.element(c) {
                        Some(owner) if owner.kind.is_container() => {}
                        Some(_) => return Err(ModelError::BadContainer(c, "not a partition or region")),
                        None => return Err(ModelError::MissingElement(c)),
                    }
                }
                if !el.scenario.is_empty() && el.kind != ElementKind::UseCase {
                    return Err(ModelError::AttributeNotAllowed("scenario", "use case"));
                }
                if !el.operations.is_empty() && el.kind != ElementKind::Class {
                    return Err(ModelError::AttributeNotAllowed("operations", "class"));
                }
                if d.elements[..i].iter().any(|o| o.merge_key() == el.merge_key()) {
                    return Err(ModelError::RenameCollision { from: el.describe(), to: el.describe() });
                }
            }
            for e in &d.edges {
                let from = d.element(e.from).ok_or(ModelError::MissingElement(e.from))?;
                let ok = match d.element(e.to) {
                    Some(to) => edge_allowed(family, e.kind, from.kind, to.kind),
                    None => {
                        let (tl, to) = self.element(e.to).ok_or(ModelError::MissingElement(e.to))?;
                        e.kind == EdgeKind::Realization && realization_allowed(d.letter, from.kind, tl, to.kind)
                    }
                };
                if !ok {
                    let to_kind = self.element(e.to).map(|(_, t)| t.kind).unwrap_or(from.kind);
                    return Err(ModelError::EdgeNotAllowed {
                        kind: e.kind,
                        from: from.kind,
                        to: to_kind,
                        diagram: d.letter,
                    });
                }
                if let Some(m) = &e.multiplicity {
                    if !multiplicity_valid(m) {
                        return Err(ModelError::BadMultiplicity(m.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn element_count(&self) -> usize {
        self.diagrams.values().map(|d| d.elements.len()).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.diagrams.values().map(|d| d.edges.len()).sum()
    }
}

fn element_descriptor(diagram: &Diagram, el: &Element) -> String {
    let mut s = el.describe();
    if let Some(c) = el.container.and_then(|c| diagram.element(c)) {
        s.push_str(&format!(" in [{}]", c.describe()));
    }
    if !el.scenario.is_empty() {
        s.push_str(&format!(" scenario{:?}", el.scenario));
    }
    if !el.operations.is_empty() {
        let ops: Vec<String> = el.operations.iter().map(|o| o.to_string()).collect();
        s.push_str(&format!(" ops{ops:?}"));
    }
    s
}

fn endpoint_descriptor(arch: &Architecture, diagram: &Diagram, id: ElementId) -> String {
    match diagram.element(id) {
        Some(e) => e.describe(),
        None => match arch.element(id) {
            Some((l, e)) => format!("{l}:{}", e.describe()),
            None => format!("?{id}"),
        },
    }
}

/// Canonical, id-free descriptors of a diagram's elements and edges, each
/// sorted. Two diagrams are isomorphic iff their descriptors are equal,
/// because the merge key makes every element descriptor unique.
pub fn descriptors(arch: &Architecture, diagram: &Diagram) -> (Vec<String>, Vec<String>) {
    let mut els: Vec<String> = diagram.elements.iter().map(|e| element_descriptor(diagram, e)).collect();
    let mut edges: Vec<String> = diagram
        .edges
        .iter()
        .map(|e| {
            let mut s = format!(
                "{} {} -> {}",
                e.kind,
                endpoint_descriptor(arch, diagram, e.from),
                endpoint_descriptor(arch, diagram, e.to)
            );
            if let Some(l) = &e.label {
                s.push_str(&format!(" label {l}"));
            }
            if let Some(m) = &e.multiplicity {
                s.push_str(&format!(" mult {m}"));
            }
            if let Some(r) = &e.returns {
                s.push_str(&format!(" returns {r}"));
            }
            s
        })
        .collect();
    els.sort();
    edges.sort();
    (els, edges)
}

/// True iff both diagrams have the same kind and the same canonical
/// element and edge descriptors.
pub fn diagram_isomorphic(a1: &Architecture, d1: &Diagram, a2: &Architecture, d2: &Diagram) -> bool {
    d1.letter == d2.letter && descriptors(a1, d1) == descriptors(a2, d2)
}
