//! Construction of target parts.

use super::changes::ChangeSet;
use super::infer::infer_edge;
use super::matcher::{Binding, Bound};
use crate::dsl::{flatten_once, Arg, DiagramPart, ElemItem, Item, ItemLetter, OccurrenceArg, PatternRef};
use crate::model::{Architecture, EdgeId, EdgeKind, ElementId, ElementKind, ItemRef, ModelError};
use crate::name::NameSpec;
use crate::pattern::{self, PatternError, PatternLibrary, RoleSources};
use crate::table::DiagramLetter;
use std::collections::BTreeSet;

use ElementKind as K;

#[derive(Debug)]
pub(crate) enum BuildError {
    /// Something the rule needs is not there yet; retry on a later pass.
    Unresolved(String),
    Model(ModelError),
    Pattern(PatternError),
}

impl From<ModelError> for BuildError {
    fn from(e: ModelError) -> Self {
        BuildError::Model(e)
    }
}

impl From<PatternError> for BuildError {
    fn from(e: PatternError) -> Self {
        BuildError::Pattern(e)
    }
}

pub(crate) type BuildResult<T> = Result<T, BuildError>;

/// Works on a scratch copy of the architecture; the engine commits it only
/// when the whole application succeeds.
pub(crate) struct Builder<'a> {
    pub arch: Architecture,
    pub binding: &'a Binding,
    pub library: &'a PatternLibrary,
    pub changes: ChangeSet,
    pub pattern: Option<String>,
    flat: Vec<Bound>,
}

struct PendingEdge {
    kind: Option<EdgeKind>,
    label: Option<String>,
    multiplicity: Option<String>,
    returns: Option<String>,
}

impl<'a> Builder<'a> {
    pub fn new(arch: Architecture, binding: &'a Binding, library: &'a PatternLibrary) -> Self {
        let flat = binding.flat();
        Builder { arch, binding, library, changes: ChangeSet::default(), pattern: None, flat }
    }

    pub fn element(
        &mut self,
        letter: DiagramLetter,
        kind: ElementKind,
        spec: NameSpec,
        stereotype: Option<String>,
        container: Option<ElementId>,
    ) -> BuildResult<ElementId> {
        if spec.is_empty() {
            return Err(BuildError::Unresolved(format!("no name for new {} in {letter}", kind.meaning())));
        }
        let (id, outcome) = self.arch.find_or_create_element(letter, kind, spec, stereotype, container)?;
        self.changes.record_element(id, outcome);
        Ok(id)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn edge(
        &mut self,
        letter: DiagramLetter,
        kind: EdgeKind,
        from: ElementId,
        to: ElementId,
        label: Option<String>,
        multiplicity: Option<String>,
        returns: Option<String>,
    ) -> BuildResult<EdgeId> {
        let (id, outcome) = self.arch.create_edge_full(letter, kind, from, to, label, multiplicity, returns)?;
        self.changes.record_edge(id, outcome);
        Ok(id)
    }

    fn kind_of(&self, id: ElementId) -> ElementKind {
        self.arch.element(id).expect("element exists").1.kind
    }

    pub fn spec_of(&self, id: ElementId) -> NameSpec {
        self.arch.element(id).expect("element exists").1.spec.clone()
    }

    /// Source element whose name a target occurrence at `t` inherits: the
    /// source occurrence at the same position, else the anchor.
    fn source_for(&self, t: usize) -> Option<(ElementKind, NameSpec)> {
        let from_bound = |b: Bound| -> Option<(ElementKind, NameSpec)> {
            match b {
                Bound::Element(id) => self.arch.element(id).map(|(_, e)| (e.kind, e.spec.clone())),
                Bound::Member { class, op } => {
                    self.arch.element(class).and_then(|(_, c)| c.operations.get(op)).map(|s| (K::Operation, s.clone()))
                }
                Bound::Edge(_) => None,
            }
        };
        self.flat
            .get(t)
            .and_then(|b| from_bound(*b))
            .or_else(|| self.binding.anchor_element().and_then(|a| from_bound(Bound::Element(a))))
    }

    fn resolve_spec(&self, kind: ElementKind, explicit: Option<OccurrenceArg<'_>>, t: usize) -> NameSpec {
        let inherited = self.source_for(t).map(|(sk, spec)| inherit(kind, sk, &spec)).unwrap_or_default();
        match explicit {
            None => inherited,
            Some(arg) => {
                let spec = arg.to_spec();
                if spec.is_bare_state() {
                    spec.or_inherit(&NameSpec { state: None, ..inherited })
                } else {
                    spec
                }
            }
        }
    }

    /// Builds one target part item by item. Element items link from every
    /// element created by the previous element item; `p` and `r` items set
    /// the container for what follows; edge items shape the next link.
    pub fn generic_part(&mut self, part: &DiagramPart) -> BuildResult<()> {
        let letter = part.diagram;
        self.arch.ensure_diagram(letter);
        let items = flatten_once(&part.items);
        if let [only] = items.as_slice() {
            if only.letter.is_edge() {
                return self.standalone_edge(letter, only);
            }
        }
        let mut t = 0usize;
        let mut frontier: Vec<ElementId> = Vec::new();
        let mut pending: Option<PendingEdge> = None;
        let mut container: Option<ElementId> = None;
        for item in items {
            let kind = match item.letter {
                ItemLetter::Element(k) if !item.letter.is_edge() => k,
                _ => {
                    pending = Some(self.pending_edge(item, t));
                    t += 1;
                    continue;
                }
            };
            if kind == K::Operation {
                let op_specs = self.occurrence_specs(item, kind, &mut t);
                self.add_operations(&frontier, op_specs)?;
                continue;
            }
            let specs = self.occurrence_specs(item, kind, &mut t);
            if kind.is_container() {
                for spec in specs {
                    container = Some(self.element(letter, kind, spec, item.stereotype.clone(), None)?);
                }
                continue;
            }
            let stereotype = item.stereotype.clone().or_else(|| default_stereotype(letter, kind));
            let owner = container.filter(|c| contains(self.kind_of(*c), kind));
            let mut created = Vec::new();
            for spec in specs {
                created.push(self.element(letter, kind, spec, stereotype.clone(), owner)?);
            }
            for &f in &frontier {
                for &n in &created {
                    self.link(letter, f, n, pending.as_ref())?;
                }
            }
            pending = None;
            frontier = created;
        }
        Ok(())
    }

    fn occurrence_specs(&self, item: &ElemItem, kind: ElementKind, t: &mut usize) -> Vec<NameSpec> {
        let args = item.occurrence_args();
        let explicit: Vec<Option<OccurrenceArg<'_>>> =
            if args.is_empty() { vec![None] } else { args.into_iter().map(Some).collect() };
        explicit
            .into_iter()
            .map(|a| {
                let spec = self.resolve_spec(kind, a, *t);
                *t += 1;
                spec
            })
            .collect()
    }

    fn add_operations(&mut self, classes: &[ElementId], ops: Vec<NameSpec>) -> BuildResult<()> {
        for &c in classes {
            let (_, class) = self.arch.element(c).expect("exists");
            if class.kind != K::Class {
                return Err(ModelError::AttributeNotAllowed("operations", "class").into());
            }
            let mut list = class.operations.clone();
            let before = list.len();
            for op in &ops {
                if !op.is_empty() && !list.contains(op) {
                    list.push(op.clone());
                }
            }
            if list.len() != before {
                self.arch.set_operations(c, list)?;
                self.changes.record_element(c, crate::model::Outcome::Refined);
            } else {
                self.changes.record_element(c, crate::model::Outcome::Merged);
            }
        }
        Ok(())
    }

    fn pending_edge(&self, item: &ElemItem, t: usize) -> PendingEdge {
        let kind = match item.letter {
            ItemLetter::Link => item.stereotype.as_deref().and_then(EdgeKind::from_flow_stereotype),
            ItemLetter::Dependency => Some(EdgeKind::Dependency),
            ItemLetter::Element(K::Message) => Some(EdgeKind::Message),
            ItemLetter::Element(K::Transition) => Some(EdgeKind::Transition),
            ItemLetter::Element(_) => None,
        };
        let mut p = PendingEdge { kind, label: None, multiplicity: None, returns: None };
        for a in &item.args {
            match a {
                Arg::Name(n) => {
                    p.label = n.name.clone();
                    p.returns = n.classifier.clone();
                }
                Arg::Multiplicity(m) => p.multiplicity = Some(m.clone()),
                Arg::States(_) | Arg::Pattern(_) => {}
            }
        }
        if p.label.is_none() {
            if let Some(Bound::Edge(id)) = self.flat.get(t) {
                if let Some((_, e)) = self.arch.edge(*id) {
                    p.label = e.label.clone();
                }
            }
        }
        p
    }

    fn link(
        &mut self,
        letter: DiagramLetter,
        from: ElementId,
        to: ElementId,
        pending: Option<&PendingEdge>,
    ) -> BuildResult<EdgeId> {
        let (fk, tk) = (self.kind_of(from), self.kind_of(to));
        let kind = match pending.and_then(|p| p.kind) {
            Some(k) => k,
            None => infer_edge(letter, fk, tk)?,
        };
        let (a, b) =
            if kind == EdgeKind::Association && fk == K::UseCase && tk == K::Actor { (to, from) } else { (from, to) };
        let (label, mult, ret) = match pending {
            Some(p) => (p.label.clone(), p.multiplicity.clone(), p.returns.clone()),
            None => (None, None, None),
        };
        self.edge(letter, kind, a, b, label, mult, ret)
    }

    /// A target part made of a single edge item connects two existing
    /// elements: the ones named by its two arguments, or the counterparts
    /// of the bound source edge's endpoints.
    fn standalone_edge(&mut self, letter: DiagramLetter, item: &ElemItem) -> BuildResult<()> {
        let source_edge = self.flat.iter().find_map(|b| match b {
            Bound::Edge(id) => self.arch.edge(*id).map(|(_, e)| e.clone()),
            _ => None,
        });
        let pending = self.pending_edge(item, 0);
        let kind = pending
            .kind
            .or(source_edge.as_ref().map(|e| e.kind))
            .ok_or_else(|| BuildError::Unresolved("edge kind unknown".into()))?;
        let names: Vec<NameSpec> = item
            .args
            .iter()
            .filter_map(|a| match a {
                Arg::Name(n) => Some(n.clone()),
                _ => None,
            })
            .collect();
        let (from, to) = if names.len() == 2 {
            (self.lookup(letter, &names[0], None), self.lookup(letter, &names[1], None))
        } else {
            let Some(e) = &source_edge else {
                return Err(BuildError::Unresolved("no source edge to copy".into()));
            };
            (self.counterpart(letter, e.from), self.counterpart(letter, e.to))
        };
        let (Some(from), Some(to)) = (from, to) else {
            return Err(BuildError::Unresolved(format!("edge endpoints not present in {letter}")));
        };
        let label = if names.len() == 2 { None } else { pending.label };
        self.edge(letter, kind, from, to, label, pending.multiplicity, None)?;
        Ok(())
    }

    /// The single element of `letter` created by rules anchored on `source`,
    /// or failing that the element found by name.
    fn counterpart(&self, letter: DiagramLetter, source: ElementId) -> Option<ElementId> {
        let traced: BTreeSet<ElementId> = self
            .arch
            .traces
            .iter()
            .filter(|t| t.anchor == ItemRef::Element(source))
            .flat_map(|t| &t.targets)
            .filter_map(|r| match r {
                ItemRef::Element(id) if self.arch.element(*id).is_some_and(|(l, _)| l == letter) => Some(*id),
                _ => None,
            })
            .collect();
        if traced.len() == 1 {
            return traced.into_iter().next();
        }
        let spec = self.spec_of(source);
        self.lookup(letter, &spec, spec.display_name())
    }

    /// An element of `letter` named `spec`, or else an instance whose
    /// classifier is `class_name`.
    fn lookup(&self, letter: DiagramLetter, spec: &NameSpec, class_name: Option<&str>) -> Option<ElementId> {
        let d = self.arch.diagram(letter)?;
        d.elements
            .iter()
            .find(|e| e.spec == *spec)
            .or_else(|| {
                class_name.and_then(|c| {
                    d.elements.iter().find(|e| e.kind == K::Instance && e.spec.classifier.as_deref() == Some(c))
                })
            })
            .map(|e| e.id)
    }

    /// Instantiates the pattern named in a target part.
    pub fn pattern_part(&mut self, part: &DiagramPart, pref: &PatternRef) -> BuildResult<()> {
        let pat = self.library.resolve(pref.depth, &pref.name, part.diagram)?.clone();
        let explicit = explicit_renames(part);
        let sources = self.role_sources(pref);
        let renames = pattern::build_rename_map(&pat, &explicit, &sources)?;
        pattern::instantiate(&mut self.arch, part.diagram, &pat, renames, &mut self.changes)?;
        self.pattern = Some(pat.name.clone());
        Ok(())
    }

    fn role_sources(&self, pref: &PatternRef) -> RoleSources {
        let wants = |k: ElementKind| pref.roles.is_empty() || pref.roles.contains(&k);
        let mut src = RoleSources::default();
        let d = self.arch.diagram(self.binding.diagram).expect("source diagram");
        let bound: Vec<_> = self.binding.elements().into_iter().filter_map(|id| d.element(id)).collect();
        if wants(K::Partition) {
            let mut actors: Vec<ElementId> = bound.iter().filter(|e| e.kind == K::Actor).map(|e| e.id).collect();
            for uc in bound.iter().filter(|e| e.kind == K::UseCase) {
                for edge in &d.edges {
                    let other = if edge.to == uc.id {
                        edge.from
                    } else if edge.from == uc.id {
                        edge.to
                    } else {
                        continue;
                    };
                    if d.element(other).is_some_and(|o| o.kind == K::Actor) && !actors.contains(&other) {
                        actors.push(other);
                    }
                }
            }
            src.partitions = actors
                .into_iter()
                .filter_map(|id| d.element(id))
                .filter_map(|e| e.spec.display_name().map(NameSpec::named))
                .collect();
        }
        if wants(K::Instance) {
            let instances = bound.iter().filter(|e| e.kind == K::Instance);
            let owners = bound.iter().filter(|e| matches!(e.kind, K::Region | K::Class));
            src.instances = instances
                .chain(owners)
                .filter_map(|e| {
                    let class = if e.kind == K::Instance {
                        e.spec.classifier.as_deref().or(e.spec.name.as_deref())
                    } else {
                        e.spec.display_name()
                    };
                    class.map(NameSpec::of_class)
                })
                .collect();
        }
        if wants(K::Lifeline) {
            src.lifelines = bound.iter().filter(|e| e.kind == K::Lifeline).map(|e| e.spec.clone()).collect();
        }
        src
    }
}

/// Replacement names written out in a pattern part, by role letter.
fn explicit_renames(part: &DiagramPart) -> Vec<(ElementKind, NameSpec)> {
    let mut out = Vec::new();
    for item in flatten_once(&part.items) {
        let Some(kind) = item.letter.element_kind() else { continue };
        for a in &item.args {
            match a {
                Arg::Name(n) => out.push((kind, n.clone())),
                Arg::States(states) => out.extend(states.iter().map(|s| (K::StateInvariant, NameSpec::state_only(s)))),
                Arg::Multiplicity(_) | Arg::Pattern(_) => {}
            }
        }
    }
    out
}

/// The pattern reference in a target part, if any.
pub(crate) fn part_pattern(part: &DiagramPart) -> Option<&PatternRef> {
    fn find(items: &[Item]) -> Option<&PatternRef> {
        items.iter().find_map(|i| match i {
            Item::Elem(e) => e.pattern_ref(),
            Item::Group(g) => g.branches.iter().find_map(|b| find(b)),
        })
    }
    find(&part.items)
}

/// Name a new element of `target` takes from a source element.
pub(crate) fn inherit(target: ElementKind, source: ElementKind, spec: &NameSpec) -> NameSpec {
    let name_or_class = || spec.name.clone().or_else(|| spec.classifier.clone());
    let class_or_name = || spec.classifier.clone().or_else(|| spec.name.clone());
    match target {
        K::Instance => NameSpec {
            name: None,
            state: if source == K::StateInvariant { spec.state.clone() } else { None },
            classifier: class_or_name(),
        },
        K::Class | K::Region => NameSpec { name: class_or_name(), ..Default::default() },
        _ => NameSpec { name: name_or_class(), ..Default::default() },
    }
}

/// Elements of the process decomposition are subprocesses and products
/// unless the rule says otherwise.
fn default_stereotype(letter: DiagramLetter, kind: ElementKind) -> Option<String> {
    match (letter, kind) {
        (DiagramLetter::R, K::Activity) => Some("subprocess".into()),
        (DiagramLetter::R, K::Instance) => Some("product".into()),
        _ => None,
    }
}

fn contains(container: ElementKind, member: ElementKind) -> bool {
    matches!((container, member), (K::Partition, K::Activity) | (K::Region, K::StateInvariant | K::ControlNode))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naming_cascade() {
        let req = NameSpec::named("Request");
        assert_eq!(inherit(K::Instance, K::Event, &req), NameSpec::of_class("Request"));
        let inst = NameSpec::in_state("Sent", "Decision");
        assert_eq!(inherit(K::Instance, K::Instance, &inst), NameSpec::of_class("Decision"));
        assert_eq!(inherit(K::Instance, K::StateInvariant, &inst), inst);
        assert_eq!(inherit(K::Class, K::Instance, &inst), NameSpec::named("Decision"));
        assert_eq!(inherit(K::Actor, K::Instance, &NameSpec::of_class("X")), NameSpec::named("X"));
        assert_eq!(inherit(K::UseCase, K::Activity, &NameSpec::named("v")), NameSpec::named("v"));
    }
}
