//! Named template diagrams with role-tagged placeholders, instantiated into
//! target diagrams under a rename map.

use crate::engine::ChangeSet;
use crate::io::{parse_diagram_file, ParseError};
use crate::model::{Architecture, Diagram, EdgeKind, ElementId, ElementKind, ModelError};
use crate::name::NameSpec;
use crate::table::DiagramLetter;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use thiserror::Error;

use ElementKind as K;

const BUILTIN: [(&str, &str); 3] = [
    ("office.pat", include_str!("../../patterns/office.pat")),
    ("request_registration.pat", include_str!("../../patterns/request_registration.pat")),
    ("request_downloading.pat", include_str!("../../patterns/request_downloading.pat")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern {{{name}}} (category {category}) not found")]
    NotFound { category: u8, name: String },
    #[error("pattern {name} builds diagram {expected}, not {requested}")]
    Category { name: String, expected: DiagramLetter, requested: DiagramLetter },
    #[error("pattern {pattern} has {placeholders} `{role}` placeholders but {given} replacements were given")]
    Arity { pattern: String, role: char, placeholders: usize, given: usize },
    #[error(
        "pattern {pattern}: `{placeholder}` is already renamed to `{existing}`, cannot rename it to `{requested}`"
    )]
    Conflict { pattern: String, placeholder: String, existing: String, requested: String },
    #[error("pattern {pattern}: two `{role}` placeholders would both become `{replacement}`")]
    NotInjective { pattern: String, role: char, replacement: String },
    #[error("{origin}:{error}")]
    Parse { origin: String, error: ParseError },
    #[error("{origin}: {message}")]
    Invalid { origin: String, message: String },
    #[error("pattern {{{name}}} (category {category}) is defined twice ({origin})")]
    Duplicate { category: u8, name: String, origin: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Placeholder roles. `StateInvariant` is the role of instance states.
const ROLES: [(char, ElementKind); 6] = [
    ('p', K::Partition),
    ('v', K::Activity),
    ('i', K::Instance),
    ('s', K::StateInvariant),
    ('l', K::Lifeline),
    ('m', K::Message),
];

fn role_char(kind: ElementKind) -> char {
    ROLES.iter().find(|(_, k)| *k == kind).map(|(c, _)| *c).unwrap_or('?')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    pub category: u8,
    pub placeholders: Vec<(ElementKind, Vec<NameSpec>)>,
    pub template: Diagram,
}

/// The diagram letter a category builds.
pub fn category_letter(category: u8) -> Option<DiagramLetter> {
    match category {
        1 => Some(DiagramLetter::A),
        2 => Some(DiagramLetter::Z),
        3 => Some(DiagramLetter::Q),
        _ => None,
    }
}

impl Pattern {
    /// Parses and validates one pattern file.
    pub fn parse(origin: &str, text: &str) -> Result<Pattern, PatternError> {
        let invalid = |message: String| PatternError::Invalid { origin: origin.to_string(), message };
        let (header, arch) =
            parse_diagram_file(text).map_err(|error| PatternError::Parse { origin: origin.to_string(), error })?;
        let category = u8::try_from(header.category).ok().filter(|c| category_letter(*c).is_some());
        let category = category.ok_or_else(|| invalid(format!("unknown category {}", header.category)))?;
        let letter = category_letter(category).expect("checked");
        arch.validate().map_err(|e| invalid(e.to_string()))?;
        let template = arch
            .diagram(letter)
            .cloned()
            .ok_or_else(|| invalid(format!("category {category} patterns hold a diagram {letter}")))?;
        let mut placeholders: Vec<(ElementKind, Vec<NameSpec>)> = Vec::new();
        for (role, names, (line, col)) in header.placeholders {
            let at = |message: String| PatternError::Parse {
                origin: origin.to_string(),
                error: ParseError { line, col, message },
            };
            let kind = ROLES
                .iter()
                .find(|(c, _)| role.len() == 1 && role.starts_with(*c))
                .map(|(_, k)| *k)
                .ok_or_else(|| at(format!("unknown placeholder role `{role}`")))?;
            if placeholders.iter().any(|(k, _)| *k == kind) {
                return Err(at(format!("role `{role}` listed twice")));
            }
            let specs = names
                .iter()
                .map(|n| NameSpec::parse(n).map_err(|e| at(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            for s in &specs {
                if !occurs(&template, kind, s) {
                    return Err(at(format!("placeholder `{s}` does not occur in the template")));
                }
            }
            placeholders.push((kind, specs));
        }
        Ok(Pattern { name: header.name, category, placeholders, template })
    }

    pub fn letter(&self) -> DiagramLetter {
        category_letter(self.category).expect("validated")
    }

    pub fn placeholders_of(&self, role: ElementKind) -> &[NameSpec] {
        self.placeholders.iter().find(|(k, _)| *k == role).map(|(_, v)| v.as_slice()).unwrap_or(&[])
    }
}

fn occurs(d: &Diagram, role: ElementKind, p: &NameSpec) -> bool {
    match role {
        K::Instance => d.of_kind(K::Instance).any(|e| e.spec.classifier == p.classifier),
        K::StateInvariant => d.of_kind(K::Instance).any(|e| e.spec.state == p.state),
        K::Message => d.edges.iter().any(|e| e.kind == EdgeKind::Message && e.label == p.name),
        kind => d.of_kind(kind).any(|e| e.spec == *p),
    }
}

#[derive(Debug, Clone, Default)]
pub struct PatternLibrary {
    patterns: BTreeMap<(u8, String), Pattern>,
}

impl PatternLibrary {
    /// The patterns shipped with the crate.
    pub fn builtin() -> Self {
        let mut lib = PatternLibrary::default();
        for (origin, text) in BUILTIN {
            let p = Pattern::parse(origin, text).unwrap_or_else(|e| panic!("built-in pattern: {e}"));
            lib.insert(origin, p).unwrap_or_else(|e| panic!("built-in pattern: {e}"));
        }
        lib
    }

    /// Built-ins plus every `*.pat` file of `dir`, read in file name order.
    pub fn load_dir(dir: &Path) -> Result<Self, PatternError> {
        let io = |e: std::io::Error| PatternError::Io { path: dir.display().to_string(), message: e.to_string() };
        let mut files: Vec<_> =
            std::fs::read_dir(dir).map_err(io)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>().map_err(io)?;
        files.retain(|p| p.extension().is_some_and(|e| e == "pat") && p.is_file());
        files.sort();
        let mut lib = PatternLibrary::builtin();
        for path in files {
            let origin = path.display().to_string();
            let text = std::fs::read_to_string(&path)
                .map_err(|e| PatternError::Io { path: origin.clone(), message: e.to_string() })?;
            lib.insert(&origin, Pattern::parse(&origin, &text)?)?;
        }
        Ok(lib)
    }

    /// Built-ins, plus the contents of `dir` when given.
    pub fn load_library(dir: Option<&Path>) -> Result<Self, PatternError> {
        match dir {
            Some(d) => Self::load_dir(d),
            None => Ok(Self::builtin()),
        }
    }

    pub fn insert(&mut self, origin: &str, pattern: Pattern) -> Result<(), PatternError> {
        let key = (pattern.category, pattern.name.clone());
        if self.patterns.contains_key(&key) {
            return Err(PatternError::Duplicate { category: key.0, name: key.1, origin: origin.to_string() });
        }
        self.patterns.insert(key, pattern);
        Ok(())
    }

    pub fn get(&self, category: u8, name: &str) -> Result<&Pattern, PatternError> {
        self.patterns
            .get(&(category, name.to_string()))
            .ok_or_else(|| PatternError::NotFound { category, name: name.to_string() })
    }

    /// Looks a pattern up by brace depth and checks it builds `letter`.
    pub fn resolve(&self, depth: u8, name: &str, letter: DiagramLetter) -> Result<&Pattern, PatternError> {
        let p = self.get(depth, name)?;
        if p.letter() != letter {
            return Err(PatternError::Category { name: p.name.clone(), expected: p.letter(), requested: letter });
        }
        Ok(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pattern> {
        self.patterns.values()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// Names taken from the matched source elements, by role.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoleSources {
    pub partitions: Vec<NameSpec>,
    pub instances: Vec<NameSpec>,
    pub lifelines: Vec<NameSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rename {
    pub role: ElementKind,
    pub from: NameSpec,
    pub to: NameSpec,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenameMap {
    pub entries: Vec<Rename>,
}

/// A pattern instantiated into an architecture, with every rename applied
/// so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternInstance {
    pub category: u8,
    pub name: String,
    pub renames: RenameMap,
}

/// Replacement text normalized to the part of the name a role renames.
fn normalize(role: ElementKind, spec: &NameSpec) -> NameSpec {
    let first = || spec.display_name().or(spec.state.as_deref()).unwrap_or_default().to_string();
    match role {
        K::Instance => NameSpec::of_class(spec.classifier.clone().unwrap_or_else(first)),
        K::StateInvariant => NameSpec::state_only(spec.state.clone().unwrap_or_else(first)),
        K::Lifeline | K::Activity => spec.clone(),
        _ => NameSpec::named(first()),
    }
}

impl RenameMap {
    fn lookup(&self, role: ElementKind, from: &NameSpec) -> Option<&NameSpec> {
        self.entries.iter().find(|r| r.role == role && r.from == *from).map(|r| &r.to)
    }

    /// The name `spec` takes under this map. Each field is renamed at most
    /// once, from its original value.
    pub fn apply(&self, kind: ElementKind, spec: &NameSpec) -> NameSpec {
        let mut out = spec.clone();
        match kind {
            K::Instance => {
                if let Some(c) = &spec.classifier {
                    if let Some(to) = self.lookup(K::Instance, &NameSpec::of_class(c.clone())) {
                        out.classifier = to.classifier.clone();
                    }
                }
                if let Some(s) = &spec.state {
                    if let Some(to) = self.lookup(K::StateInvariant, &NameSpec::state_only(s.clone())) {
                        out.state = to.state.clone();
                    }
                }
            }
            K::Partition => {
                if let Some(to) = self.lookup(K::Partition, spec) {
                    out = to.clone();
                }
            }
            K::Activity | K::Lifeline => {
                if let Some(to) = self.lookup(kind, spec) {
                    out = to.clone();
                }
            }
            _ => {}
        }
        out
    }

    pub fn apply_label(&self, label: &Option<String>) -> Option<String> {
        let l = label.as_ref()?;
        Some(
            self.lookup(K::Message, &NameSpec::named(l.clone()))
                .and_then(|to| to.name.clone())
                .unwrap_or_else(|| l.clone()),
        )
    }

    fn check_injective(&self, pattern: &str) -> Result<(), PatternError> {
        for (i, a) in self.entries.iter().enumerate() {
            if self.entries[..i].iter().any(|b| b.role == a.role && b.to == a.to) {
                return Err(PatternError::NotInjective {
                    pattern: pattern.to_string(),
                    role: role_char(a.role),
                    replacement: a.to.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Pairs each role's placeholders with replacements: explicit names first,
/// then names from the binding. Placeholders left over keep their names.
pub fn build_rename_map(
    pattern: &Pattern,
    explicit: &[(ElementKind, NameSpec)],
    sources: &RoleSources,
) -> Result<RenameMap, PatternError> {
    let mut map = RenameMap::default();
    for (role, placeholders) in &pattern.placeholders {
        let given: Vec<&NameSpec> = explicit.iter().filter(|(k, _)| k == role).map(|(_, n)| n).collect();
        if given.len() > placeholders.len() {
            return Err(PatternError::Arity {
                pattern: pattern.name.clone(),
                role: role_char(*role),
                placeholders: placeholders.len(),
                given: given.len(),
            });
        }
        let bound: &[NameSpec] = match role {
            K::Partition => &sources.partitions,
            K::Instance => &sources.instances,
            K::Lifeline => &sources.lifelines,
            _ => &[],
        };
        let replacements = given.into_iter().chain(bound).take(placeholders.len());
        for (from, to) in placeholders.iter().zip(replacements) {
            let to = normalize(*role, to);
            if *from != to {
                map.entries.push(Rename { role: *role, from: from.clone(), to });
            }
        }
    }
    map.check_injective(&pattern.name)?;
    Ok(map)
}

/// Copies the pattern into its diagram under `renames`, merging with what
/// is already there. Renames accumulate per pattern: earlier instances are
/// renamed in place first, so successive rules refine one diagram.
pub fn instantiate(
    arch: &mut Architecture,
    letter: DiagramLetter,
    pattern: &Pattern,
    renames: RenameMap,
    changes: &mut ChangeSet,
) -> Result<(), PatternError> {
    if pattern.letter() != letter {
        return Err(PatternError::Category {
            name: pattern.name.clone(),
            expected: pattern.letter(),
            requested: letter,
        });
    }
    let slot = arch.patterns.iter().position(|p| p.category == pattern.category && p.name == pattern.name);
    let mut merged = slot.map(|i| arch.patterns[i].renames.clone()).unwrap_or_default();
    let mut added = false;
    for r in renames.entries {
        match merged.lookup(r.role, &r.from) {
            Some(to) if *to == r.to => {}
            Some(to) => {
                return Err(PatternError::Conflict {
                    pattern: pattern.name.clone(),
                    placeholder: r.from.to_string(),
                    existing: to.to_string(),
                    requested: r.to.to_string(),
                })
            }
            None => {
                merged.entries.push(r);
                added = true;
            }
        }
    }
    merged.check_injective(&pattern.name)?;

    arch.ensure_diagram(letter);
    if added && slot.is_some() {
        rename_in_place(arch, letter, &merged, changes)?;
    }

    let t = &pattern.template;
    let mut ids: HashMap<ElementId, ElementId> = HashMap::new();
    let (owners, members): (Vec<_>, Vec<_>) = t.elements.iter().partition(|e| e.container.is_none());
    for el in owners.into_iter().chain(members) {
        let container = el.container.map(|c| ids[&c]);
        let spec = merged.apply(el.kind, &el.spec);
        let (id, outcome) = arch.find_or_create_element(letter, el.kind, spec, el.stereotype.clone(), container)?;
        changes.record_element(id, outcome);
        if !el.scenario.is_empty() && arch.element(id).is_some_and(|(_, e)| e.scenario.is_empty()) {
            arch.set_scenario(id, el.scenario.clone())?;
        }
        if !el.operations.is_empty() && arch.element(id).is_some_and(|(_, e)| e.operations.is_empty()) {
            arch.set_operations(id, el.operations.clone())?;
        }
        ids.insert(el.id, id);
    }
    for e in &t.edges {
        let label = if e.kind == EdgeKind::Message { merged.apply_label(&e.label) } else { e.label.clone() };
        let (id, outcome) = arch.create_edge_full(
            letter,
            e.kind,
            ids[&e.from],
            ids[&e.to],
            label,
            e.multiplicity.clone(),
            e.returns.clone(),
        )?;
        changes.record_edge(id, outcome);
    }

    let instance = PatternInstance { category: pattern.category, name: pattern.name.clone(), renames: merged };
    match slot {
        Some(i) => arch.patterns[i] = instance,
        None => arch.patterns.push(instance),
    }
    Ok(())
}

fn rename_in_place(
    arch: &mut Architecture,
    letter: DiagramLetter,
    map: &RenameMap,
    changes: &mut ChangeSet,
) -> Result<(), PatternError> {
    let d = arch.diagram(letter).expect("ensured").clone();
    for el in &d.elements {
        let spec = map.apply(el.kind, &el.spec);
        if arch.rename_element(el.id, spec)? {
            changes.record_element(el.id, crate::model::Outcome::Refined);
        }
    }
    for e in d.edges.iter().filter(|e| e.kind == EdgeKind::Message) {
        if let Some(l) = map.apply_label(&e.label) {
            if arch.relabel_edge(e.id, l)? {
                changes.record_edge(e.id, crate::model::Outcome::Refined);
            }
        }
    }
    Ok(())
}
