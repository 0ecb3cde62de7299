//! Built-in rule forms.

use super::ast::*;
use super::{parse_rule, DslError};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    /// Produces a single target element.
    Simple,
    Composite,
    /// Known by index only; cannot be applied.
    Stub,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: &'static str,
    /// Index in the external rule catalog, where the rule has one.
    pub id: Option<&'static str>,
    pub kind: EntryKind,
    pub form: Option<&'static str>,
    /// Longer spellings of the same rule (stereotyped or pattern-driven).
    pub aliases: &'static [&'static str],
    pub description: &'static str,
}

impl CatalogEntry {
    pub fn ast(&self) -> Result<RuleAst, DslError> {
        match self.form {
            Some(f) => parse_rule(f),
            None => Err(DslError::NotExecutable(self.label().to_string())),
        }
    }

    /// The index id when there is one, otherwise the key.
    pub fn label(&self) -> &'static str {
        self.id.unwrap_or(self.key)
    }

    pub fn matches_key(&self, key: &str) -> bool {
        self.key.eq_ignore_ascii_case(key) || self.id.is_some_and(|i| i.eq_ignore_ascii_case(key))
    }
}

const fn entry(
    key: &'static str,
    id: Option<&'static str>,
    kind: EntryKind,
    form: Option<&'static str>,
    aliases: &'static [&'static str],
    description: &'static str,
) -> CatalogEntry {
    CatalogEntry { key, id, kind, form, aliases, description }
}

use EntryKind::{Composite, Simple, Stub};

static CATALOG: [CatalogEntry; 24] = [
    entry("S1", None, Simple, Some("XeRi"), &[],
        "An event of the context diagram becomes an input instance of the process decomposition."),
    entry("S2", None, Simple, Some("XevRv"), &[],
        "The process triggered by an event becomes a subprocess."),
    entry("S3", None, Simple, Some("XiRi"), &[],
        "An instance of the context diagram is copied into the process decomposition."),
    entry("S4", None, Simple, Some("Xz<<control>>Rz<<data>>"), &[],
        "A control flow of the context diagram becomes a data flow."),
    entry("S5", None, Simple, Some("Xz<<data>>Rz<<data>>"), &[],
        "A data flow of the context diagram is copied as a data flow."),
    entry("S6", None, Simple, Some("Xi([State])Ri([State])"), &[],
        "An instance keeps its state when copied into the process decomposition."),
    entry("C1", None, Composite, Some("XeviRivi"), &[],
        "Event, process and output instance become input instance, subprocess and output instance linked by data flows."),
    entry("C2", Some("R1.20"), Composite, Some("ReviBaua"),
        &["Rev<<subprocess>>i<<product>>Baua", "RiviBaua"],
        "A subprocess with its input and output becomes a business use case associated with actors."),
    entry("C3", Some("R2.5"), Composite, Some("BuAn(v+|i+)+n"),
        &["Bu<<scenarios>>An<<start>>(v+|i+)+n<<stop>>"],
        "The scenario of a business use case becomes a realization flow between start and stop nodes."),
    entry("C4", Some("R2.5a"), Composite, Some("BauA(pv+)+"), &["BauApv({Office})"],
        "Actors of a use case become partitions holding actions; may import a business process pattern."),
    entry("C5", Some("R2.9a"), Composite, Some("RiviA(v+i+)+"), &["RiviAv({Office}i)"],
        "Input and output of a subprocess become the object flow of the realization; may rename pattern object classes."),
    entry("C6", None, Composite, Some("ApUau"), &[],
        "A partition becomes an actor associated with one system use case per contained action."),
    entry("C7", None, Composite, Some("AiviCczc"), &[],
        "Objects consumed and produced by an action become associated classes."),
    entry("C8", None, Composite, Some("AivSrst"), &[],
        "Object states along a flow become states of a region joined by transitions."),
    entry("C9", Some("R3.5a"), Composite, Some("UauZ(pv+)+"), &["UauZpv({{RequestRegistration}})"],
        "A system use case becomes a realization with partitions and actions; may import a realization pattern."),
    entry("C10", None, Composite, Some("CchZ(iv)+i"), &["CchZiv"],
        "Operations of a class become actions exchanging instances of that class."),
    entry("C11", Some("R3.12b"), Composite, Some("SrsZ(v+i+)+"),
        &["SrsZv({{RequestRegistration}})i([Sent],[Registered])"],
        "States of a region become instance states in a realization flow."),
    entry("C12", None, Composite, Some("ZpvYuUu"), &[],
        "Actions of a partition become implementation use cases realizing the system use case."),
    entry("C13", Some("R4.6a"), Composite, Some("YuQ(lm+)+"),
        &["YuQlm({{{RequestDownloading}}})"],
        "An implementation use case becomes a sequence of lifelines and messages; may import a sequence pattern."),
    entry("C14", None, Composite, Some("QlmlMqyq"), &[],
        "Lifelines joined by a message become components joined by a dependency."),
    entry("R1.5a", Some("R1.5a"), Stub, None, &[], "Listed by index only."),
    entry("R1.5c", Some("R1.5c"), Stub, None, &[], "Listed by index only."),
    entry("R1.22", Some("R1.22"), Stub, None, &[], "Listed by index only."),
    entry("R2.26a", Some("R2.26a"), Stub, None, &[], "Listed by index only."),
];

pub fn builtin_catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

/// Finds an entry by key (`C4`) or index id (`R2.5a`), case-insensitively.
pub fn lookup(key: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.matches_key(key))
}

/// Parses a catalog key or plain rule text.
pub fn resolve_rule(text: &str) -> Result<RuleAst, DslError> {
    match lookup(text.trim()) {
        Some(e) => e.ast(),
        None => parse_rule(text),
    }
}

/// Shape of a rule that decides which catalog form it instantiates: the
/// source letters (with flow stereotypes and a marker for state
/// arguments) and the target diagram letters.
fn signature(ast: &RuleAst) -> String {
    let mut s = String::new();
    let src = ast.source();
    s.push(src.diagram.as_char());
    for item in &src.items {
        match item {
            Item::Elem(e) => {
                s.push(e.letter.as_char());
                if e.letter == ItemLetter::Link {
                    if let Some(st) = &e.stereotype {
                        s.push_str(&format!("<<{st}>>"));
                    }
                }
                let stateful = e.args.iter().any(|a| match a {
                    Arg::States(_) => true,
                    Arg::Name(n) => n.state.is_some(),
                    _ => false,
                });
                if stateful {
                    s.push_str("[]");
                }
                s.push_str(e.quant.suffix());
            }
            Item::Group(_) => s.push('('),
        }
    }
    s.push('>');
    for t in ast.targets() {
        s.push(t.diagram.as_char());
    }
    s
}

fn signatures() -> &'static [(String, &'static CatalogEntry)] {
    static SIGS: OnceLock<Vec<(String, &'static CatalogEntry)>> = OnceLock::new();
    SIGS.get_or_init(|| {
        let forms = CATALOG.iter().filter_map(|e| e.ast().ok().map(|ast| (signature(&ast), e)));
        let aliases = CATALOG
            .iter()
            .flat_map(|e| e.aliases.iter().filter_map(move |a| parse_rule(a).ok().map(|ast| (signature(&ast), e))));
        forms.chain(aliases).collect()
    })
}

/// The catalog form a (possibly parameterized) rule instantiates.
pub fn classify(ast: &RuleAst) -> Option<&'static CatalogEntry> {
    let sig = signature(ast);
    signatures().iter().find(|(s, _)| *s == sig).map(|(_, e)| *e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_executable_forms() {
        let executable: Vec<_> = builtin_catalog().iter().filter(|e| e.kind != Stub).collect();
        assert_eq!(executable.len(), 20);
        for e in executable {
            let ast = e.ast().unwrap();
            assert_eq!(classify(&ast).map(|c| c.key), Some(e.key), "{}", e.key);
            for alias in e.aliases {
                let a = parse_rule(alias).unwrap();
                assert_eq!(classify(&a).map(|c| c.key), Some(e.key), "{alias}");
            }
        }
    }

    #[test]
    fn lookup_by_index() {
        assert_eq!(lookup("R2.5a").unwrap().form, Some("BauA(pv+)+"));
        assert_eq!(lookup("r3.12b").unwrap().key, "C11");
        assert_eq!(lookup("C14").unwrap().form, Some("QlmlMqyq"));
        assert!(lookup("R9.9").is_none());
        let stub = lookup("R1.5a").unwrap();
        assert_eq!(stub.ast(), Err(DslError::NotExecutable("R1.5a".into())));
    }

    #[test]
    fn parameterized_rules_classify() {
        for (text, key) in [
            ("Xevi(:Decision)Ri(:Request)v(1.Request_service)i(:Decision)", "C1"),
            ("Revi(:Decision)Ba(Client)ua(Employee,Manager)", "C2"),
            ("Rivi(:Decision)Ba(Client)ua(Employee,Manager)", "C2"),
            ("Ai(:Request)vi(:Decision)Ccz(1..*)c", "C7"),
            ("Xi([Sent]:Decision)Ri", "S6"),
            ("Xi(:Decision)Ri", "S3"),
            ("Yu(Form_display)Ql(Registration)m(x::Y)l(Database)", "C13"),
        ] {
            assert_eq!(classify(&parse_rule(text).unwrap()).map(|e| e.key), Some(key), "{text}");
        }
        assert!(classify(&parse_rule("XeCc").unwrap()).is_none());
    }
}
