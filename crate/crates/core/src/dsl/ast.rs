use crate::model::ElementKind;
use crate::name::NameSpec;
use crate::table::DiagramLetter;

/// A parsed rule: the first part is the source diagram, the rest are
/// targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleAst {
    pub parts: Vec<DiagramPart>,
}

impl RuleAst {
    pub fn source(&self) -> &DiagramPart {
        &self.parts[0]
    }

    pub fn targets(&self) -> &[DiagramPart] {
        &self.parts[1..]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramPart {
    pub diagram: DiagramLetter,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quant {
    #[default]
    One,
    /// `+`
    Plus,
    /// `?`
    Opt,
}

impl Quant {
    pub fn suffix(self) -> &'static str {
        match self {
            Quant::One => "",
            Quant::Plus => "+",
            Quant::Opt => "?",
        }
    }
}

/// Letter of a rule item. Besides element kinds, rules use `z` for a
/// generic link and `y`, which only occurs in the component rule and is
/// executed as a dependency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemLetter {
    Element(ElementKind),
    Link,
    Dependency,
}

impl ItemLetter {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'z' => Some(ItemLetter::Link),
            'y' => Some(ItemLetter::Dependency),
            _ => ElementKind::from_letter(c).map(ItemLetter::Element),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            ItemLetter::Element(k) => k.letter(),
            ItemLetter::Link => 'z',
            ItemLetter::Dependency => 'y',
        }
    }

    /// Items that stand for edges rather than elements.
    pub fn is_edge(self) -> bool {
        matches!(
            self,
            ItemLetter::Link
                | ItemLetter::Dependency
                | ItemLetter::Element(ElementKind::Message | ElementKind::Transition)
        )
    }

    pub fn element_kind(self) -> Option<ElementKind> {
        match self {
            ItemLetter::Element(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Elem(ElemItem),
    Group(Group),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElemItem {
    pub letter: ItemLetter,
    pub stereotype: Option<String>,
    pub args: Vec<Arg>,
    pub quant: Quant,
}

impl ElemItem {
    pub fn new(letter: ItemLetter) -> Self {
        ElemItem { letter, stereotype: None, args: Vec::new(), quant: Quant::One }
    }

    pub fn pattern_ref(&self) -> Option<&PatternRef> {
        self.args.iter().find_map(|a| match a {
            Arg::Pattern(p) => Some(p),
            _ => None,
        })
    }

    /// Number of explicit occurrences the argument list asks for.
    pub fn occurrence_args(&self) -> Vec<OccurrenceArg<'_>> {
        let mut out = Vec::new();
        for a in &self.args {
            match a {
                Arg::Name(n) => out.push(OccurrenceArg::Name(n)),
                Arg::States(states) => out.extend(states.iter().map(|s| OccurrenceArg::State(s))),
                Arg::Multiplicity(_) | Arg::Pattern(_) => {}
            }
        }
        out
    }
}

/// One per-occurrence argument of an element item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OccurrenceArg<'a> {
    Name(&'a NameSpec),
    State(&'a str),
}

impl OccurrenceArg<'_> {
    pub fn to_spec(self) -> NameSpec {
        match self {
            OccurrenceArg::Name(n) => n.clone(),
            OccurrenceArg::State(s) => NameSpec::state_only(s),
        }
    }
}

/// `( items ( '|' items )* ) quant?`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub branches: Vec<Vec<Item>>,
    pub quant: Quant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Name(NameSpec),
    Pattern(PatternRef),
    /// `min..max`
    Multiplicity(String),
    /// `([Sent],[Registered])`
    States(Vec<String>),
}

/// A pattern named in braces. Depth 1 selects a business process pattern,
/// 2 a system use case realization pattern, 3 a sequence diagram pattern.
/// Trailing letters (`{Office}i`) restrict which placeholder roles take
/// their replacements from the rule's source binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternRef {
    pub depth: u8,
    pub name: String,
    pub roles: Vec<ElementKind>,
}

/// Flattens an item list the way targets are built: groups contribute
/// their first branch once.
pub fn flatten_once(items: &[Item]) -> Vec<&ElemItem> {
    let mut out = Vec::new();
    for item in items {
        match item {
            Item::Elem(e) => out.push(e),
            Item::Group(g) => {
                if let Some(first) = g.branches.first() {
                    out.extend(flatten_once(first));
                }
            }
        }
    }
    out
}
