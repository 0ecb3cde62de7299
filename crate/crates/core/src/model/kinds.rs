use serde::{Deserialize, Serialize};
use std::fmt;

/// Element letters used in rule text and model files.
///
/// `h`, `m` and `t` are listed for completeness: operations live on classes
/// and messages and transitions are edges, so no diagram ever stores an
/// element of those kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Event,
    Activity,
    Class,
    Instance,
    Actor,
    UseCase,
    ControlNode,
    Region,
    StateInvariant,
    Operation,
    Lifeline,
    Message,
    Component,
    Partition,
    Transition,
}

impl ElementKind {
    pub const ALL: [ElementKind; 15] = [
        ElementKind::Event,
        ElementKind::Activity,
        ElementKind::Class,
        ElementKind::Instance,
        ElementKind::Actor,
        ElementKind::UseCase,
        ElementKind::ControlNode,
        ElementKind::Region,
        ElementKind::StateInvariant,
        ElementKind::Operation,
        ElementKind::Lifeline,
        ElementKind::Message,
        ElementKind::Component,
        ElementKind::Partition,
        ElementKind::Transition,
    ];

    pub fn letter(self) -> char {
        match self {
            ElementKind::Event => 'e',
            ElementKind::Activity => 'v',
            ElementKind::Class => 'c',
            ElementKind::Instance => 'i',
            ElementKind::Actor => 'a',
            ElementKind::UseCase => 'u',
            ElementKind::ControlNode => 'n',
            ElementKind::Region => 'r',
            ElementKind::StateInvariant => 's',
            ElementKind::Operation => 'h',
            ElementKind::Lifeline => 'l',
            ElementKind::Message => 'm',
            ElementKind::Component => 'q',
            ElementKind::Partition => 'p',
            ElementKind::Transition => 't',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.letter() == c)
    }

    pub fn meaning(self) -> &'static str {
        match self {
            ElementKind::Event => "event",
            ElementKind::Activity => "activity/action",
            ElementKind::Class => "class",
            ElementKind::Instance => "instance",
            ElementKind::Actor => "actor",
            ElementKind::UseCase => "use case",
            ElementKind::ControlNode => "control node",
            ElementKind::Region => "region",
            ElementKind::StateInvariant => "state invariant",
            ElementKind::Operation => "operation",
            ElementKind::Lifeline => "lifeline",
            ElementKind::Message => "message",
            ElementKind::Component => "component",
            ElementKind::Partition => "partition",
            ElementKind::Transition => "transition",
        }
    }

    /// Keyword used in model files. `action` is accepted as a synonym of
    /// `activity` when reading.
    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::Event => "event",
            ElementKind::Activity => "activity",
            ElementKind::Class => "class",
            ElementKind::Instance => "instance",
            ElementKind::Actor => "actor",
            ElementKind::UseCase => "usecase",
            ElementKind::ControlNode => "node",
            ElementKind::Region => "region",
            ElementKind::StateInvariant => "state",
            ElementKind::Operation => "operation",
            ElementKind::Lifeline => "lifeline",
            ElementKind::Message => "message",
            ElementKind::Component => "component",
            ElementKind::Partition => "partition",
            ElementKind::Transition => "transition",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "event" => Some(ElementKind::Event),
            "activity" | "action" => Some(ElementKind::Activity),
            "instance" => Some(ElementKind::Instance),
            "class" => Some(ElementKind::Class),
            "actor" => Some(ElementKind::Actor),
            "usecase" => Some(ElementKind::UseCase),
            "node" => Some(ElementKind::ControlNode),
            "region" => Some(ElementKind::Region),
            "state" => Some(ElementKind::StateInvariant),
            "lifeline" => Some(ElementKind::Lifeline),
            "component" => Some(ElementKind::Component),
            "partition" => Some(ElementKind::Partition),
            _ => None,
        }
    }

    /// Kinds that own other elements through `Element::container`.
    pub fn is_container(self) -> bool {
        matches!(self, ElementKind::Partition | ElementKind::Region)
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EdgeKind {
    ControlFlow,
    DataFlow,
    Association,
    Include,
    Extend,
    Transition,
    Message,
    Dependency,
    Realization,
    Containment,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 10] = [
        EdgeKind::ControlFlow,
        EdgeKind::DataFlow,
        EdgeKind::Association,
        EdgeKind::Include,
        EdgeKind::Extend,
        EdgeKind::Transition,
        EdgeKind::Message,
        EdgeKind::Dependency,
        EdgeKind::Realization,
        EdgeKind::Containment,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            EdgeKind::ControlFlow => "control",
            EdgeKind::DataFlow => "data",
            EdgeKind::Association => "association",
            EdgeKind::Include => "include",
            EdgeKind::Extend => "extend",
            EdgeKind::Transition => "transition",
            EdgeKind::Message => "message",
            EdgeKind::Dependency => "dependency",
            EdgeKind::Realization => "realization",
            EdgeKind::Containment => "containment",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == word)
    }

    /// Edge kind selected by a `z` stereotype in rule text.
    pub fn from_flow_stereotype(stereotype: &str) -> Option<Self> {
        match stereotype {
            "control" => Some(EdgeKind::ControlFlow),
            "data" => Some(EdgeKind::DataFlow),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}
