//! The layered architecture table: thirteen diagram kinds arranged in four
//! views of two layers each.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Letter of a diagram kind. Declaration order is the table's row order,
/// which is also the order used for output and for fixpoint sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiagramLetter {
    X,
    R,
    B,
    A,
    U,
    C,
    S,
    Z,
    Y,
    J,
    T,
    Q,
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum View {
    Context,
    Business,
    System,
    Development,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UmlFamily {
    Activity,
    UseCase,
    Class,
    State,
    Sequence,
    Component,
}

/// One row of the architecture table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramKind {
    pub letter: DiagramLetter,
    pub view: View,
    pub layer: &'static str,
    pub family: UmlFamily,
    pub display_name: &'static str,
}

use DiagramLetter as L;
use UmlFamily as F;

const KINDS: [DiagramKind; 13] = [
    kind(L::X, View::Context, "Context", F::Activity, "Context Diagram"),
    kind(L::R, View::Context, "Process Decomposition", F::Activity, "Business Use Case Process Decomposition Diagram"),
    kind(L::B, View::Context, "Process Decomposition", F::UseCase, "Business Use Case Diagram"),
    kind(L::A, View::Business, "Business Process", F::Activity, "Business Use Case Realization Diagram"),
    kind(L::U, View::Business, "Logic", F::UseCase, "System Use Case Diagram"),
    kind(L::C, View::Business, "Logic", F::Class, "Business Class Diagram"),
    kind(L::S, View::Business, "Logic", F::State, "Business State Machine Diagram"),
    kind(L::Z, View::System, "User", F::Activity, "System Use Case Realization Diagram"),
    kind(L::Y, View::System, "Internal", F::UseCase, "Implementation Use Case Diagram"),
    kind(L::J, View::System, "Internal", F::Class, "System Class Diagram"),
    kind(L::T, View::System, "Internal", F::State, "System State Machine Diagram"),
    kind(L::Q, View::Development, "Sequence", F::Sequence, "Implementation Use Case Realization Diagram"),
    kind(L::M, View::Development, "Component", F::Component, "Component Diagram"),
];

const fn kind(
    letter: DiagramLetter,
    view: View,
    layer: &'static str,
    family: UmlFamily,
    display_name: &'static str,
) -> DiagramKind {
    DiagramKind { letter, view, layer, family, display_name }
}

impl DiagramLetter {
    pub const ALL: [DiagramLetter; 13] = [L::X, L::R, L::B, L::A, L::U, L::C, L::S, L::Z, L::Y, L::J, L::T, L::Q, L::M];

    pub fn from_char(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.as_char() == c)
    }

    pub fn as_char(self) -> char {
        match self {
            L::X => 'X',
            L::R => 'R',
            L::B => 'B',
            L::A => 'A',
            L::U => 'U',
            L::C => 'C',
            L::S => 'S',
            L::Z => 'Z',
            L::Y => 'Y',
            L::J => 'J',
            L::T => 'T',
            L::Q => 'Q',
            L::M => 'M',
        }
    }

    pub fn kind(self) -> &'static DiagramKind {
        &KINDS[self as usize]
    }

    pub fn family(self) -> UmlFamily {
        self.kind().family
    }

    /// Sweep tier used by the fixpoint driver: rules sourced in a higher
    /// layer run before rules sourced in a lower one. Diagrams sharing a
    /// layer share a tier.
    pub fn sweep_tier(self) -> u8 {
        match self {
            L::X => 0,
            L::R => 1,
            L::B => 2,
            L::A => 3,
            L::U | L::C | L::S => 4,
            L::Z => 5,
            L::Y | L::J | L::T => 6,
            L::Q => 7,
            L::M => 8,
        }
    }
}

impl fmt::Display for DiagramLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for UmlFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            F::Activity => "Activity",
            F::UseCase => "Use Case",
            F::Class => "Class",
            F::State => "State",
            F::Sequence => "Sequence",
            F::Component => "Component",
        };
        f.write_str(s)
    }
}

/// All thirteen rows, in table order.
pub fn all_kinds() -> &'static [DiagramKind; 13] {
    &KINDS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_indexed_by_letter() {
        for (i, k) in all_kinds().iter().enumerate() {
            assert_eq!(k.letter as usize, i);
            assert_eq!(DiagramLetter::from_char(k.letter.as_char()), Some(k.letter));
        }
    }

    #[test]
    fn letters_are_unique() {
        let mut chars: Vec<char> = DiagramLetter::ALL.iter().map(|l| l.as_char()).collect();
        chars.sort();
        chars.dedup();
        assert_eq!(chars.len(), 13);
    }

    #[test]
    fn selected_rows() {
        let x = DiagramLetter::X.kind();
        assert_eq!((x.view, x.layer, x.family), (View::Context, "Context", F::Activity));
        assert_eq!(x.display_name, "Context Diagram");
        let q = DiagramLetter::Q.kind();
        assert_eq!((q.view, q.layer, q.family), (View::Development, "Sequence", F::Sequence));
        assert_eq!(q.display_name, "Implementation Use Case Realization Diagram");
        assert_eq!(DiagramLetter::B.family(), F::UseCase);
        assert_eq!(DiagramLetter::R.family(), F::Activity);
        assert_eq!(DiagramLetter::from_char('W'), None);
    }
}
