//! Which element kinds may live in which diagram family, and which edges
//! may join them.

use super::kinds::{EdgeKind, ElementKind};
use crate::table::{DiagramLetter, UmlFamily};

use EdgeKind as E;
use ElementKind as K;

pub fn element_allowed(family: UmlFamily, kind: ElementKind) -> bool {
    let allowed: &[ElementKind] = match family {
        UmlFamily::Activity => &[K::Event, K::Activity, K::Instance, K::ControlNode, K::Partition],
        UmlFamily::UseCase => &[K::Actor, K::UseCase],
        UmlFamily::Class => &[K::Class],
        UmlFamily::State => &[K::Region, K::StateInvariant, K::ControlNode],
        UmlFamily::Sequence => &[K::Lifeline],
        UmlFamily::Component => &[K::Component],
    };
    allowed.contains(&kind)
}

/// Directed `(kind, from, to)` triples permitted inside one diagram.
pub fn edge_allowed(family: UmlFamily, kind: EdgeKind, from: ElementKind, to: ElementKind) -> bool {
    let pairs: &[(ElementKind, ElementKind)] = match (family, kind) {
        (UmlFamily::Activity, E::ControlFlow) => &[
            (K::Event, K::Activity),
            (K::Activity, K::Activity),
            (K::ControlNode, K::Activity),
            (K::Activity, K::ControlNode),
        ],
        (UmlFamily::Activity, E::DataFlow) => &[(K::Activity, K::Instance), (K::Instance, K::Activity)],
        (UmlFamily::UseCase, E::Association) => &[(K::Actor, K::UseCase), (K::UseCase, K::Actor)],
        (UmlFamily::UseCase, E::Include | E::Extend) => &[(K::UseCase, K::UseCase)],
        (UmlFamily::Class, E::Association) => &[(K::Class, K::Class)],
        (UmlFamily::State, E::Transition) => {
            &[(K::StateInvariant, K::StateInvariant), (K::ControlNode, K::StateInvariant)]
        }
        (UmlFamily::State, E::Containment) => &[(K::Region, K::StateInvariant), (K::Region, K::ControlNode)],
        (UmlFamily::Sequence, E::Message) => &[(K::Lifeline, K::Lifeline)],
        (UmlFamily::Component, E::Dependency) => &[(K::Component, K::Component)],
        _ => &[],
    };
    pairs.contains(&(from, to))
}

/// Realization is the one edge allowed to leave its diagram: from an
/// implementation use case to the system use case it realizes.
pub fn realization_allowed(
    from_diagram: DiagramLetter,
    from: ElementKind,
    to_diagram: DiagramLetter,
    to: ElementKind,
) -> bool {
    from_diagram == DiagramLetter::Y && to_diagram == DiagramLetter::U && from == K::UseCase && to == K::UseCase
}

/// A `min..max` multiplicity with `max >= min` or `max == *`.
pub fn multiplicity_valid(text: &str) -> bool {
    let Some((min, max)) = text.split_once("..") else {
        return false;
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(min) {
        return false;
    }
    if max == "*" {
        return true;
    }
    digits(max)
        && match (min.parse::<u64>(), max.parse::<u64>()) {
            (Ok(a), Ok(b)) => b >= a,
            _ => false,
        }
}
