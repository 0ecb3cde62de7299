use crate::model::{EdgeKind, ElementKind, ModelError};
use crate::table::{DiagramLetter, UmlFamily};

use ElementKind as K;

/// The edge kind that links `from` to `to` inside `diagram` when a rule
/// does not name one. Use case associations are accepted in both
/// directions; callers orient them actor to use case.
pub fn infer_edge(diagram: DiagramLetter, from: ElementKind, to: ElementKind) -> Result<EdgeKind, ModelError> {
    let kind = match (diagram.family(), from, to) {
        (UmlFamily::Activity, K::Activity | K::Event | K::ControlNode, K::Activity)
        | (UmlFamily::Activity, K::Activity, K::ControlNode) => Some(EdgeKind::ControlFlow),
        (UmlFamily::Activity, K::Activity, K::Instance) | (UmlFamily::Activity, K::Instance, K::Activity) => {
            Some(EdgeKind::DataFlow)
        }
        (UmlFamily::UseCase, K::Actor, K::UseCase) | (UmlFamily::UseCase, K::UseCase, K::Actor) => {
            Some(EdgeKind::Association)
        }
        (UmlFamily::Class, K::Class, K::Class) => Some(EdgeKind::Association),
        (UmlFamily::State, K::StateInvariant | K::ControlNode, K::StateInvariant) => Some(EdgeKind::Transition),
        (UmlFamily::State, K::Region, K::StateInvariant | K::ControlNode) => Some(EdgeKind::Containment),
        (UmlFamily::Sequence, K::Lifeline, K::Lifeline) => Some(EdgeKind::Message),
        (UmlFamily::Component, K::Component, K::Component) => Some(EdgeKind::Dependency),
        _ => None,
    };
    kind.ok_or(ModelError::NoEdgeKind { from, to, diagram })
}

#[cfg(test)]
mod tests {
    use super::*;
    use DiagramLetter as L;

    #[test]
    fn table() {
        assert_eq!(infer_edge(L::A, K::Activity, K::Instance), Ok(EdgeKind::DataFlow));
        assert_eq!(infer_edge(L::A, K::Activity, K::Activity), Ok(EdgeKind::ControlFlow));
        assert_eq!(infer_edge(L::B, K::Actor, K::UseCase), Ok(EdgeKind::Association));
        assert_eq!(infer_edge(L::B, K::UseCase, K::Actor), Ok(EdgeKind::Association));
        assert_eq!(infer_edge(L::C, K::Class, K::Class), Ok(EdgeKind::Association));
        assert_eq!(infer_edge(L::S, K::StateInvariant, K::StateInvariant), Ok(EdgeKind::Transition));
        assert_eq!(infer_edge(L::Q, K::Lifeline, K::Lifeline), Ok(EdgeKind::Message));
        assert_eq!(infer_edge(L::M, K::Component, K::Component), Ok(EdgeKind::Dependency));
        assert!(matches!(infer_edge(L::A, K::Actor, K::Actor), Err(ModelError::NoEdgeKind { .. })));
        assert!(infer_edge(L::A, K::Instance, K::Instance).is_err());
    }

    #[test]
    fn inferred_edges_are_allowed() {
        for letter in DiagramLetter::ALL {
            for from in ElementKind::ALL {
                for to in ElementKind::ALL {
                    if let Ok(kind) = infer_edge(letter, from, to) {
                        let (a, b) = if (from, to) == (K::UseCase, K::Actor) { (to, from) } else { (from, to) };
                        assert!(crate::model::edge_allowed(letter.family(), kind, a, b), "{letter:?} {from:?} {to:?}");
                    }
                }
            }
        }
    }
}
