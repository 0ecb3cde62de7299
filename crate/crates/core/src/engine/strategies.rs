//! Rules whose short form leaves iteration implicit and which therefore
//! need a dedicated construction.

use super::build::{BuildError, BuildResult, Builder};
use crate::dsl::{flatten_once, Arg, RuleAst};
use crate::model::{EdgeKind, Element, ElementId, ElementKind, ItemRef};
use crate::name::NameSpec;
use crate::table::DiagramLetter;
use std::collections::BTreeSet;

use ElementKind as K;

fn anchor(b: &Builder<'_>, kind: ElementKind) -> BuildResult<Element> {
    let id =
        b.binding.anchor_element().ok_or_else(|| BuildError::Unresolved("rule must be placed on an element".into()))?;
    let (_, el) = b.arch.element(id).expect("anchor exists");
    if el.kind != kind {
        return Err(BuildError::Unresolved(format!("rule must be placed on a {}", kind.meaning())));
    }
    Ok(el.clone())
}

fn members(b: &Builder<'_>, owner: &Element, kind: ElementKind) -> Vec<Element> {
    let (letter, _) = b.arch.element(owner.id).expect("exists");
    b.arch.diagram(letter).expect("exists").contained_in(owner.id).filter(|e| e.kind == kind).cloned().collect()
}

fn label_of(e: &Element) -> String {
    e.spec.display_name().map(str::to_string).unwrap_or_else(|| e.spec.to_string())
}

/// Scenario steps of the anchored use case, in order: plain steps become
/// actions, `name[State]:Class` steps become instances. A start node opens
/// the flow and a stop node closes it.
pub(crate) fn scenario(b: &mut Builder<'_>, rule: &RuleAst) -> BuildResult<()> {
    let uc = anchor(b, K::UseCase)?;
    if uc.scenario.is_empty() {
        return Err(BuildError::Unresolved(format!("use case {} has no scenario", uc.spec)));
    }
    let letter = rule.targets()[0].diagram;
    b.arch.ensure_diagram(letter);
    let flow = NameSpec::named(label_of(&uc));
    let start = b.element(letter, K::ControlNode, flow.clone(), Some("start".into()), None)?;
    let mut last_action: Option<ElementId> = None;
    let mut waiting: Vec<ElementId> = Vec::new();
    for step in &uc.scenario {
        let spec = NameSpec::parse(step.trim()).unwrap_or_else(|_| NameSpec::named(step.trim()));
        if spec.state.is_some() || spec.classifier.is_some() {
            let i = b.element(letter, K::Instance, spec, None, None)?;
            if let Some(v) = last_action {
                b.edge(letter, EdgeKind::DataFlow, v, i, None, None, None)?;
            }
            waiting.push(i);
        } else {
            let v = b.element(letter, K::Activity, spec, None, None)?;
            b.edge(letter, EdgeKind::ControlFlow, last_action.unwrap_or(start), v, None, None, None)?;
            for i in waiting.drain(..) {
                b.edge(letter, EdgeKind::DataFlow, i, v, None, None, None)?;
            }
            last_action = Some(v);
        }
    }
    let Some(last) = last_action else {
        return Err(BuildError::Unresolved(format!("scenario of {} has no action step", uc.spec)));
    };
    let stop = b.element(letter, K::ControlNode, flow, Some("stop".into()), None)?;
    b.edge(letter, EdgeKind::ControlFlow, last, stop, None, None, None)?;
    Ok(())
}

/// An actor named after the anchored partition, associated with one use
/// case per action in the partition.
pub(crate) fn partition_use_cases(b: &mut Builder<'_>, rule: &RuleAst) -> BuildResult<()> {
    let p = anchor(b, K::Partition)?;
    let part = &rule.targets()[0];
    let letter = part.diagram;
    b.arch.ensure_diagram(letter);
    let items = flatten_once(&part.items);
    let explicit = |kind: ElementKind| {
        items.iter().filter(|i| i.letter.element_kind() == Some(kind)).find_map(|i| {
            i.args.iter().find_map(|a| match a {
                Arg::Name(n) => Some(n.clone()),
                _ => None,
            })
        })
    };
    let actor_spec = explicit(K::Actor).unwrap_or_else(|| NameSpec::named(label_of(&p)));
    let actor = b.element(letter, K::Actor, actor_spec, None, None)?;
    for v in members(b, &p, K::Activity) {
        let u = b.element(letter, K::UseCase, NameSpec::named(label_of(&v)), None, None)?;
        b.edge(letter, EdgeKind::Association, actor, u, None, None, None)?;
    }
    Ok(())
}

/// Object states along the anchored instance's flow. Each classifier gets
/// a region; each stateful instance becomes a state of it, entered from an
/// initial node or from the previous state through the action that
/// consumed the previous instance.
pub(crate) fn object_lifecycles(b: &mut Builder<'_>, rule: &RuleAst) -> BuildResult<()> {
    let anchor_el = anchor(b, K::Instance)?;
    let src_letter = b.binding.diagram;
    let letter = rule.targets()[0].diagram;
    let d = b.arch.diagram(src_letter).expect("source").clone();

    let mut seen = BTreeSet::from([anchor_el.id]);
    let mut queue = vec![anchor_el.id];
    while let Some(id) = queue.pop() {
        for e in &d.edges {
            let other = if e.from == id {
                e.to
            } else if e.to == id {
                e.from
            } else {
                continue;
            };
            if d.element(other).is_some() && seen.insert(other) {
                queue.push(other);
            }
        }
    }
    let instances: Vec<&Element> = d
        .elements
        .iter()
        .filter(|e| seen.contains(&e.id) && e.kind == K::Instance)
        .filter(|e| e.spec.state.is_some() && e.spec.classifier.is_some())
        .collect();
    let mut classes: Vec<&str> = Vec::new();
    for i in &instances {
        let c = i.spec.classifier.as_deref().expect("filtered");
        if !classes.contains(&c) {
            classes.push(c);
        }
    }
    if classes.is_empty() {
        return Err(BuildError::Unresolved("no stateful instances along the flow".into()));
    }
    b.arch.ensure_diagram(letter);
    for class in classes {
        let region = b.element(letter, K::Region, NameSpec::named(class), None, None)?;
        let mut prev: Option<(ElementId, ElementId)> = None;
        for inst in instances.iter().filter(|i| i.spec.classifier.as_deref() == Some(class)) {
            let state = inst.spec.state.clone().expect("filtered");
            let s = b.element(letter, K::StateInvariant, NameSpec::in_state(state, class), None, Some(region))?;
            match prev {
                None => {
                    let n = b.element(
                        letter,
                        K::ControlNode,
                        NameSpec::of_class(class),
                        Some("initial".into()),
                        Some(region),
                    )?;
                    b.edge(letter, EdgeKind::Transition, n, s, None, None, None)?;
                }
                Some((prev_state, prev_inst)) => {
                    let trigger = d
                        .edges_from(prev_inst)
                        .filter_map(|e| d.element(e.to))
                        .find(|v| v.kind == K::Activity)
                        .map(label_of);
                    b.edge(letter, EdgeKind::Transition, prev_state, s, trigger, None, None)?;
                }
            }
            prev = Some((s, inst.id));
        }
    }
    Ok(())
}

/// One implementation use case per action of the anchored partition, each
/// realizing the system use case the partition was derived from.
pub(crate) fn realizations(b: &mut Builder<'_>, rule: &RuleAst) -> BuildResult<()> {
    let p = anchor(b, K::Partition)?;
    let targets = rule.targets();
    let y = targets[0].diagram;
    let u = targets.get(1).map(|t| t.diagram).unwrap_or(DiagramLetter::U);
    let origin = b
        .arch
        .traces
        .iter()
        .filter(|t| t.targets.contains(&ItemRef::Element(p.id)))
        .find_map(|t| match t.anchor {
            ItemRef::Element(a) => {
                b.arch.element(a).filter(|(l, e)| *l == u && e.kind == K::UseCase).map(|(_, e)| e.id)
            }
            ItemRef::Edge(_) => None,
        })
        .ok_or_else(|| {
            BuildError::Unresolved(format!("partition {} was not derived from a use case of {u}", p.spec))
        })?;
    b.arch.ensure_diagram(y);
    for v in members(b, &p, K::Activity) {
        let name = strip_step_number(&label_of(&v)).to_string();
        let uc = b.element(y, K::UseCase, NameSpec::named(name), None, None)?;
        b.edge(y, EdgeKind::Realization, uc, origin, None, None, None)?;
    }
    Ok(())
}

/// `3.Data_verification` → `Data_verification`.
pub(crate) fn strip_step_number(name: &str) -> &str {
    let digits = name.bytes().take_while(u8::is_ascii_digit).count();
    if digits > 0 && name[digits..].starts_with('.') {
        let rest = name[digits + 1..].trim_start();
        if !rest.is_empty() {
            return rest;
        }
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_numbers() {
        assert_eq!(strip_step_number("1.Form_display"), "Form_display");
        assert_eq!(strip_step_number("12. Approve"), "Approve");
        assert_eq!(strip_step_number("Form_display"), "Form_display");
        assert_eq!(strip_step_number("1."), "1.");
        assert_eq!(strip_step_number("v1.2"), "v1.2");
    }
}
