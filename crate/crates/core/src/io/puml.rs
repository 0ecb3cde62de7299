use crate::model::{Architecture, Diagram, Edge, EdgeKind, Element, ElementId, ElementKind};
use crate::table::UmlFamily;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use ElementKind as K;

/// `A_business_process_diagram.puml` for diagram A.
pub fn puml_file_name(diagram: &Diagram) -> String {
    let mut slug = String::new();
    for c in diagram.name.chars() {
        if c.is_alphanumeric() {
            slug.extend(c.to_lowercase());
        } else if !slug.ends_with('_') {
            slug.push('_');
        }
    }
    let slug = slug.trim_matches('_');
    if slug.is_empty() {
        format!("{}.puml", diagram.letter.as_char())
    } else {
        format!("{}_{slug}.puml", diagram.letter.as_char())
    }
}

fn q(s: &str) -> String {
    s.replace('"', "'")
}

fn alias(id: ElementId) -> String {
    format!("e{}", id.0)
}

fn label(el: &Element) -> String {
    match (&el.spec.state, el.kind) {
        (Some(s), K::StateInvariant) => s.clone(),
        (Some(s), _) => match el
            .spec
            .name
            .as_deref()
            .map(str::to_string)
            .or_else(|| el.spec.classifier.as_ref().map(|c| format!(":{c}")))
        {
            Some(n) => format!("{n} [{s}]"),
            None => format!("[{s}]"),
        },
        (None, _) => el.spec.to_string(),
    }
}

fn stereo(el: &Element) -> String {
    el.stereotype.as_ref().map(|s| format!(" <<{s}>>")).unwrap_or_default()
}

/// Renders one diagram as a PlantUML document. Output depends only on the
/// diagram's content and creation order.
pub fn emit_plantuml(arch: &Architecture, diagram: &Diagram) -> String {
    let mut out = String::from("@startuml\n");
    let _ = writeln!(out, "title {}", q(&diagram.name));
    match diagram.family() {
        UmlFamily::Activity => activity(&mut out, diagram),
        UmlFamily::UseCase => use_case(&mut out, arch, diagram),
        UmlFamily::Class => class(&mut out, arch, diagram),
        UmlFamily::State => state(&mut out, diagram),
        UmlFamily::Sequence => sequence(&mut out, diagram),
        UmlFamily::Component => component(&mut out, arch, diagram),
    }
    out.push_str("@enduml\n");
    out
}

/// Flow nodes in dependency order, ties broken by creation order.
fn flow_order(d: &Diagram) -> Vec<&Element> {
    let nodes: Vec<&Element> = d.elements.iter().filter(|e| !e.kind.is_container()).collect();
    let ids: BTreeSet<ElementId> = nodes.iter().map(|e| e.id).collect();
    let flows: Vec<&Edge> = d
        .edges
        .iter()
        .filter(|e| matches!(e.kind, EdgeKind::ControlFlow | EdgeKind::DataFlow))
        .filter(|e| ids.contains(&e.from) && ids.contains(&e.to) && e.from != e.to)
        .collect();
    let mut placed: BTreeSet<ElementId> = BTreeSet::new();
    let mut order = Vec::new();
    while order.len() < nodes.len() {
        let ready = nodes
            .iter()
            .filter(|n| !placed.contains(&n.id))
            .find(|n| flows.iter().all(|f| f.to != n.id || placed.contains(&f.from)))
            .or_else(|| nodes.iter().find(|n| !placed.contains(&n.id)))
            .copied()
            .expect("unplaced node left");
        placed.insert(ready.id);
        order.push(ready);
    }
    order
}

fn activity(out: &mut String, d: &Diagram) {
    let mut lane: Option<ElementId> = None;
    for el in flow_order(d) {
        if let Some(c) = el.container {
            if lane != Some(c) {
                if let Some(p) = d.element(c) {
                    let _ = writeln!(out, "|{}|", q(&label(p)));
                }
                lane = Some(c);
            }
        }
        let text = q(&label(el));
        match (el.kind, el.stereotype.as_deref()) {
            (K::ControlNode, Some("start" | "initial")) => out.push_str("start\n"),
            (K::ControlNode, Some("stop" | "final")) => out.push_str("stop\n"),
            (K::Event, _) => {
                let _ = writeln!(out, ":{text}<");
            }
            (K::Instance, _) => {
                let _ = writeln!(out, ":{text}{}]", stereo(el));
            }
            _ => {
                let _ = writeln!(out, ":{text}{};", stereo(el));
            }
        }
    }
}

/// Declares elements of other diagrams that this diagram's edges point at.
fn foreign(out: &mut String, arch: &Architecture, d: &Diagram, keyword: &str) {
    let mut seen = BTreeSet::new();
    for e in &d.edges {
        if d.element(e.to).is_none() && seen.insert(e.to) {
            if let Some((l, el)) = arch.element(e.to) {
                let _ = writeln!(out, "{keyword} \"{}\" as {} <<{}>>", q(&label(el)), alias(el.id), l.as_char());
            }
        }
    }
}

fn arrow(kind: EdgeKind) -> (&'static str, Option<&'static str>) {
    match kind {
        EdgeKind::Association => ("--", None),
        EdgeKind::Include => ("..>", Some("<<include>>")),
        EdgeKind::Extend => ("..>", Some("<<extend>>")),
        EdgeKind::Dependency => ("..>", None),
        EdgeKind::Realization => ("..|>", None),
        EdgeKind::Containment => ("+--", None),
        _ => ("-->", None),
    }
}

fn plain_edges(out: &mut String, d: &Diagram) {
    for e in &d.edges {
        let (a, tag) = arrow(e.kind);
        let text: Vec<String> = tag.map(str::to_string).into_iter().chain(e.label.as_deref().map(q)).collect();
        let mult = e.multiplicity.as_deref().map(|m| format!("\"{m}\" ")).unwrap_or_default();
        let _ = write!(out, "{} {a} {mult}{}", alias(e.from), alias(e.to));
        if !text.is_empty() {
            let _ = write!(out, " : {}", text.join(" "));
        }
        out.push('\n');
    }
}

fn use_case(out: &mut String, arch: &Architecture, d: &Diagram) {
    out.push_str("left to right direction\n");
    for el in &d.elements {
        let keyword = if el.kind == K::Actor { "actor" } else { "usecase" };
        let _ = writeln!(out, "{keyword} \"{}\" as {}{}", q(&label(el)), alias(el.id), stereo(el));
    }
    foreign(out, arch, d, "usecase");
    plain_edges(out, d);
}

fn class(out: &mut String, arch: &Architecture, d: &Diagram) {
    for el in &d.elements {
        let keyword = if el.kind == K::Instance { "object" } else { "class" };
        let _ = write!(out, "{keyword} \"{}\" as {}{}", q(&label(el)), alias(el.id), stereo(el));
        if el.operations.is_empty() {
            out.push('\n');
        } else {
            out.push_str(" {\n");
            for op in &el.operations {
                let _ = writeln!(out, "  +{}", q(&op.to_string()));
            }
            out.push_str("}\n");
        }
    }
    foreign(out, arch, d, "class");
    plain_edges(out, d);
}

fn is_pseudo(el: &Element) -> bool {
    el.kind == K::ControlNode
}

fn state(out: &mut String, d: &Diagram) {
    let end = |id: ElementId| -> String {
        match d.element(id) {
            Some(el) if is_pseudo(el) => "[*]".into(),
            _ => alias(id),
        }
    };
    let transition = |out: &mut String, e: &Edge, pad: &str| {
        let _ = write!(out, "{pad}{} --> {}", end(e.from), end(e.to));
        if let Some(l) = &e.label {
            let _ = write!(out, " : {}", q(l));
        }
        out.push('\n');
    };
    let mut done = BTreeSet::new();
    for el in d.elements.iter().filter(|e| e.container.is_none()) {
        if el.kind.is_container() {
            let _ = writeln!(out, "state \"{}\" as {}{} {{", q(&label(el)), alias(el.id), stereo(el));
            for m in d.contained_in(el.id).filter(|m| !is_pseudo(m)) {
                let _ = writeln!(out, "  state \"{}\" as {}{}", q(&label(m)), alias(m.id), stereo(m));
            }
            let inside = |id| d.element(id).is_some_and(|x| x.container == Some(el.id));
            for e in d.edges.iter().filter(|e| inside(e.from) && inside(e.to)) {
                transition(out, e, "  ");
                done.insert(e.id);
            }
            out.push_str("}\n");
        } else if !is_pseudo(el) {
            let _ = writeln!(out, "state \"{}\" as {}{}", q(&label(el)), alias(el.id), stereo(el));
        }
    }
    for e in d.edges.iter().filter(|e| !done.contains(&e.id)) {
        transition(out, e, "");
    }
}

fn sequence(out: &mut String, d: &Diagram) {
    for el in &d.elements {
        let _ = writeln!(out, "participant \"{}\" as {}{}", q(&label(el)), alias(el.id), stereo(el));
    }
    for e in &d.edges {
        let _ = write!(out, "{} -> {}", alias(e.from), alias(e.to));
        if let Some(l) = &e.label {
            let _ = write!(out, " : {}", q(l));
        }
        out.push('\n');
        if let Some(r) = &e.returns {
            let _ = writeln!(out, "{} --> {} : {}", alias(e.to), alias(e.from), q(r));
        }
    }
}

fn component(out: &mut String, arch: &Architecture, d: &Diagram) {
    for el in &d.elements {
        let _ = writeln!(out, "component \"{}\" as {}{}", q(&label(el)), alias(el.id), stereo(el));
    }
    foreign(out, arch, d, "component");
    plain_edges(out, d);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::NameSpec;
    use crate::table::DiagramLetter;

    #[test]
    fn empty_document() {
        let mut a = Architecture::new("t");
        a.ensure_diagram(DiagramLetter::C);
        let d = a.diagram(DiagramLetter::C).unwrap();
        let text = emit_plantuml(&a, d);
        assert!(text.starts_with("@startuml\ntitle "));
        assert!(text.ends_with("@enduml\n"));
        let name = puml_file_name(d);
        assert!(name.starts_with("C_") && name.ends_with(".puml"), "{name}");
    }

    #[test]
    fn file_names() {
        let mut d = Diagram::new(DiagramLetter::A);
        d.name = "Business Process  Diagram!".into();
        assert_eq!(puml_file_name(&d), "A_business_process_diagram.puml");
    }

    #[test]
    fn sequence_and_states() {
        let mut a = Architecture::new("t");
        let l = DiagramLetter::Q;
        let (x, _) = a.find_or_create_element(l, K::Lifeline, NameSpec::named("Registration"), None, None).unwrap();
        let (y, _) = a.find_or_create_element(l, K::Lifeline, NameSpec::of_class("MQRabbit"), None, None).unwrap();
        a.create_edge_full(l, EdgeKind::Message, x, y, Some("downLoad<Requests>".into()), None, Some("Request".into()))
            .unwrap();
        let text = emit_plantuml(&a, a.diagram(l).unwrap());
        assert!(text.contains("participant \"Registration\" as e1\n"));
        assert!(text.contains("participant \":MQRabbit\" as e2\n"));
        assert!(text.contains("e1 -> e2 : downLoad<Requests>\n"));
        assert!(text.contains("e2 --> e1 : Request\n"));

        let s = DiagramLetter::S;
        let (r, _) = a.find_or_create_element(s, K::Region, NameSpec::named("Request"), None, None).unwrap();
        let (n, _) = a
            .find_or_create_element(s, K::ControlNode, NameSpec::of_class("Request"), Some("initial".into()), Some(r))
            .unwrap();
        let (st, _) = a
            .find_or_create_element(s, K::StateInvariant, NameSpec::in_state("Sent", "Request"), None, Some(r))
            .unwrap();
        a.create_edge(s, EdgeKind::Transition, n, st, None, None).unwrap();
        let text = emit_plantuml(&a, a.diagram(s).unwrap());
        assert!(text.contains("state \"Request\" as e3 {\n  state \"Sent\" as e5\n  [*] --> e5\n}\n"), "{text}");
    }
}
