use crate::dsl::{parse_rule, render, DslError};
use crate::model::{Architecture, Attachment, Diagram, Edge, Element, ElementId, ElementKind, Host, TraceLink};
use crate::name::NameSpec;
use crate::pattern::PatternInstance;
use crate::table::DiagramLetter;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("attachment {index}: {source}")]
    Rule { index: usize, source: DslError },
    #[error("attachment {index}: {message}")]
    Host { index: usize, message: String },
    #[error("{0}")]
    Model(String),
}

#[derive(Serialize, Deserialize)]
struct JsonArch {
    diagrams: Vec<JsonDiagram>,
    attachments: Vec<JsonAttachment>,
    traces: Vec<TraceLink>,
    patterns: Vec<PatternInstance>,
    name: String,
}

#[derive(Serialize, Deserialize)]
struct JsonDiagram {
    letter: DiagramLetter,
    name: String,
    elements: Vec<JsonElement>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct JsonElement {
    id: ElementId,
    kind: ElementKind,
    name: Option<String>,
    state: Option<String>,
    classifier: Option<String>,
    stereotype: Option<String>,
    container: Option<ElementId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    scenario: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    operations: Vec<NameSpec>,
}

#[derive(Serialize, Deserialize)]
struct JsonAttachment {
    host_diagram: DiagramLetter,
    host: Host,
    rule: String,
    fired: bool,
}

/// Lossless JSON export of diagrams, attachments, traces and pattern
/// instances.
pub fn emit_json(arch: &Architecture) -> String {
    let doc = JsonArch {
        diagrams: arch
            .diagrams()
            .map(|d| JsonDiagram {
                letter: d.letter,
                name: d.name.clone(),
                elements: d
                    .elements
                    .iter()
                    .map(|e| JsonElement {
                        id: e.id,
                        kind: e.kind,
                        name: e.spec.name.clone(),
                        state: e.spec.state.clone(),
                        classifier: e.spec.classifier.clone(),
                        stereotype: e.stereotype.clone(),
                        container: e.container,
                        scenario: e.scenario.clone(),
                        operations: e.operations.clone(),
                    })
                    .collect(),
                edges: d.edges.clone(),
            })
            .collect(),
        attachments: arch
            .attachments
            .iter()
            .map(|a| JsonAttachment {
                host_diagram: a.host_diagram,
                host: a.host.clone(),
                rule: render(&a.rule),
                fired: a.fired,
            })
            .collect(),
        traces: arch.traces.clone(),
        patterns: arch.patterns.clone(),
        name: arch.name.clone(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    text
}

/// Reads a document written by [`emit_json`].
pub fn import_json(text: &str) -> Result<Architecture, JsonError> {
    let doc: JsonArch = serde_json::from_str(text)?;
    let diagrams = doc
        .diagrams
        .into_iter()
        .map(|d| Diagram {
            letter: d.letter,
            name: d.name,
            elements: d
                .elements
                .into_iter()
                .map(|e| Element {
                    id: e.id,
                    kind: e.kind,
                    spec: NameSpec { name: e.name, state: e.state, classifier: e.classifier },
                    stereotype: e.stereotype,
                    container: e.container,
                    scenario: e.scenario,
                    operations: e.operations,
                })
                .collect(),
            edges: d.edges,
        })
        .collect();
    let attachments = doc
        .attachments
        .into_iter()
        .enumerate()
        .map(|(index, a)| {
            let rule = parse_rule(&a.rule).map_err(|source| JsonError::Rule { index, source })?;
            let mut att = Attachment::new(a.host_diagram, a.host, rule)
                .map_err(|e| JsonError::Host { index, message: e.to_string() })?;
            att.fired = a.fired;
            Ok(att)
        })
        .collect::<Result<Vec<_>, JsonError>>()?;
    let arch = Architecture::from_parts(doc.name, diagrams, attachments, doc.traces, doc.patterns);
    arch.validate().map_err(|e| JsonError::Model(e.to_string()))?;
    Ok(arch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EdgeKind;

    #[test]
    fn empty_skeleton() {
        let text = emit_json(&Architecture::new("e"));
        let compact: String = text.split_whitespace().collect();
        assert!(compact.starts_with("{\"diagrams\":[]"), "{text}");
        assert_eq!(import_json(&text).unwrap(), Architecture::new("e"));
    }

    #[test]
    fn round_trip() {
        let mut a = Architecture::new("t");
        let l = DiagramLetter::C;
        let (x, _) = a.find_or_create_element(l, ElementKind::Class, NameSpec::named("Request"), None, None).unwrap();
        let (y, _) = a.find_or_create_element(l, ElementKind::Class, NameSpec::named("Decision"), None, None).unwrap();
        a.set_operations(x, vec![NameSpec::named("display()")]).unwrap();
        a.create_edge(l, EdgeKind::Association, x, y, None, Some("1..*".into())).unwrap();
        a.attachments.push(
            Attachment::new(
                l,
                Host::Element { kind: Some(ElementKind::Class), spec: NameSpec::named("Request") },
                parse_rule("ChZiv(1.Form_display)i").unwrap(),
            )
            .unwrap(),
        );
        let text = emit_json(&a);
        assert_eq!(import_json(&text).unwrap(), a);
        assert_eq!(emit_json(&import_json(&text).unwrap()), text);
    }

    #[test]
    fn rejects_bad_rule() {
        let text = emit_json(&Architecture::new("e"))
            .replace("\"attachments\": []", "\"attachments\": [{\"host_diagram\":\"X\",\"host\":{\"element\":{\"kind\":null,\"spec\":{\"name\":\"a\"}}},\"rule\":\"X\",\"fired\":false}]");
        assert!(matches!(import_json(&text), Err(JsonError::Rule { index: 0, .. })));
    }
}
