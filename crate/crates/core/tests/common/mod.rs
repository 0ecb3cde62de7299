#![allow(dead_code)]

use archweave::io::parse_model;
use archweave::model::{Architecture, ElementKind};
use archweave::{run_to_fixpoint, DiagramLetter, RunReport};
use std::path::PathBuf;

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn load(rel: &str) -> Architecture {
    parse_model(&fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn run(arch: &mut Architecture) -> RunReport {
    run_to_fixpoint(arch).unwrap_or_else(|e| panic!("{e}"))
}

/// The office scenario after its fixpoint run.
pub fn golden() -> (Architecture, RunReport) {
    let mut arch = load("office.arch");
    let report = run(&mut arch);
    (arch, report)
}

/// Rule texts exactly as written in the office fixture.
pub fn golden_rule_texts() -> Vec<String> {
    fixture("office.arch")
        .lines()
        .map(str::trim)
        .filter(|l| l.starts_with("rule on "))
        .map(|l| l.split_once("\": ").or_else(|| l.split_once(": ")).expect("rule text").1.trim().to_string())
        .collect()
}

/// Seed file for a catalog key, if one exists.
pub fn seed(key: &str) -> Option<Architecture> {
    let rel = format!("seeds/{key}.arch");
    fixture_path(&rel).exists().then(|| load(&rel))
}

pub struct CountRow {
    pub letter: DiagramLetter,
    pub kind: String,
    pub count: usize,
    pub names: Vec<String>,
}

pub fn count_table() -> Vec<CountRow> {
    fixture("office_counts.txt")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut f = l.split_whitespace();
            let letter = DiagramLetter::from_char(f.next().unwrap().chars().next().unwrap()).unwrap();
            let kind = f.next().unwrap().to_string();
            let count = f.next().unwrap().parse().unwrap();
            let names = f.next().map(|n| n.split(';').map(str::to_string).collect()).unwrap_or_default();
            CountRow { letter, kind, count, names }
        })
        .collect()
}

/// Names of the items of one kind in one diagram: element names, or for
/// `edge:KIND` the edge labels and multiplicities.
pub fn observed(arch: &Architecture, letter: DiagramLetter, kind: &str) -> (usize, Vec<String>) {
    let Some(d) = arch.diagram(letter) else { return (0, vec![]) };
    if let Some(ek) = kind.strip_prefix("edge:") {
        let edges: Vec<_> = d.edges.iter().filter(|e| e.kind.keyword() == ek).collect();
        let names = edges.iter().filter_map(|e| e.label.clone().or_else(|| e.multiplicity.clone())).collect();
        (edges.len(), names)
    } else {
        let k = ElementKind::from_keyword(kind).unwrap_or_else(|| panic!("kind {kind}"));
        let els: Vec<_> = d.of_kind(k).collect();
        (els.len(), els.iter().map(|e| e.spec.to_string()).collect())
    }
}
