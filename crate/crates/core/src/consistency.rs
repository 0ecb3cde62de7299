//! Trace-based completeness report and structural equivalence of
//! architectures.

use crate::dsl::render;
use crate::model::{descriptors, Architecture, ElementId, ItemRef};
use crate::table::DiagramLetter;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orphan {
    pub diagram: DiagramLetter,
    pub element: ElementId,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnfiredRule {
    pub attachment: usize,
    pub host: String,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub orphans: Vec<Orphan>,
    pub never_fired: Vec<UnfiredRule>,
    /// Fraction of traced elements per diagram. Context diagram elements
    /// are given, so that diagram always scores 1.
    pub coverage: BTreeMap<DiagramLetter, f64>,
    pub ok: bool,
}

/// Every element outside the context diagram must be the target of some
/// trace, and every attachment must have left a trace.
pub fn check(arch: &Architecture) -> ConsistencyReport {
    let traced: BTreeSet<ElementId> = arch
        .traces
        .iter()
        .flat_map(|t| &t.targets)
        .filter_map(|r| match r {
            ItemRef::Element(id) => Some(*id),
            ItemRef::Edge(_) => None,
        })
        .collect();
    let applied: BTreeSet<usize> = arch.traces.iter().map(|t| t.attachment).collect();
    let mut orphans = Vec::new();
    let mut coverage = BTreeMap::new();
    for d in arch.diagrams() {
        if d.letter == DiagramLetter::X {
            coverage.insert(d.letter, 1.0);
            continue;
        }
        let mut hit = 0usize;
        for el in &d.elements {
            if traced.contains(&el.id) {
                hit += 1;
            } else {
                orphans.push(Orphan { diagram: d.letter, element: el.id, description: el.describe() });
            }
        }
        let frac = if d.elements.is_empty() { 1.0 } else { hit as f64 / d.elements.len() as f64 };
        coverage.insert(d.letter, frac);
    }
    let never_fired: Vec<UnfiredRule> = arch
        .attachments
        .iter()
        .enumerate()
        .filter(|(i, _)| !applied.contains(i))
        .map(|(i, a)| UnfiredRule {
            attachment: i,
            host: format!("{} {}", a.host_diagram, a.host),
            rule: render(&a.rule),
        })
        .collect();
    let ok = orphans.is_empty() && never_fired.is_empty();
    ConsistencyReport { orphans, never_fired, coverage, ok }
}

impl ConsistencyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "consistent: {}", if self.ok { "yes" } else { "no" })?;
        for (l, c) in &self.coverage {
            writeln!(f, "  {l}: {:.0}% traced", c * 100.0)?;
        }
        for o in &self.orphans {
            writeln!(f, "  orphan {}:{} ({})", o.diagram, o.description, o.element)?;
        }
        for n in &self.never_fired {
            writeln!(f, "  never fired: #{} {} on {}", n.attachment, n.rule, n.host)?;
        }
        Ok(())
    }
}

/// How one diagram differs between two architectures.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiagramDiff {
    pub letter: Option<DiagramLetter>,
    pub only_left: Vec<String>,
    pub only_right: Vec<String>,
}

impl fmt::Display for DiagramDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.letter {
            Some(l) => writeln!(f, "diagram {l} differs")?,
            None => writeln!(f, "architectures differ")?,
        }
        for s in &self.only_left {
            writeln!(f, "  - {s}")?;
        }
        for s in &self.only_right {
            writeln!(f, "  + {s}")?;
        }
        Ok(())
    }
}

fn multiset_diff(a: &[String], b: &[String]) -> Vec<String> {
    let mut rest: Vec<&String> = b.iter().collect();
    a.iter()
        .filter(|x| match rest.iter().position(|y| y == x) {
            Some(i) => {
                rest.remove(i);
                false
            }
            None => true,
        })
        .cloned()
        .collect()
}

/// `Ok(())` when every diagram letter is missing from both or isomorphic in
/// both; otherwise the first differing diagram in table order.
pub fn equivalent(a: &Architecture, b: &Architecture) -> Result<(), DiagramDiff> {
    let letters: BTreeSet<DiagramLetter> = a.letters().into_iter().chain(b.letters()).collect();
    for l in letters {
        let describe = |arch: &Architecture| {
            arch.diagram(l)
                .map(|d| {
                    let (els, edges) = descriptors(arch, d);
                    els.into_iter().chain(edges.into_iter().map(|e| format!("edge {e}"))).collect()
                })
                .unwrap_or_default()
        };
        let (da, db): (Vec<String>, Vec<String>) = (describe(a), describe(b));
        let presence = a.diagram(l).is_some() == b.diagram(l).is_some();
        if !presence || da != db {
            let mut diff = DiagramDiff {
                letter: Some(l),
                only_left: multiset_diff(&da, &db),
                only_right: multiset_diff(&db, &da),
            };
            if diff.only_left.is_empty() && diff.only_right.is_empty() {
                let side = if a.diagram(l).is_some() { &mut diff.only_left } else { &mut diff.only_right };
                side.push(format!("diagram {l}"));
            }
            return Err(diff);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EdgeKind, ElementKind};
    use crate::name::NameSpec;

    #[test]
    fn empty_is_ok() {
        let r = check(&Architecture::new("e"));
        assert!(r.ok);
        assert!(r.orphans.is_empty() && r.coverage.is_empty());
        let json = r.to_json();
        for key in ["\"orphans\"", "\"never_fired\"", "\"coverage\"", "\"ok\""] {
            assert!(json.contains(key));
        }
    }

    #[test]
    fn untraced_element_is_orphan() {
        let mut a = Architecture::new("t");
        a.find_or_create_element(DiagramLetter::X, ElementKind::Event, NameSpec::named("E"), None, None).unwrap();
        let (id, _) =
            a.find_or_create_element(DiagramLetter::C, ElementKind::Class, NameSpec::named("K"), None, None).unwrap();
        let r = check(&a);
        assert!(!r.ok);
        assert_eq!(r.orphans.len(), 1);
        assert_eq!(r.orphans[0].element, id);
        assert_eq!(r.coverage[&DiagramLetter::C], 0.0);
        assert_eq!(r.coverage[&DiagramLetter::X], 1.0);
    }

    #[test]
    fn edge_removal_is_found() {
        let mut a = Architecture::new("t");
        let l = DiagramLetter::C;
        let (x, _) = a.find_or_create_element(l, ElementKind::Class, NameSpec::named("A"), None, None).unwrap();
        let (y, _) = a.find_or_create_element(l, ElementKind::Class, NameSpec::named("B"), None, None).unwrap();
        let before = a.clone();
        assert_eq!(equivalent(&a, &before), Ok(()));
        a.create_edge(l, EdgeKind::Association, x, y, None, None).unwrap();
        let d = equivalent(&a, &before).unwrap_err();
        assert_eq!(d.letter, Some(l));
        assert_eq!(d.only_left, vec!["edge association c A -> c B".to_string()]);
        assert!(d.only_right.is_empty());
        let mut c = before.clone();
        c.ensure_diagram(DiagramLetter::Q);
        assert_eq!(equivalent(&before, &c).unwrap_err().only_right, vec!["diagram Q".to_string()]);
    }
}
