mod common;

use archweave::consistency::{check, equivalent};
use archweave::dsl::{builtin_catalog, parse_rule, render, EntryKind};
use archweave::model::{diagram_isomorphic, ElementKind};
use archweave::{Architecture, DiagramLetter};
use common::*;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn letters(arch: &Architecture) -> String {
    arch.letters().iter().map(|l| l.as_char()).collect()
}

fn golden_scenario() -> Outcome {
    let mut arch = load("office.arch");
    let start = Instant::now();
    let report = run(&mut arch);
    let took = start.elapsed();
    let total = arch.attachments.len();
    ensure(total == 13, format!("{total} attachments in fixture"))?;
    let fired = arch.attachments.iter().filter(|a| a.fired).count();
    ensure(fired == 13 && report.never_fired.is_empty(), format!("{fired}/13 fired: {:?}", report.never_fired))?;
    let got = letters(&arch);
    ensure(got == "XRBAUCSZYQM", format!("diagrams {got}"))?;
    ensure(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!("13/13 fired, 11 diagrams {got}, {} passes, {took:?}", report.passes.len()))
}

fn golden_contents() -> Outcome {
    let (arch, _) = golden();
    let rows = count_table();
    for row in &rows {
        let (count, mut names) = observed(&arch, row.letter, &row.kind);
        ensure(count == row.count, format!("{} {}: {count}, expected {}", row.letter, row.kind, row.count))?;
        if !row.names.is_empty() {
            let mut want = row.names.clone();
            want.sort();
            names.sort();
            ensure(names == want, format!("{} {}: {names:?}, expected {want:?}", row.letter, row.kind))?;
        }
    }
    let z_states = arch
        .diagram(DiagramLetter::Z)
        .map(|d| {
            d.of_kind(ElementKind::Instance)
                .filter(|e| e.spec.classifier.as_deref() == Some("Request") && e.spec.state.is_some())
                .count()
        })
        .unwrap_or(0);
    ensure(z_states == 4, format!("Z has {z_states} states of Request"))?;
    Ok(format!("{} table rows match", rows.len()))
}

fn composite_equals_simple() -> Outcome {
    let mut composite = load("seeds/C1.arch");
    let mut simple = load("context_simple.arch");
    run(&mut composite);
    run(&mut simple);
    equivalent(&composite, &simple).map_err(|d| d.to_string())?;
    let r = composite.diagram(DiagramLetter::R).ok_or("no R diagram")?;
    ensure(r.elements.len() == 3 && r.edges.len() == 2, "R is not 3 elements and 2 edges")?;
    Ok("C1 and S1..S5 give isomorphic architectures".into())
}

fn use_case_shape() -> Outcome {
    let mut arch = seed("C2").ok_or("no seed")?;
    run(&mut arch);
    let b = arch.diagram(DiagramLetter::B).ok_or("no B diagram")?;
    let uc = b.of_kind(ElementKind::UseCase).count();
    let actors = b.of_kind(ElementKind::Actor).count();
    let assoc = b.edges.iter().filter(|e| e.kind.keyword() == "association").count();
    ensure(
        (uc, actors, assoc, b.elements.len(), b.edges.len()) == (1, 3, 3, 4, 3),
        format!("B has {uc} use cases, {actors} actors, {assoc} associations"),
    )?;
    Ok("1 use case, 3 actors, 3 associations".into())
}

fn pattern_cascade() -> Outcome {
    let mut cascade = load("cascade.arch");
    let report = run(&mut cascade);
    ensure(report.never_fired.is_empty(), format!("pending: {:?}", report.never_fired))?;
    let (golden, _) = golden();
    let a = |arch: &Architecture| arch.diagram(DiagramLetter::A).cloned().ok_or("no A diagram");
    let (left, right) = (a(&cascade)?, a(&golden)?);
    ensure(diagram_isomorphic(&cascade, &left, &golden, &right), "A diagrams differ")?;
    Ok(format!("A isomorphic ({} elements, {} edges)", left.elements.len(), left.edges.len()))
}

fn idempotence() -> Outcome {
    let mut checked = Vec::new();
    for entry in builtin_catalog().iter().filter(|e| e.kind != EntryKind::Stub) {
        let mut arch = seed(entry.key).ok_or(format!("no seed for {}", entry.key))?;
        let report = run(&mut arch);
        ensure(report.never_fired.is_empty(), format!("{}: pending {:?}", entry.key, report.never_fired))?;
        let used = arch.traces.iter().any(|t| t.catalog.as_deref() == Some(entry.key));
        ensure(used, format!("{}: seed never applies this rule", entry.key))?;
        let before = arch.clone();
        let again = run(&mut arch);
        ensure(again.passes.len() == 1 && !again.passes[0].changed(), format!("{}: second run changed", entry.key))?;
        equivalent(&before, &arch).map_err(|d| format!("{}: {d}", entry.key))?;
        ensure(before == arch, format!("{}: second run altered the model", entry.key))?;
        checked.push(entry.key);
    }
    Ok(format!("{} catalog entries stable", checked.len()))
}

fn round_trip() -> Outcome {
    let mut texts: Vec<String> = Vec::new();
    for e in builtin_catalog().iter().filter(|e| e.kind != EntryKind::Stub) {
        texts.extend(e.form.map(str::to_string));
        texts.extend(e.aliases.iter().map(|a| a.to_string()));
    }
    let forms = texts.len();
    let golden = golden_rule_texts();
    ensure(golden.len() == 13, format!("{} golden strings", golden.len()))?;
    texts.extend(golden);
    for t in &texts {
        let ast = parse_rule(t).map_err(|e| format!("{t}: {e}"))?;
        let again = parse_rule(&render(&ast)).map_err(|e| format!("{t}: {e}"))?;
        ensure(ast == again, format!("{t} renders as {}", render(&ast)))?;
    }
    Ok(format!("{forms} catalog forms and 13 scenario strings"))
}

fn consistency_report() -> Outcome {
    let (arch, _) = golden();
    let report = check(&arch);
    ensure(report.ok, report.to_string())?;
    let low: Vec<_> = report.coverage.iter().filter(|(_, c)| **c != 1.0).collect();
    ensure(low.is_empty(), format!("coverage below 1: {low:?}"))?;
    for i in 0..arch.traces.len() {
        let mut cut = arch.clone();
        cut.traces.remove(i);
        ensure(!check(&cut).ok, format!("removing trace {i} kept ok"))?;
    }
    Ok(format!("ok, full coverage, each of {} trace deletions detected", arch.traces.len()))
}

/// Cannot pass: the count of simple rules replaced by the scenario needs
/// the full external catalog. Reports what stands in for it.
fn out_of_scope() -> Outcome {
    let stubs: BTreeSet<&str> =
        builtin_catalog().iter().filter(|e| e.kind == EntryKind::Stub).map(|e| e.label()).collect();
    for e in builtin_catalog().iter().filter(|e| e.kind == EntryKind::Stub) {
        ensure(e.ast().is_err(), format!("stub {} is executable", e.label()))?;
    }
    composite_equals_simple()?;
    Err(format!(
        "simple-rule replacement count needs the external catalog; stubs {stubs:?} are listed by id only; \
         the one-composite-for-five-simple equivalence of criterion 3 holds"
    ))
}

const NOT_REPRODUCIBLE: usize = 9;

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden scenario fires all rules", golden_scenario),
        ("golden diagram contents", golden_contents),
        ("composite rule equals simple rules", composite_equals_simple),
        ("subprocess to use case shape", use_case_shape),
        ("pattern cascade", pattern_cascade),
        ("idempotence of every catalog rule", idempotence),
        ("rule text round trip", round_trip),
        ("consistency report", consistency_report),
        ("simple rules replaced by the scenario", out_of_scope),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) if i + 1 == NOT_REPRODUCIBLE => {
                println!("criterion {}: NOT REPRODUCIBLE {name}: {why}", i + 1);
            }
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
