mod common;

use archweave::consistency::{check, equivalent};
use archweave::engine::ChangeSet;
use archweave::io::{emit_json, import_json, parse_model, write_model};
use archweave::model::ElementKind;
use archweave::pattern::{build_rename_map, instantiate, PatternLibrary, RoleSources};
use archweave::{parse_rule, render, Architecture, DiagramLetter, NameSpec};
use common::*;
use proptest::prelude::*;

fn elem() -> impl Strategy<Value = String> {
    let letter = prop::sample::select("evcaiunrshlmqptzy".chars().collect::<Vec<_>>());
    let stereo = prop::sample::select(vec!["", "", "<<control>>", "<<data>>", "<<start>>"]);
    let args = prop::sample::select(vec![
        "",
        "",
        "(Office)",
        "(:Request)",
        "([Sent]:Request)",
        "(Employee,Manager)",
        "(1..*)",
        "([Sent],[Registered])",
        "({Office})",
        "({{RequestRegistration}}i)",
        "(downLoad<Request>::Request)",
    ]);
    let quant = prop::sample::select(vec!["", "", "+", "?"]);
    (letter, stereo, args, quant).prop_map(|(l, s, a, q)| format!("{l}{s}{a}{q}"))
}

fn items() -> impl Strategy<Value = String> {
    let group = (
        prop::collection::vec(elem(), 1..3),
        prop::collection::vec(elem(), 0..3),
        prop::sample::select(vec!["", "+", "?"]),
    )
        .prop_map(|(a, b, q)| {
            if b.is_empty() {
                format!("({}){q}", a.concat())
            } else {
                format!("({}|{}){q}", a.concat(), b.concat())
            }
        });
    prop::collection::vec(prop_oneof![3 => elem(), 1 => group], 1..4).prop_map(|v| v.concat())
}

fn rule_text() -> impl Strategy<Value = String> {
    let letters = prop::sample::subsequence("XRBAUCSZYJTQM".chars().collect::<Vec<_>>(), 2..4).prop_shuffle();
    (letters, prop::collection::vec(items(), 3))
        .prop_map(|(ds, items)| ds.iter().zip(items).map(|(d, i)| format!("{d}{i}")).collect())
}

fn golden_subset(mask: u16) -> Architecture {
    let mut arch = load("office.arch");
    let keep: Vec<_> =
        arch.attachments.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| a.clone()).collect();
    arch.attachments = keep;
    run(&mut arch);
    arch
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn rendered_rules_parse_back(text in rule_text()) {
        let ast = parse_rule(&text);
        prop_assert!(ast.is_ok(), "{}: {:?}", text, ast);
        let ast = ast.unwrap();
        let canonical = render(&ast);
        let again = parse_rule(&canonical);
        prop_assert_eq!(again.as_ref(), Ok(&ast));
        prop_assert_eq!(render(&ast), canonical);
    }

    #[test]
    fn name_specs_round_trip(
        name in prop::option::of("[A-Za-z][A-Za-z0-9_.]{0,8}"),
        state in prop::option::of("[A-Z][a-z]{0,6}"),
        class in prop::option::of("[A-Z][A-Za-z]{0,6}"),
    ) {
        let spec = NameSpec { name, state, classifier: class };
        prop_assume!(!spec.is_empty());
        prop_assert_eq!(NameSpec::parse(&spec.to_string()), Ok(spec));
    }

    #[test]
    fn fixpoint_is_stable(mask in 0u16..(1 << 13)) {
        let mut arch = golden_subset(mask);
        let before = arch.clone();
        let again = run(&mut arch);
        prop_assert_eq!(again.passes.len(), 1);
        prop_assert!(!again.passes[0].changed());
        prop_assert_eq!(arch, before);
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(a in 0u16..(1 << 13), b in 0u16..(1 << 13)) {
        let (x, y) = (golden_subset(a), golden_subset(b));
        prop_assert!(equivalent(&x, &x).is_ok());
        prop_assert_eq!(equivalent(&x, &y).is_ok(), equivalent(&y, &x).is_ok());
        if a == b {
            prop_assert!(equivalent(&x, &y).is_ok());
        }
    }

    #[test]
    fn serializations_round_trip(mask in 0u16..(1 << 13)) {
        let arch = golden_subset(mask);
        let json = emit_json(&arch);
        let back = import_json(&json).unwrap();
        prop_assert_eq!(&back, &arch);
        prop_assert_eq!(emit_json(&back), json);
        let text = write_model(&arch);
        let parsed = parse_model(&text).unwrap();
        prop_assert!(equivalent(&parsed, &arch).is_ok());
        prop_assert_eq!(write_model(&parsed), text);
    }

    #[test]
    fn deleting_a_trace_breaks_consistency(index in 0usize..13) {
        let (mut arch, _) = golden();
        prop_assert!(check(&arch).ok);
        arch.traces.remove(index);
        let report = check(&arch);
        prop_assert!(!report.ok);
        prop_assert!(!report.never_fired.is_empty());
    }

    #[test]
    fn office_pattern_takes_any_actor_names(
        names in prop::collection::btree_set("[A-Z][a-z]{2,7}", 3),
    ) {
        let lib = PatternLibrary::builtin();
        let pat = lib.resolve(1, "Office", DiagramLetter::A).unwrap().clone();
        let sources = RoleSources {
            partitions: names.iter().map(NameSpec::named).collect(),
            ..RoleSources::default()
        };
        let map = build_rename_map(&pat, &[], &sources).unwrap();
        let mut arch = Architecture::new("p");
        let mut changes = ChangeSet::default();
        instantiate(&mut arch, DiagramLetter::A, &pat, map.clone(), &mut changes).unwrap();
        let a = arch.diagram(DiagramLetter::A).unwrap();
        let mut got: Vec<String> = a.of_kind(ElementKind::Partition).map(|p| p.spec.to_string()).collect();
        got.sort();
        prop_assert_eq!(got, names.iter().cloned().collect::<Vec<_>>());
        prop_assert_eq!(a.elements.len(), pat.template.elements.len());
        prop_assert_eq!(a.edges.len(), pat.template.edges.len());

        let before = arch.clone();
        let mut again = ChangeSet::default();
        instantiate(&mut arch, DiagramLetter::A, &pat, map, &mut again).unwrap();
        prop_assert!(!again.changed());
        prop_assert_eq!(arch, before);
    }
}
