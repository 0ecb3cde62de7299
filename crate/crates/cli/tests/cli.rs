use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn archweave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_archweave"))
        .args(args)
        .env_remove("ARCHWEAVE_PATTERNS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SEED_X: &str = r#"architecture "Office"
diagram X "Context Diagram" {
  event "Request"
  activity "Office"
  instance ":Decision"
  edge control "Request" -> "Office"
  edge data "Office" -> ":Decision"
}
"#;

#[test]
fn apply_writes_every_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = archweave(&["apply", fixture("office.arch").to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("13/13 rules fired\n"), "{}", stdout(&o));
    let names: Vec<String> =
        fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(names.iter().filter(|n| n.ends_with(".puml")).count(), 11);
    assert!(names.contains(&"office.arch".to_string()));
    assert!(names.contains(&"office.json".to_string()));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("diagrams: 11 (10 created: RBAUCSZYQM)"), "{summary}");
    let text = fs::read_to_string(out.join("office.arch")).unwrap();
    let arch = archweave::io::parse_model(&text).unwrap();
    let json = archweave::io::import_json(&fs::read_to_string(out.join("office.json")).unwrap()).unwrap();
    assert_eq!(archweave::consistency::equivalent(&arch, &json), Ok(()));
    let puml = fs::read_to_string(out.join("Q_implementation_use_case_realization_diagram.puml")).unwrap();
    assert!(puml.starts_with("@startuml") && puml.contains("downLoad<Requests>"));
}

#[test]
fn apply_respects_format_and_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = archweave(&[
        "apply",
        fixture("office.arch").to_str().unwrap(),
        out.to_str().unwrap(),
        "--format",
        "json",
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> =
        fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["office.json", "summary.txt"]);
    let traces = stdout(&o).lines().filter(|l| l.starts_with("trace #")).count();
    assert_eq!(traces, 13);
}

#[test]
fn misspelled_pattern_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let seed = format!(
        "{SEED_X}\nrule on X event \"Request\": Xevi(:Decision)Ri(:Request)v(1.Request_service)i(:Decision)\n\
         rule on R activity \"1.Request_service\": Rivi(:Decision)Ba(Client)ua(Employee,Manager)\n\
         rule on B usecase \"1.Request_service\": BauApv({{Ofice}})\n"
    );
    let input = write(tmp.path(), "seed.arch", &seed);
    let o = archweave(&["apply", &input, tmp.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pattern {Ofice} (category 1) not found"), "{}", stderr(&o));
}

#[test]
fn unreachable_host_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let seed = format!("{SEED_X}\nrule on A partition \"Nowhere\": ApUau\n");
    let input = write(tmp.path(), "seed.arch", &seed);
    let o = archweave(&["apply", &input, tmp.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("0/1 rules fired"));
    assert!(stdout(&o).contains("never fired: #0 ApUau on A partition \"Nowhere\""), "{}", stdout(&o));
}

#[test]
fn parse_errors_are_located() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write(tmp.path(), "bad.arch", "architecture \"a\"\ndiagram X \"x\" {\n  event\n}\n");
    let o = archweave(&["check", &input]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.arch:4:1:"), "{}", stderr(&o));
    let empty = write(tmp.path(), "empty.arch", "");
    assert_eq!(archweave(&["check", &empty]).status.code(), Some(1));
}

#[test]
fn check_reports_consistency() {
    let o = archweave(&["check", fixture("office.arch").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("consistent: yes"));

    let tmp = tempfile::tempdir().unwrap();
    let orphan = format!("{SEED_X}\ndiagram C \"Business Class Diagram\" {{\n  class \"Loose\"\n}}\n");
    let input = write(tmp.path(), "orphan.arch", &orphan);
    let o = archweave(&["check", &input]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("orphan C:c Loose"), "{}", stdout(&o));
    let o = archweave(&["check", &input, "--json"]);
    assert!(stdout(&o).contains("\"ok\": false"));
}

#[test]
fn too_few_passes_is_an_error() {
    let o = archweave(&["check", fixture("office.arch").to_str().unwrap(), "--max-passes", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no fixpoint after 1 passes"), "{}", stderr(&o));
}

#[test]
fn rules_and_explain() {
    let o = archweave(&["rules", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.contains("R2.5a") && l.ends_with("BauA(pv+)+")));
    let o = archweave(&["explain", "R3.12b"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("source S [r s]\n") && text.contains("target Z [(v+ i+)+]\n"), "{text}");
    let o = archweave(&["explain", "R9.9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown rule `R9.9`"));
}

#[test]
fn pattern_directory_from_flag_and_env() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "intake.pat",
        "pattern 1 \"Intake\"\nplaceholders {\n  p: \"Clerk\";\n}\ndiagram A \"Intake\" {\n  partition \"Clerk\" {\n    activity \"Log\"\n  }\n}\n",
    );
    let dir = tmp.path().to_str().unwrap();
    let o = archweave(&["patterns", "--patterns", dir]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{Intake} diagram A"));
    assert!(stdout(&o).contains("{Office} diagram A"));
    let o =
        Command::new(env!("CARGO_BIN_EXE_archweave")).arg("patterns").env("ARCHWEAVE_PATTERNS", dir).output().unwrap();
    assert!(stdout(&o).contains("{Intake}"));
    let o = archweave(&["patterns"]);
    assert!(!stdout(&o).contains("{Intake}"));
    assert_eq!(stdout(&o).lines().count(), 3);
}
