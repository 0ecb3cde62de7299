use anyhow::{bail, Context, Result};
use archweave::consistency::check;
use archweave::dsl::{builtin_catalog, lookup, parse_rule, render, EntryKind, Item, ItemLetter, RuleAst};
use archweave::engine::DEFAULT_MAX_PASSES;
use archweave::io::{emit_json, emit_plantuml, parse_model, puml_file_name, write_model};
use archweave::pattern::{category_letter, PatternLibrary};
use archweave::{Architecture, Engine, RunReport};
use clap::{Parser, Subcommand, ValueEnum};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "archweave", version, about = "Grow a layered UML architecture from rule attachments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Extra pattern directory; its `*.pat` files are added to the built-in ones.
    #[arg(long, global = true, env = "ARCHWEAVE_PATTERNS")]
    patterns: Option<PathBuf>,
    /// Print progress to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Run all rules to a fixpoint and write the result.
    Apply {
        input: PathBuf,
        out_dir: PathBuf,
        /// Output formats; all three when omitted.
        #[arg(long, value_enum)]
        format: Vec<Format>,
        /// Print every trace link.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_PASSES)]
        max_passes: u32,
    },
    /// Run all rules and report untraced elements and unfired rules.
    Check {
        input: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_PASSES)]
        max_passes: u32,
    },
    /// List the rule catalog.
    Rules {
        #[arg(value_parser = ["list"])]
        list: Option<String>,
    },
    /// List the available patterns.
    Patterns {
        #[arg(value_parser = ["list"])]
        list: Option<String>,
    },
    /// Describe a catalog rule (by key or index id) or a rule text.
    Explain { rule: String },
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Format {
    Arch,
    Puml,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Apply { input, out_dir, format, trace, max_passes } => {
            apply(cli, input, out_dir, format, *trace, *max_passes)
        }
        Command::Check { input, json, max_passes } => check_cmd(cli, input, *json, *max_passes),
        Command::Rules { .. } => {
            emit(&rules_listing())?;
            Ok(0)
        }
        Command::Patterns { .. } => {
            emit(&patterns_listing(&library(cli)?))?;
            Ok(0)
        }
        Command::Explain { rule } => {
            emit(&explain(rule)?)?;
            Ok(0)
        }
    }
}

fn library(cli: &Cli) -> Result<PatternLibrary> {
    Ok(PatternLibrary::load_library(cli.patterns.as_deref())?)
}

fn load(input: &Path) -> Result<Architecture> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    parse_model(&text).map_err(|e| anyhow::anyhow!("{}:{e}", input.display()))
}

fn execute(cli: &Cli, input: &Path, max_passes: u32) -> Result<(Architecture, Architecture, RunReport)> {
    let seed = load(input)?;
    let mut arch = seed.clone();
    let engine = Engine { library: library(cli)?, max_passes };
    let report = engine.run(&mut arch)?;
    if cli.verbose > 0 {
        for p in &report.passes {
            eprintln!("pass {}: {} fired, {} pending", p.pass, p.fired.len(), p.pending.len());
        }
    }
    Ok((seed, arch, report))
}

fn summary(seed: &Architecture, arch: &Architecture, report: &RunReport) -> String {
    let total = arch.attachments.len();
    let fired = arch.attachments.iter().filter(|a| a.fired).count();
    let before: BTreeSet<_> = seed.letters().into_iter().collect();
    let created: String = arch.letters().into_iter().filter(|l| !before.contains(l)).map(|l| l.as_char()).collect();
    let mut s = format!("{fired}/{total} rules fired\n");
    let _ = writeln!(s, "passes: {}", report.passes.len());
    let _ = writeln!(s, "diagrams: {} ({} created: {created})", arch.letters().len(), created.len());
    for (i, why) in &report.never_fired {
        let a = &arch.attachments[*i];
        let _ = writeln!(s, "never fired: #{i} {} on {} {}: {why}", render(&a.rule), a.host_diagram, a.host);
    }
    s
}

fn apply(cli: &Cli, input: &Path, out: &Path, formats: &[Format], trace: bool, max_passes: u32) -> Result<u8> {
    let (seed, arch, report) = execute(cli, input, max_passes)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let formats: BTreeSet<Format> = if formats.is_empty() {
        [Format::Arch, Format::Puml, Format::Json].into()
    } else {
        formats.iter().copied().collect()
    };
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    let write = |name: String, text: &str| -> Result<()> {
        let path = out.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    };
    for f in &formats {
        match f {
            Format::Arch => write(format!("{stem}.arch"), &write_model(&arch))?,
            Format::Json => write(format!("{stem}.json"), &emit_json(&arch))?,
            Format::Puml => {
                for d in arch.diagrams() {
                    write(puml_file_name(d), &emit_plantuml(&arch, d))?;
                }
            }
        }
    }
    let text = summary(&seed, &arch, &report);
    write("summary.txt".into(), &text)?;
    emit(&text)?;
    if trace {
        let mut dump = String::new();
        for t in &arch.traces {
            let targets: Vec<String> = t.targets.iter().map(|r| arch.describe(*r)).collect();
            let _ = writeln!(
                dump,
                "trace #{} pass {} {} from {}: {}",
                t.attachment,
                t.pass,
                t.catalog.as_deref().unwrap_or("-"),
                arch.describe(t.anchor),
                targets.join(", ")
            );
        }
        emit(&dump)?;
    }
    Ok(if report.never_fired.is_empty() { 0 } else { 2 })
}

fn check_cmd(cli: &Cli, input: &Path, json: bool, max_passes: u32) -> Result<u8> {
    let (_, arch, _) = execute(cli, input, max_passes)?;
    let report = check(&arch);
    if json {
        emit(&format!("{}\n", report.to_json()))?;
    } else {
        emit(&report.to_string())?;
    }
    Ok(if report.ok { 0 } else { 2 })
}

fn rules_listing() -> String {
    let mut s = String::new();
    for e in builtin_catalog() {
        let kind = match e.kind {
            EntryKind::Simple => "simple",
            EntryKind::Composite => "composite",
            EntryKind::Stub => "stub",
        };
        let id = e.id.filter(|i| *i != e.key).unwrap_or("");
        let _ = writeln!(s, "{:<7} {:<7} {:<9} {}", e.key, id, kind, e.form.unwrap_or("(index only)"));
    }
    s
}

fn patterns_listing(lib: &PatternLibrary) -> String {
    let mut s = String::new();
    for p in lib.iter() {
        let braces = p.category as usize;
        let roles: Vec<String> =
            p.placeholders.iter().map(|(k, names)| format!("{}:{}", k.letter(), names.len())).collect();
        let _ = writeln!(
            s,
            "{}{}{} diagram {} placeholders [{}]",
            "{".repeat(braces),
            p.name,
            "}".repeat(braces),
            category_letter(p.category).map(|l| l.as_char()).unwrap_or('?'),
            roles.join(" ")
        );
    }
    s
}

fn walk(items: &[Item]) -> String {
    let parts: Vec<String> = items
        .iter()
        .map(|it| match it {
            Item::Elem(e) => {
                let mut s = e.letter.as_char().to_string();
                if let Some(st) = &e.stereotype {
                    s.push_str(&format!("<<{st}>>"));
                }
                s + e.quant.suffix()
            }
            Item::Group(g) => {
                let branches: Vec<String> = g.branches.iter().map(|b| walk(b)).collect();
                format!("({}){}", branches.join(" | "), g.quant.suffix())
            }
        })
        .collect();
    parts.join(" ")
}

fn letters_used(items: &[Item], out: &mut BTreeSet<char>) {
    for it in items {
        match it {
            Item::Elem(e) => {
                out.insert(e.letter.as_char());
            }
            Item::Group(g) => g.branches.iter().for_each(|b| letters_used(b, out)),
        }
    }
}

fn letter_meaning(c: char) -> &'static str {
    match ItemLetter::from_char(c) {
        Some(ItemLetter::Link) => "link (flow or association)",
        Some(ItemLetter::Dependency) => "dependency",
        Some(ItemLetter::Element(k)) => k.meaning(),
        None => "?",
    }
}

fn describe_ast(ast: &RuleAst, s: &mut String) {
    let _ = writeln!(s, "canonical: {}", render(ast));
    let src = ast.source();
    let _ = writeln!(s, "source {} [{}]", src.diagram, walk(&src.items));
    for t in ast.targets() {
        let _ = writeln!(s, "target {} [{}]", t.diagram, walk(&t.items));
    }
    let mut used = BTreeSet::new();
    for p in &ast.parts {
        letters_used(&p.items, &mut used);
    }
    for c in used {
        let _ = writeln!(s, "  {c}: {}", letter_meaning(c));
    }
}

fn explain(key: &str) -> Result<String> {
    let mut s = String::new();
    match lookup(key) {
        Some(e) => {
            let _ = write!(s, "{}", e.key);
            if let Some(id) = e.id.filter(|i| *i != e.key) {
                let _ = write!(s, " ({id})");
            }
            s.push('\n');
            let _ = writeln!(s, "{}", e.description);
            for a in e.aliases {
                let _ = writeln!(s, "also written: {a}");
            }
            match e.ast() {
                Ok(ast) => describe_ast(&ast, &mut s),
                Err(_) => s.push_str("not executable: listed by index only\n"),
            }
        }
        None => match parse_rule(key) {
            Ok(ast) => {
                if let Some(e) = archweave::dsl::classify(&ast) {
                    let _ = writeln!(s, "instance of {}: {}", e.label(), e.description);
                }
                describe_ast(&ast, &mut s);
            }
            Err(err) => bail!("unknown rule `{key}`: not a catalog id, and {err}"),
        },
    }
    Ok(s)
}
