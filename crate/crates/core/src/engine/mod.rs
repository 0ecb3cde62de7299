//! Rule application and the fixpoint driver.

mod build;
mod changes;
mod infer;
mod matcher;
mod strategies;

pub use changes::ChangeSet;
pub use infer::infer_edge;
pub use matcher::{find_host, match_source, Binding, Bound, MatchError, MatchFailure};

use crate::dsl::{classify, render};
use crate::model::{Architecture, Attachment, ModelError, TraceLink};
use crate::pattern::{PatternError, PatternLibrary};
use build::{part_pattern, BuildError, Builder};
use std::fmt;
use thiserror::Error;

pub const DEFAULT_MAX_PASSES: u32 = 100;

/// Errors that stop a run.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("rule `{rule}` on {host}: {source}")]
    Schema { rule: String, host: String, source: Box<ModelError> },
    #[error("rule `{rule}` on {host}: {source}")]
    Pattern { rule: String, host: String, source: Box<PatternError> },
    #[error("rule `{rule}` on {host}: {reason}")]
    Unsupported { rule: String, host: String, reason: String },
    #[error("no fixpoint after {passes} passes; still changing: {}", rules.join("; "))]
    NonTermination { passes: u32, rules: Vec<String> },
}

/// Why an attachment did not fire. None of these stop a run; the
/// attachment is retried on the next pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pending {
    HostMissing,
    NoMatch(MatchFailure),
    Unresolved(String),
}

impl fmt::Display for Pending {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pending::HostMissing => f.write_str("host element does not exist"),
            Pending::NoMatch(m) => write!(f, "no match: {m}"),
            Pending::Unresolved(s) => write!(f, "unresolved: {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Application {
    Fired(ChangeSet),
    Pending(Pending),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PassReport {
    pub pass: u32,
    /// Attachment index and changes of every application that fired.
    pub fired: Vec<(usize, ChangeSet)>,
    pub pending: Vec<(usize, Pending)>,
}

impl PassReport {
    pub fn changed(&self) -> bool {
        self.fired.iter().any(|(_, c)| c.changed())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    pub passes: Vec<PassReport>,
    /// Attachments that never fired, with the reason from the last pass.
    pub never_fired: Vec<(usize, Pending)>,
}

impl RunReport {
    pub fn fired_count(&self, total: usize) -> usize {
        total - self.never_fired.len()
    }
}

pub struct Engine {
    pub library: PatternLibrary,
    pub max_passes: u32,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { library: PatternLibrary::builtin(), max_passes: DEFAULT_MAX_PASSES }
    }
}

/// Runs every attachment with the built-in patterns.
pub fn run_to_fixpoint(arch: &mut Architecture) -> Result<RunReport, EngineError> {
    Engine::default().run(arch)
}

/// Applies one attachment once, outside any run.
pub fn apply_rule(arch: &mut Architecture, attachment: usize) -> Result<Application, EngineError> {
    Engine::default().apply(arch, attachment, 1)
}

fn host_label(att: &Attachment) -> String {
    format!("{} {}", att.host_diagram, att.host)
}

impl Engine {
    pub fn new(library: PatternLibrary) -> Self {
        Engine { library, max_passes: DEFAULT_MAX_PASSES }
    }

    /// Sweeps all attachments, source diagrams in table layer order and
    /// declaration order within a layer, until a pass changes nothing.
    pub fn run(&self, arch: &mut Architecture) -> Result<RunReport, EngineError> {
        let mut order: Vec<usize> = (0..arch.attachments.len()).collect();
        order.sort_by_key(|&i| (arch.attachments[i].host_diagram.sweep_tier(), i));
        let mut report = RunReport::default();
        for pass in 1..=self.max_passes {
            let mut pr = PassReport { pass, ..Default::default() };
            for &i in &order {
                match self.apply(arch, i, pass)? {
                    Application::Fired(c) => pr.fired.push((i, c)),
                    Application::Pending(p) => pr.pending.push((i, p)),
                }
            }
            let changed = pr.changed();
            report.passes.push(pr);
            if !changed {
                let last = report.passes.last().expect("pushed");
                report.never_fired =
                    last.pending.iter().filter(|(i, _)| !arch.attachments[*i].fired).cloned().collect();
                return Ok(report);
            }
        }
        let last = report.passes.last().expect("max_passes >= 1");
        let rules = last
            .fired
            .iter()
            .filter(|(_, c)| c.changed())
            .map(|(i, _)| {
                let a = &arch.attachments[*i];
                format!("{} on {}", render(&a.rule), host_label(a))
            })
            .collect();
        Err(EngineError::NonTermination { passes: self.max_passes, rules })
    }

    /// Matches and builds one attachment. The architecture changes only if
    /// the whole application succeeds.
    pub fn apply(&self, arch: &mut Architecture, idx: usize, pass: u32) -> Result<Application, EngineError> {
        let att = arch.attachments[idx].clone();
        let rule_text = render(&att.rule);
        let host = host_label(&att);
        let binding = match match_source(arch, &att) {
            Ok(b) => b,
            Err(MatchError::HostMissing) => return Ok(Application::Pending(Pending::HostMissing)),
            Err(MatchError::Failed(f)) => return Ok(Application::Pending(Pending::NoMatch(f))),
            Err(MatchError::Unsupported(reason)) => {
                return Err(EngineError::Unsupported { rule: rule_text, host, reason })
            }
        };
        let entry = classify(&att.rule);
        let mut b = Builder::new(arch.clone(), &binding, &self.library);
        let built = match entry.map(|e| e.key) {
            Some("C3") => strategies::scenario(&mut b, &att.rule),
            Some("C6") => strategies::partition_use_cases(&mut b, &att.rule),
            Some("C8") => strategies::object_lifecycles(&mut b, &att.rule),
            Some("C12") => strategies::realizations(&mut b, &att.rule),
            _ => att.rule.targets().iter().try_for_each(|part| match part_pattern(part) {
                Some(p) => b.pattern_part(part, p),
                None => b.generic_part(part),
            }),
        };
        match built {
            Ok(()) => {}
            Err(BuildError::Unresolved(s)) => return Ok(Application::Pending(Pending::Unresolved(s))),
            Err(BuildError::Model(source)) => {
                return Err(EngineError::Schema { rule: rule_text, host, source: Box::new(source) })
            }
            Err(BuildError::Pattern(source)) => {
                return Err(EngineError::Pattern { rule: rule_text, host, source: Box::new(source) })
            }
        }
        let Builder { arch: mut work, changes, pattern, .. } = b;
        if !att.fired || changes.changed() {
            work.traces.push(TraceLink {
                rule_text,
                catalog: entry.map(|e| e.key.to_string()),
                pattern,
                attachment: idx,
                anchor: binding.anchor,
                sources: binding.items(),
                targets: changes.targets(),
                pass,
            });
        }
        work.attachments[idx].fired = true;
        *arch = work;
        Ok(Application::Fired(changes))
    }
}
