//! Rule notation: parser, renderer and built-in catalog.

mod ast;
pub mod catalog;
mod parse;
mod render;

pub use ast::*;
pub use catalog::{builtin_catalog, classify, lookup, resolve_rule, CatalogEntry, EntryKind};
pub use parse::parse_rule;
pub use render::render;

use thiserror::Error;

/// Rule text errors. Offsets count characters from the start of the rule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("empty rule (offset {offset})")]
    Empty { offset: usize },
    #[error("a rule needs a source and at least one target part, found {found} (offset {offset})")]
    TooFewParts { found: usize, offset: usize },
    #[error("unknown diagram letter `{letter}` at offset {offset}")]
    UnknownDiagram { letter: char, offset: usize },
    #[error("unknown element letter `{letter}` at offset {offset}")]
    UnknownElement { letter: char, offset: usize },
    #[error("unexpected `{found}` at offset {offset}")]
    Unexpected { found: char, offset: usize },
    #[error("{what} at offset {offset}")]
    Unbalanced { what: &'static str, offset: usize },
    #[error("diagram part `{letter}` has no items (offset {offset})")]
    EmptyPart { letter: char, offset: usize },
    #[error("empty group at offset {offset}")]
    EmptyGroup { offset: usize },
    #[error("source and first target are both diagram {letter} (offset {offset})")]
    SameDiagram { letter: char, offset: usize },
    #[error("pattern reference with {depth} braces at offset {offset}; at most 3 are allowed")]
    PatternDepth { depth: usize, offset: usize },
    #[error("bad argument at offset {offset}: {reason}")]
    BadArg { offset: usize, reason: String },
    #[error("rule {0} has no executable form")]
    NotExecutable(String),
}

impl DslError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            DslError::Empty { offset }
            | DslError::TooFewParts { offset, .. }
            | DslError::UnknownDiagram { offset, .. }
            | DslError::UnknownElement { offset, .. }
            | DslError::Unexpected { offset, .. }
            | DslError::Unbalanced { offset, .. }
            | DslError::EmptyPart { offset, .. }
            | DslError::EmptyGroup { offset }
            | DslError::SameDiagram { offset, .. }
            | DslError::PatternDepth { offset, .. }
            | DslError::BadArg { offset, .. } => Some(*offset),
            DslError::NotExecutable(_) => None,
        }
    }
}
