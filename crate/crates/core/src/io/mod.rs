//! Model files, JSON export and PlantUML rendering.

mod arch;
mod json;
mod lexer;
mod puml;

pub use arch::{parse_model, write_model};
pub use json::{emit_json, import_json, JsonError};
pub use puml::{emit_plantuml, puml_file_name};

pub(crate) use arch::parse_diagram_file;

use thiserror::Error;

/// A located syntax or schema error in a model or pattern file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}
