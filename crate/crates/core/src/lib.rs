//! Composite consistency rules for layered UML architectures.
//!
//! An [`model::Architecture`] holds one diagram per kind of the layered
//! table. Rules written in the compact rule notation ([`dsl`]) are attached
//! to elements and applied by the [`engine`] until nothing changes; the
//! [`consistency`] module then checks that every derived element is traced
//! back to a rule application.

pub mod consistency;
pub mod dsl;
pub mod engine;
pub mod io;
pub mod model;
pub mod name;
pub mod pattern;
pub mod table;

pub use dsl::{parse_rule, render, RuleAst};
pub use engine::{run_to_fixpoint, Engine, EngineError, RunReport};
pub use model::Architecture;
pub use name::NameSpec;
pub use table::DiagramLetter;
