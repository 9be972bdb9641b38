//! The TLSF subset and the modes file format.

mod elaborate;
mod emit;
mod lexer;
mod modes;
mod parser;
mod spec;

use thiserror::Error;

pub use emit::{emit_modes, emit_tlsf};
pub use lexer::Pos;
pub use modes::{parse_modes, Mode, ModeDecomposition};
pub use spec::{Objective, ReactiveSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrontendError {
    #[error("{pos}: syntax error, expected {expected}")]
    Syntax { pos: Pos, expected: String },
    #[error("{pos}: {detail}")]
    Arity { pos: Pos, detail: String },
    #[error("{pos}: unbound parameter `{name}`")]
    UnboundParameter { pos: Pos, name: String },
    #[error("{pos}: operator `{op}` is not allowed here (only a top-level G is supported)")]
    NonSafetyOperator { pos: Pos, op: String },
    #[error("{pos}: undeclared atom `{name}`")]
    UndeclaredAtom { pos: Pos, name: String },
    #[error("atom `{0}` declared twice")]
    DuplicateAtom(String),
    #[error("{section} may not mention `{atom}`")]
    Scope { section: &'static str, atom: String },
    #[error("definition `{name}` is recursive")]
    RecursiveDefinition { name: String },
    #[error("{pos}: unknown atom `{name}`")]
    UnknownAtom { pos: Pos, name: String },
    #[error("{pos}: unknown mode `{name}`")]
    UnknownMode { pos: Pos, name: String },
    #[error("modes file declares no mode")]
    EmptyModeList,
    #[error("relation relates mode `{name}` to itself")]
    ReflexiveRelation { name: String },
    #[error("field `{field}` of mode `{mode}` uses X")]
    TemporalInMode { mode: String, field: &'static str },
    #[error("arrival condition of mode `{mode}` mentions non-input `{atom}`")]
    ArrivalScope { mode: String, atom: String },
    #[error("initial condition of mode `{mode}` does not imply its predicate")]
    InitNotInMode { mode: String },
}

pub fn parse_spec(text: &str) -> Result<ReactiveSpec, FrontendError> {
    parse_spec_with(text, &[])
}

/// Parses a specification, replacing the values of the named parameters.
pub fn parse_spec_with(text: &str, overrides: &[(String, i64)]) -> Result<ReactiveSpec, FrontendError> {
    let doc = parser::parse_document(text)?;
    elaborate::elaborate(&doc, overrides)
}
