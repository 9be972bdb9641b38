//! Formulas of LTL restricted to `Next`, their normal forms and the
//! syntactic helpers used by the projector.

mod eval;
mod formula;
mod helpers;
mod normal;

use std::collections::HashMap;

use thiserror::Error;

pub use eval::{eval, eval_letters, Trace};
pub use formula::{AtomKind, Formula};
pub use helpers::{asf, nsf, obligation_name, obligation_var, rm_next, substitute};
pub use normal::{guarded_nnf, is_nnf, nnf, simpl};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtlError {
    #[error("expected a formula starting with X, got `{0}`")]
    NotANextFormula(String),
    #[error("expected a literal or X^i of a literal, got `{0}`")]
    UnsupportedShape(String),
    #[error("trace of length {length} too short to evaluate depth {depth} at position {position}")]
    WindowTooShort {
        position: usize,
        depth: usize,
        length: usize,
    },
    #[error("atom `{0}` declared twice")]
    DuplicateAtom(String),
}

/// Declared atoms in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    order: Vec<String>,
    kinds: HashMap<String, AtomKind>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, kind: AtomKind) -> Result<(), LtlError> {
        let name = name.into();
        if self.kinds.contains_key(&name) {
            return Err(LtlError::DuplicateAtom(name));
        }
        self.kinds.insert(name.clone(), kind);
        self.order.push(name);
        Ok(())
    }

    pub fn kind(&self, name: &str) -> Option<AtomKind> {
        self.kinds.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.kinds.contains_key(name)
    }

    pub fn of_kind(&self, kind: AtomKind) -> Vec<String> {
        self.order
            .iter()
            .filter(|n| self.kinds[*n] == kind)
            .cloned()
            .collect()
    }

    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_atoms_are_rejected() {
        let mut table = SymbolTable::new();
        table.insert("r", AtomKind::Input).unwrap();
        table.insert("g", AtomKind::Output).unwrap();
        assert_eq!(
            table.insert("r", AtomKind::Output),
            Err(LtlError::DuplicateAtom("r".into()))
        );
        assert_eq!(table.of_kind(AtomKind::Output), vec!["g".to_string()]);
    }
}
