use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ltl::{AtomKind, Formula, SymbolTable};

/// A safety specification `Ie -> (Is && G(assumptions -> guarantees))`.
///
/// Every assumption and guarantee body is implicitly under `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactiveSpec {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initially: Formula,
    pub preset: Formula,
    pub assumptions: Vec<Formula>,
    pub guarantees: Vec<Formula>,
}

impl ReactiveSpec {
    pub fn symbol_table(&self) -> SymbolTable {
        let mut table = SymbolTable::new();
        for name in &self.inputs {
            // declarations were checked for duplicates while parsing
            let _ = table.insert(name.clone(), AtomKind::Input);
        }
        for name in &self.outputs {
            let _ = table.insert(name.clone(), AtomKind::Output);
        }
        table
    }

    /// All atoms mentioned in any formula.
    pub fn used_atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.initially.collect_atoms(&mut out);
        self.preset.collect_atoms(&mut out);
        for f in self.assumptions.iter().chain(&self.guarantees) {
            f.collect_atoms(&mut out);
        }
        out
    }

    /// Largest `Next` depth over every formula of the specification.
    pub fn depth(&self) -> usize {
        self.assumptions
            .iter()
            .chain(&self.guarantees)
            .chain([&self.initially, &self.preset])
            .map(Formula::x_depth)
            .max()
            .unwrap_or(0)
    }

    pub fn objective(&self) -> Objective {
        Objective {
            initially: self.initially.clone(),
            preset: self.preset.clone(),
            assumption: Formula::and_all(self.assumptions.iter().cloned()),
            guarantee: Formula::and_all(self.guarantees.iter().cloned()),
            depth: self.depth(),
        }
    }
}

/// The winning condition shared by the solver and the verifier.
///
/// A play wins if `initially` fails at position 0, or `preset` holds at
/// position 0 and at every position `t` where `assumption` held at all
/// positions up to and including `t`, `guarantee` holds at `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub initially: Formula,
    pub preset: Formula,
    pub assumption: Formula,
    pub guarantee: Formula,
    /// Number of letters each position looks ahead.
    pub depth: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_assumptions_give_true() {
        let spec = ReactiveSpec {
            inputs: vec!["r".into()],
            outputs: vec!["g".into()],
            initially: Formula::True,
            preset: Formula::True,
            assumptions: vec![],
            guarantees: vec![Formula::implies(Formula::atom("r"), Formula::next(Formula::atom("g")))],
        };
        let obj = spec.objective();
        assert_eq!(obj.assumption, Formula::True);
        assert_eq!(obj.depth, 1);
    }
}
