use serde::Serialize;

use crate::frontend::ReactiveSpec;
use crate::ltl::Formula;

/// Size of a specification: item count and total formula size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SizeMetrics {
    /// Number of assumption and guarantee items.
    pub clause_count: usize,
    /// AST nodes over initially, preset, assumptions and guarantees. An
    /// absent (`true`) initial condition contributes nothing.
    pub length: usize,
}

pub fn measure(spec: &ReactiveSpec) -> SizeMetrics {
    let condition = |f: &Formula| if *f == Formula::True { 0 } else { f.size() };
    SizeMetrics {
        clause_count: spec.assumptions.len() + spec.guarantees.len(),
        length: condition(&spec.initially)
            + condition(&spec.preset)
            + spec
                .assumptions
                .iter()
                .chain(&spec.guarantees)
                .map(Formula::size)
                .sum::<usize>(),
    }
}
