use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MACHINE_SCHEMA: &str = "moby-machine/1";

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("unsupported machine schema `{0}`")]
    Schema(String),
    #[error("state {state} has {found} transitions, expected {expected}")]
    NotTotal {
        state: usize,
        found: usize,
        expected: usize,
    },
    #[error("transition of state {state} targets missing state {target}")]
    BadTarget { state: usize, target: usize },
    #[error("initial state {0} does not exist")]
    BadInitial(usize),
    #[error("output mask {mask:#x} of state {state} uses undeclared outputs")]
    BadOutput { state: usize, mask: u64 },
    #[error("too many atoms for a 64-bit letter")]
    TooManyAtoms,
    #[error("malformed machine file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub next: usize,
    /// Bit `k` set iff `outputs[k]` is true.
    pub output: u64,
}

/// A deterministic, total Mealy machine.
///
/// Input letters are indexed by bitmask: bit `k` of the index is `inputs[k]`.
/// `transitions[q][a]` gives the successor and output of state `q` on letter
/// `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MealyMachine {
    pub schema: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: usize,
    pub transitions: Vec<Vec<Transition>>,
}

impl MealyMachine {
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        initial: usize,
        transitions: Vec<Vec<Transition>>,
    ) -> Self {
        MealyMachine {
            schema: MACHINE_SCHEMA.to_string(),
            inputs,
            outputs,
            initial,
            transitions,
        }
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn num_letters(&self) -> usize {
        1 << self.inputs.len()
    }

    pub fn step(&self, state: usize, input: usize) -> Transition {
        self.transitions[state][input]
    }

    /// Names of the outputs set in `mask`.
    pub fn output_names(&self, mask: u64) -> BTreeSet<String> {
        self.outputs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, n)| n.clone())
            .collect()
    }

    /// Bitmask index of an input letter given by the names that are true.
    pub fn input_index<S: AsRef<str>>(&self, letter: &[S]) -> usize {
        self.inputs
            .iter()
            .enumerate()
            .filter(|(_, n)| letter.iter().any(|l| l.as_ref() == n.as_str()))
            .map(|(k, _)| 1 << k)
            .sum()
    }

    pub fn validate(&self) -> Result<(), MachineError> {
        if self.schema != MACHINE_SCHEMA {
            return Err(MachineError::Schema(self.schema.clone()));
        }
        if self.inputs.len() > 24 || self.outputs.len() > 64 {
            return Err(MachineError::TooManyAtoms);
        }
        if self.initial >= self.transitions.len() {
            return Err(MachineError::BadInitial(self.initial));
        }
        let expected = self.num_letters();
        let allowed = if self.outputs.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.outputs.len()) - 1
        };
        for (state, row) in self.transitions.iter().enumerate() {
            if row.len() != expected {
                return Err(MachineError::NotTotal {
                    state,
                    found: row.len(),
                    expected,
                });
            }
            for t in row {
                if t.next >= self.transitions.len() {
                    return Err(MachineError::BadTarget {
                        state,
                        target: t.next,
                    });
                }
                if t.output & !allowed != 0 {
                    return Err(MachineError::BadOutput {
                        state,
                        mask: t.output,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("machines serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, MachineError> {
        let m: MealyMachine = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    /// Graphviz rendering; edges are labelled `inputs / outputs`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph mealy {\n  rankdir=LR;\n  node [shape=circle];\n");
        let _ = writeln!(out, "  init [shape=point];\n  init -> q{};", self.initial);
        for (q, row) in self.transitions.iter().enumerate() {
            let _ = writeln!(out, "  q{q};");
            for (a, t) in row.iter().enumerate() {
                let ins: Vec<String> = self
                    .inputs
                    .iter()
                    .enumerate()
                    .map(|(k, n)| if a >> k & 1 == 1 { n.clone() } else { format!("!{n}") })
                    .collect();
                let outs: Vec<String> = self.output_names(t.output).into_iter().collect();
                let _ = writeln!(
                    out,
                    "  q{q} -> q{} [label=\"{} / {}\"];",
                    t.next,
                    ins.join(" "),
                    outs.join(" ")
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn echo() -> MealyMachine {
        // outputs g exactly when r
        MealyMachine::new(
            vec!["r".into()],
            vec!["g".into()],
            0,
            vec![vec![
                Transition { next: 0, output: 0 },
                Transition { next: 0, output: 1 },
            ]],
        )
    }

    #[test]
    fn json_round_trip() {
        let m = echo();
        assert_eq!(MealyMachine::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn rejects_partial_machines() {
        let mut m = echo();
        m.transitions[0].pop();
        assert!(matches!(m.validate(), Err(MachineError::NotTotal { .. })));
        let mut m = echo();
        m.transitions[0][0].next = 3;
        assert!(matches!(m.validate(), Err(MachineError::BadTarget { .. })));
    }

    #[test]
    fn dot_lists_every_edge() {
        let dot = echo().to_dot();
        assert!(dot.contains("q0 -> q0 [label=\"r / g\"]"));
        assert!(dot.contains("q0 -> q0 [label=\"!r / \"]"));
    }
}
