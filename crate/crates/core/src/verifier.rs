//! Exhaustive safety check of a Mealy machine against a specification.
//!
//! Works on named letters and the reference evaluator in `ltl`, sharing no
//! code with the game solver, so the two can check each other.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::frontend::ReactiveSpec;
use crate::ltl::{eval_letters, Trace};
use crate::synth::MealyMachine;

type Letter = BTreeSet<String>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
}

/// What failed at the reported position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    Preset,
    /// Index into the specification's guarantees.
    Guarantee(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Input letters fed to the machine.
    pub inputs: Vec<Letter>,
    /// Full letters over the specification's atoms.
    pub trace: Vec<Letter>,
    pub position: usize,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verification {
    Pass { configurations: usize },
    Fail(Counterexample),
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass { .. })
    }
}

fn check_alphabets(w: &MealyMachine, spec: &ReactiveSpec) -> Result<(), VerifyError> {
    let mi: BTreeSet<&String> = w.inputs.iter().collect();
    let si: BTreeSet<&String> = spec.inputs.iter().collect();
    if mi != si {
        return Err(VerifyError::AlphabetMismatch(format!(
            "machine inputs {:?}, specification inputs {:?}",
            w.inputs, spec.inputs
        )));
    }
    if let Some(y) = spec.outputs.iter().find(|y| !w.outputs.contains(y)) {
        return Err(VerifyError::AlphabetMismatch(format!(
            "specification output `{y}` is not a machine output"
        )));
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Config {
    state: usize,
    window: Vec<Letter>,
    started: bool,
}

/// Explores the product of `w` with every input sequence.
///
/// Position `t` is judged once letter `t + d` exists: the play is fine if
/// INITIALLY failed at 0 or some assumption failed at or before `t`;
/// otherwise PRESET must hold at 0 and every guarantee at `t`.
pub fn product_check(w: &MealyMachine, spec: &ReactiveSpec) -> Result<Verification, VerifyError> {
    check_alphabets(w, spec)?;
    let obj = spec.objective();
    let d = obj.depth;
    let spec_outputs: BTreeSet<&String> = spec.outputs.iter().collect();

    let start = Config {
        state: w.initial,
        window: Vec::new(),
        started: false,
    };
    // parent links for the shortest counterexample
    let mut seen: HashMap<Config, Option<(usize, usize, Letter)>> = HashMap::new();
    let mut nodes: Vec<Config> = vec![start.clone()];
    seen.insert(start, None);
    let mut queue = VecDeque::from([0usize]);

    while let Some(id) = queue.pop_front() {
        let cfg = nodes[id].clone();
        for a in 0..w.num_letters() {
            let t = w.step(cfg.state, a);
            let mut letter: Letter = w
                .inputs
                .iter()
                .enumerate()
                .filter(|(k, _)| a >> k & 1 == 1)
                .map(|(_, n)| n.clone())
                .collect();
            letter.extend(
                w.output_names(t.output)
                    .into_iter()
                    .filter(|y| spec_outputs.contains(y)),
            );
            let mut window = cfg.window.clone();
            window.push(letter.clone());
            let mut started = cfg.started;
            if window.len() == d + 1 {
                let holds = |f| eval_letters(f, &window, 0);
                if !started {
                    if !holds(&obj.initially) {
                        continue;
                    }
                    if !holds(&obj.preset) {
                        return Ok(fail(&nodes, &seen, id, letter, Violation::Preset, w, d));
                    }
                }
                if !holds(&obj.assumption) {
                    continue;
                }
                if let Some(k) = spec.guarantees.iter().position(|g| !holds(g)) {
                    return Ok(fail(&nodes, &seen, id, letter, Violation::Guarantee(k), w, d));
                }
                window.remove(0);
                started = true;
            }
            let next = Config {
                state: t.next,
                window,
                started,
            };
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), Some((id, a, letter)));
                nodes.push(next);
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    Ok(Verification::Pass {
        configurations: nodes.len(),
    })
}

fn fail(
    nodes: &[Config],
    seen: &HashMap<Config, Option<(usize, usize, Letter)>>,
    mut id: usize,
    last: Letter,
    violation: Violation,
    w: &MealyMachine,
    d: usize,
) -> Verification {
    let mut trace = vec![last];
    while let Some((parent, _, letter)) = &seen[&nodes[id]] {
        trace.push(letter.clone());
        id = *parent;
    }
    trace.reverse();
    let inputs = trace
        .iter()
        .map(|l| l.iter().filter(|n| w.inputs.contains(n)).cloned().collect())
        .collect();
    let position = trace.len() - 1 - d;
    Verification::Fail(Counterexample {
        inputs,
        trace,
        position,
        violation,
    })
}

/// Runs `w` on `inputs`; each letter of the result holds the inputs and all
/// machine outputs of that step. Names outside the input alphabet are
/// ignored.
pub fn simulate(w: &MealyMachine, inputs: &[Letter]) -> Trace {
    let mut state = w.initial;
    let mut letters = Vec::with_capacity(inputs.len());
    for x in inputs {
        let names: Vec<&String> = x.iter().collect();
        let a = w.input_index(&names);
        let t = w.step(state, a);
        let mut letter: Letter = x.iter().filter(|n| w.inputs.contains(n)).cloned().collect();
        letter.extend(w.output_names(t.output));
        letters.push(letter);
        state = t.next;
    }
    Trace::new(letters)
}
