//! Stitching per-mode controllers into one controller for the original
//! specification.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::{ModeDecomposition, ReactiveSpec};
use crate::ltl::Formula;
use crate::projector::Projection;
use crate::propcheck;
use crate::synth::{MachineError, MealyMachine, Transition};

pub const MANIFEST_SCHEMA: &str = "moby-manifest/1";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum ComposeError {
    #[error("mode {mode}: state {state} on input letter {input} asserts several jumps")]
    MultipleJumps {
        mode: usize,
        state: usize,
        input: usize,
    },
    #[error("mode {mode} jumps to unknown mode {target}")]
    UnknownTargetMode { mode: usize, target: usize },
    #[error("machine of mode {mode} has no output `{atom}`")]
    MissingAtom { mode: usize, atom: String },
    #[error("machine of mode {mode} has inputs {found:?}, expected {expected:?}")]
    InputMismatch {
        mode: usize,
        found: Vec<String>,
        expected: Vec<String>,
    },
    #[error("no machine for mode `{0}`")]
    MissingMachine(String),
    #[error("manifest lists no modes")]
    Empty,
    #[error("unsupported manifest schema `{0}`")]
    Schema(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Everything the composition needs, with machines in mode order.
#[derive(Debug, Clone)]
pub struct CompositionManifest {
    pub machines: Vec<MealyMachine>,
    pub start: usize,
    /// Per mode: `(target mode, jump atom)`.
    pub jumps: Vec<Vec<(usize, String)>>,
    /// Atoms introduced by projection, erased from the composed outputs.
    pub fresh: BTreeSet<String>,
    /// Outputs of the original specification, in declaration order.
    pub outputs: Vec<String>,
}

pub fn erase_fresh(letter: &BTreeSet<String>, fresh: &BTreeSet<String>) -> BTreeSet<String> {
    letter.difference(fresh).cloned().collect()
}

/// The mode whose initial condition the original PRESET selects.
///
/// Picks the first `i` with `I_i -> Is` valid; falls back to the first with
/// `Is -> I_i`, then to mode 0. A fallback comes with a warning.
pub fn start_mode(spec: &ReactiveSpec, modes: &ModeDecomposition) -> (usize, Option<String>) {
    let is = &spec.preset;
    let valid = |a: &Formula, b: &Formula| propcheck::is_valid(&Formula::implies(a.clone(), b.clone()));
    if let Some(i) = modes.modes.iter().position(|m| valid(&m.init, is)) {
        return (i, None);
    }
    if let Some(i) = modes.modes.iter().position(|m| valid(is, &m.init)) {
        let warning = format!(
            "the initial condition of mode `{}` does not imply PRESET; starting there anyway",
            modes.modes[i].name
        );
        return (i, Some(warning));
    }
    let warning = format!(
        "no mode matches PRESET; starting in mode `{}`",
        modes.modes[0].name
    );
    (0, Some(warning))
}

/// Composes the per-mode machines.
///
/// States are the disjoint union of the modes' states. A move of mode `i`
/// keeps the output of machine `i` with fresh atoms erased; if it asserts
/// `jump_j` the successor is the initial state of mode `j`, otherwise the
/// successor inside machine `i`. Unreachable states are pruned.
pub fn compose(m: &CompositionManifest) -> Result<MealyMachine, ComposeError> {
    if m.machines.is_empty() {
        return Err(ComposeError::Empty);
    }
    let inputs = m.machines[m.start].inputs.clone();
    let expected: BTreeSet<&String> = inputs.iter().collect();
    let mut offsets = Vec::with_capacity(m.machines.len());
    let mut total = 0;
    for (i, w) in m.machines.iter().enumerate() {
        if w.inputs.iter().collect::<BTreeSet<_>>() != expected {
            return Err(ComposeError::InputMismatch {
                mode: i,
                found: w.inputs.clone(),
                expected: inputs.clone(),
            });
        }
        offsets.push(total);
        total += w.num_states();
    }

    // per mode: jump bit -> target, and machine letter for each composed letter
    let mut jump_bits: Vec<Vec<(u64, usize)>> = Vec::new();
    let mut letter_maps: Vec<Vec<usize>> = Vec::new();
    for (i, w) in m.machines.iter().enumerate() {
        let mut bits = Vec::new();
        for (target, atom) in m.jumps.get(i).into_iter().flatten() {
            if *target >= m.machines.len() {
                return Err(ComposeError::UnknownTargetMode {
                    mode: i,
                    target: *target,
                });
            }
            let k = w
                .outputs
                .iter()
                .position(|y| y == atom)
                .ok_or_else(|| ComposeError::MissingAtom {
                    mode: i,
                    atom: atom.clone(),
                })?;
            bits.push((1u64 << k, *target));
        }
        jump_bits.push(bits);
        letter_maps.push(
            (0..1usize << inputs.len())
                .map(|a| {
                    let names: Vec<&String> = inputs
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| a >> k & 1 == 1)
                        .map(|(_, n)| n)
                        .collect();
                    w.input_index(&names)
                })
                .collect(),
        );
    }

    let output_bit: HashMap<&str, u64> = m
        .outputs
        .iter()
        .enumerate()
        .map(|(k, y)| (y.as_str(), 1u64 << k))
        .collect();
    let relabel = |w: &MealyMachine, mask: u64| -> u64 {
        erase_fresh(&w.output_names(mask), &m.fresh)
            .iter()
            .filter_map(|y| output_bit.get(y.as_str()))
            .sum()
    };

    let locate = |g: usize| -> (usize, usize) {
        let i = offsets.iter().rposition(|&o| o <= g).expect("offset 0 exists");
        (i, g - offsets[i])
    };
    let initial = offsets[m.start] + m.machines[m.start].initial;
    let mut ids: HashMap<usize, usize> = HashMap::from([(initial, 0)]);
    let mut order = vec![initial];
    let mut rows = Vec::new();
    let mut n = 0;
    while n < order.len() {
        let (i, q) = locate(order[n]);
        let w = &m.machines[i];
        let mut row = Vec::with_capacity(letter_maps[i].len());
        for &la in &letter_maps[i] {
            let t = w.step(q, la);
            let mut fired = jump_bits[i].iter().filter(|(bit, _)| t.output & bit != 0);
            let next = match (fired.next(), fired.next()) {
                (Some(_), Some(_)) => {
                    return Err(ComposeError::MultipleJumps {
                        mode: i,
                        state: q,
                        input: la,
                    })
                }
                (Some(&(_, j)), None) => offsets[j] + m.machines[j].initial,
                _ => offsets[i] + t.next,
            };
            let id = *ids.entry(next).or_insert_with(|| {
                order.push(next);
                order.len() - 1
            });
            row.push(Transition {
                next: id,
                output: relabel(w, t.output),
            });
        }
        rows.push(row);
        n += 1;
    }
    Ok(MealyMachine::new(inputs, m.outputs.clone(), 0, rows))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpEntry {
    pub target: usize,
    pub atom: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub name: String,
    /// Projection in TLSF, relative to the manifest directory.
    pub spec_file: String,
    /// Where `synth` output for this mode is expected.
    pub machine_file: String,
    pub jumps: Vec<JumpEntry>,
    pub obligations: Vec<String>,
    pub done: String,
    pub frozen: Vec<String>,
}

/// The projection directory's index, written by `project` and read by
/// `compose`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionManifest {
    pub schema: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub start: usize,
    pub modes: Vec<ModeEntry>,
}

pub fn projection_stem(p: &Projection) -> String {
    format!("{}_{}", p.mode_index + 1, p.mode_name)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ComposeError + '_ {
    move |source| ComposeError::Io {
        path: path.display().to_string(),
        source,
    }
}

impl ProjectionManifest {
    pub fn new(spec: &ReactiveSpec, projections: &[Projection], start: usize) -> Self {
        let modes = projections
            .iter()
            .map(|p| {
                let stem = projection_stem(p);
                ModeEntry {
                    name: p.mode_name.clone(),
                    spec_file: format!("{stem}.tlsf"),
                    machine_file: format!("{stem}.machine.json"),
                    jumps: p
                        .jumps
                        .iter()
                        .map(|(target, atom)| JumpEntry {
                            target: *target,
                            atom: atom.clone(),
                        })
                        .collect(),
                    obligations: p.obligations.clone(),
                    done: p.done.clone(),
                    frozen: p.frozen.clone(),
                }
            })
            .collect();
        ProjectionManifest {
            schema: MANIFEST_SCHEMA.to_string(),
            inputs: spec.inputs.clone(),
            outputs: spec.outputs.clone(),
            start,
            modes,
        }
    }

    pub fn save(&self, dir: &Path) -> Result<(), ComposeError> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text).map_err(io_err(&path))
    }

    pub fn load(dir: &Path) -> Result<Self, ComposeError> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
        let m: ProjectionManifest = serde_json::from_str(&text)?;
        if m.schema != MANIFEST_SCHEMA {
            return Err(ComposeError::Schema(m.schema));
        }
        Ok(m)
    }

    pub fn fresh_atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for e in &self.modes {
            out.extend(e.obligations.iter().cloned());
            out.extend(e.jumps.iter().map(|j| j.atom.clone()));
            out.insert(e.done.clone());
        }
        out
    }

    /// Pairs the manifest with machines already in memory.
    pub fn with_machines(&self, machines: Vec<MealyMachine>) -> CompositionManifest {
        CompositionManifest {
            machines,
            start: self.start,
            jumps: self
                .modes
                .iter()
                .map(|e| e.jumps.iter().map(|j| (j.target, j.atom.clone())).collect())
                .collect(),
            fresh: self.fresh_atoms(),
            outputs: self.outputs.clone(),
        }
    }

    /// Reads every mode's machine from `dir`.
    pub fn composition(&self, dir: &Path) -> Result<CompositionManifest, ComposeError> {
        let mut machines = Vec::with_capacity(self.modes.len());
        for e in &self.modes {
            let path = dir.join(&e.machine_file);
            if !path.exists() {
                return Err(ComposeError::MissingMachine(e.name.clone()));
            }
            let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
            machines.push(MealyMachine::from_json(&text)?);
        }
        Ok(self.with_machines(machines))
    }
}
