//! Mode legality, mode specialization and the per-mode projections.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::{ModeDecomposition, ReactiveSpec};
use crate::ltl::{guarded_nnf, nsf, obligation_var, rm_next, simpl, substitute, Formula};
use crate::propcheck;

pub const DONE: &str = "done";

pub fn jump_name(target: usize) -> String {
    format!("jump_{}", target + 1)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProjectorError {
    #[error("guarantee #{item} is false in mode `{mode}`")]
    InconsistentMode { mode: String, item: usize },
    #[error("generated atom `{0}` clashes with a declared atom")]
    NameClash(String),
}

/// Truth values for the atoms of a witness valuation.
pub type Valuation = BTreeMap<String, bool>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Legality {
    Legal,
    /// Both modes hold under `witness` (0-based indices).
    Overlap {
        first: usize,
        second: usize,
        witness: Valuation,
    },
    /// No mode holds under `witness`.
    Incomplete { witness: Valuation },
}

impl Legality {
    pub fn is_legal(&self) -> bool {
        matches!(self, Legality::Legal)
    }
}

/// Legality over all valuations.
pub fn check_legality(modes: &ModeDecomposition) -> Legality {
    check_legality_in(modes, &Formula::True)
}

/// Legality over the valuations satisfying `context`.
pub fn check_legality_in(modes: &ModeDecomposition, context: &Formula) -> Legality {
    let present = |m: BTreeMap<propcheck::TimedAtom, bool>| -> Valuation {
        m.into_iter()
            .filter(|(a, _)| a.offset == 0)
            .map(|(a, v)| (a.name, v))
            .collect()
    };
    let ms = &modes.modes;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let both = Formula::and(
                context.clone(),
                Formula::and(ms[i].predicate.clone(), ms[j].predicate.clone()),
            );
            if let Some(m) = propcheck::model(&both) {
                return Legality::Overlap {
                    first: i,
                    second: j,
                    witness: present(m),
                };
            }
        }
    }
    let none = Formula::and(
        context.clone(),
        Formula::not(Formula::or_all(ms.iter().map(|m| m.predicate.clone()))),
    );
    match propcheck::model(&none) {
        Some(m) => Legality::Incomplete {
            witness: present(m),
        },
        None => Legality::Legal,
    }
}

/// The invariant part of the guarantees: items without `X`.
pub fn legality_context(spec: &ReactiveSpec) -> Formula {
    Formula::and_all(
        spec.guarantees
            .iter()
            .filter(|g| !g.contains_next())
            .cloned(),
    )
}

/// Specializes `phi` for the current letter satisfying `mode`.
///
/// Next-free subformulas outside any `X` are replaced by `true` or `false`
/// when the mode decides them; undecided ones are specialized child by
/// child. `X` subtrees are left alone.
pub fn rm_modes(phi: &Formula, mode: &Formula) -> Formula {
    simpl(&specialize(phi, mode))
}

fn specialize(f: &Formula, mode: &Formula) -> Formula {
    if let Formula::Next(_) = f {
        return f.clone();
    }
    if !f.contains_next() && !matches!(f, Formula::True | Formula::False) {
        if propcheck::is_valid(&Formula::implies(mode.clone(), f.clone())) {
            return Formula::True;
        }
        if propcheck::is_valid(&Formula::implies(mode.clone(), Formula::not(f.clone()))) {
            return Formula::False;
        }
    }
    match f {
        Formula::Not(a) => Formula::not(specialize(a, mode)),
        Formula::And(a, b) => Formula::and(specialize(a, mode), specialize(b, mode)),
        Formula::Or(a, b) => Formula::or(specialize(a, mode), specialize(b, mode)),
        Formula::Implies(a, b) => Formula::implies(specialize(a, mode), specialize(b, mode)),
        _ => f.clone(),
    }
}

/// Specializes every item; `true` items disappear.
pub fn reduce(items: &[Formula], mode: &Formula, mode_name: &str) -> Result<Vec<Formula>, ProjectorError> {
    let mut out = Vec::new();
    for (i, item) in items.iter().enumerate() {
        match rm_modes(item, mode) {
            Formula::True => {}
            Formula::False => {
                return Err(ProjectorError::InconsistentMode {
                    mode: mode_name.to_string(),
                    item: i,
                })
            }
            f => out.push(f),
        }
    }
    Ok(out)
}

/// The sub-specification for one mode plus the bookkeeping the composer
/// needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    pub mode_index: usize,
    pub mode_name: String,
    pub spec: ReactiveSpec,
    /// Obligation atoms, sorted.
    pub obligations: Vec<String>,
    /// `(target mode index, jump atom)`, by target.
    pub jumps: Vec<(usize, String)>,
    pub done: String,
    /// Original outputs that are false throughout the mode and were dropped.
    pub frozen: Vec<String>,
}

impl Projection {
    pub fn fresh_atoms(&self) -> Vec<String> {
        let mut out = self.obligations.clone();
        out.extend(self.jumps.iter().map(|(_, a)| a.clone()));
        out.push(self.done.clone());
        out
    }
}

pub fn compute_projections(
    spec: &ReactiveSpec,
    modes: &ModeDecomposition,
) -> Result<Vec<Projection>, ProjectorError> {
    (0..modes.modes.len())
        .map(|i| project_mode(spec, modes, i))
        .collect()
}

/// Replaces frozen outputs by `false`.
fn freeze(f: &Formula, frozen: &[String]) -> Formula {
    let mut out = f.clone();
    for y in frozen {
        out = substitute(&out, &Formula::atom(y.as_str()), &Formula::False);
    }
    simpl(&out)
}

pub fn project_mode(
    spec: &ReactiveSpec,
    modes: &ModeDecomposition,
    i: usize,
) -> Result<Projection, ProjectorError> {
    let mode = &modes.modes[i];
    let m = &mode.predicate;
    let done = Formula::atom(DONE);
    let not_done = Formula::not(done.clone());

    let mut env_atoms = BTreeSet::new();
    spec.initially.collect_atoms(&mut env_atoms);
    for a in &spec.assumptions {
        a.collect_atoms(&mut env_atoms);
    }
    let frozen: Vec<String> = spec
        .outputs
        .iter()
        .filter(|y| {
            !env_atoms.contains(*y)
                && propcheck::is_valid(&Formula::implies(
                    m.clone(),
                    Formula::not(Formula::atom(y.as_str())),
                ))
        })
        .cloned()
        .collect();
    let is_frozen = |name: &str| frozen.iter().any(|y| y == name);

    let normal: Vec<Formula> = spec.guarantees.iter().map(guarded_nnf).collect();
    let reduced = reduce(&normal, m, &mode.name)?;

    // obligations, closed under rm_next
    let mut oblig = BTreeSet::new();
    for g in &reduced {
        for f in nsf(g) {
            let mut cur = f;
            while let Formula::Next(inner) = &cur {
                oblig.insert(cur.clone());
                if !matches!(**inner, Formula::Next(_)) {
                    break;
                }
                cur = (**inner).clone();
            }
        }
    }
    // deepest first, so that X X p is replaced before X p
    let mut by_depth: Vec<&Formula> = oblig.iter().collect();
    by_depth.sort_by_key(|f| std::cmp::Reverse(f.x_depth()));
    let var = |f: &Formula| obligation_var(f).expect("obligations are timed literals");

    let mut guarantees = vec![Formula::implies(not_done.clone(), freeze(m, &frozen))];
    for g in &reduced {
        let mut item = g.clone();
        for f in &by_depth {
            item = substitute(&item, f, &var(f));
        }
        guarantees.push(Formula::implies(not_done.clone(), item));
    }
    for f in &oblig {
        let target = rm_next(f).expect("obligations start with X");
        let raised = Formula::and(not_done.clone(), var(f));
        let step = match &target {
            Formula::Atom(y) if is_frozen(y) => Some(done.clone()),
            Formula::Not(inner) if matches!(&**inner, Formula::Atom(y) if is_frozen(y)) => None,
            _ => Some(var(&target)),
        };
        if let Some(step) = step {
            guarantees.push(Formula::implies(raised, Formula::next(step)));
        }
    }

    let targets = modes.successors(i);
    let jumps: Vec<(usize, String)> = targets.iter().map(|&j| (j, jump_name(j))).collect();
    for (j, jump) in &jumps {
        let init_j = &modes.modes[*j].init;
        for f in &oblig {
            let target = rm_next(f).expect("obligations start with X");
            if !propcheck::is_valid(&Formula::implies(init_j.clone(), target)) {
                guarantees.push(Formula::implies(
                    Formula::atom(jump.as_str()),
                    Formula::not(var(f)),
                ));
            }
        }
    }

    guarantees.push(Formula::implies(done.clone(), Formula::next(done.clone())));
    let any_jump = Formula::or_all(jumps.iter().map(|(_, a)| Formula::atom(a.as_str())));
    let stay = Formula::implies(not_done.clone(), Formula::next(not_done.clone()));
    if jumps.is_empty() {
        guarantees.push(stay);
    } else {
        guarantees.push(Formula::implies(any_jump.clone(), Formula::next(done.clone())));
        guarantees.push(Formula::implies(Formula::not(any_jump), stay));
        for (a, (_, ja)) in jumps.iter().enumerate() {
            for (_, jb) in &jumps[a + 1..] {
                guarantees.push(Formula::implies(
                    Formula::atom(ja.as_str()),
                    Formula::not(Formula::atom(jb.as_str())),
                ));
            }
        }
    }

    let preset = Formula::and(freeze(&mode.init, &frozen), not_done);
    let preset = simpl(&preset);

    let obligations: Vec<String> = oblig
        .iter()
        .map(|f| match var(f) {
            Formula::Atom(name) => name,
            other => unreachable!("obligation variable {other}"),
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let declared = spec.symbol_table();
    for name in obligations
        .iter()
        .chain(jumps.iter().map(|(_, a)| a))
        .chain([&DONE.to_string()])
    {
        if declared.contains(name) {
            return Err(ProjectorError::NameClash(name.clone()));
        }
    }

    let mut used = BTreeSet::new();
    preset.collect_atoms(&mut used);
    for f in guarantees.iter().chain(&spec.assumptions) {
        f.collect_atoms(&mut used);
    }
    let mut outputs: Vec<String> = spec
        .outputs
        .iter()
        .filter(|y| used.contains(*y) && !is_frozen(y))
        .cloned()
        .collect();
    outputs.extend(obligations.iter().cloned());
    outputs.extend(jumps.iter().map(|(_, a)| a.clone()));
    outputs.push(DONE.to_string());

    Ok(Projection {
        mode_index: i,
        mode_name: mode.name.clone(),
        spec: ReactiveSpec {
            inputs: spec.inputs.clone(),
            outputs,
            initially: mode.arrival.clone(),
            preset,
            assumptions: spec.assumptions.clone(),
            guarantees,
        },
        obligations,
        jumps,
        done: DONE.to_string(),
        frozen,
    })
}
