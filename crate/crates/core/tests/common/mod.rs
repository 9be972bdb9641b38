#![allow(dead_code)]

use std::collections::BTreeSet;

use moby::composer::{compose, start_mode, ProjectionManifest};
use moby::frontend::{parse_modes, parse_spec, ModeDecomposition, ReactiveSpec};
use moby::ltl::{eval, Formula, Trace};
use moby::projector::{compute_projections, Projection};
use moby::synth::{synthesize, MealyMachine, SynthOptions};
use proptest::prelude::*;
use rand::Rng;

pub const ATOMS: [&str; 4] = ["a", "b", "c", "d"];

/// Random formula over `ATOMS[..atoms]` with `X`-depth at most `max_depth`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: usize, max_depth: usize, size: usize) -> Formula {
    if size <= 1 {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(ATOMS[rng.gen_range(0..atoms)]),
        };
    }
    let split = |rng: &mut R| {
        let left = rng.gen_range(1..size);
        (left, size - left)
    };
    match rng.gen_range(0..5) {
        0 => Formula::not(random_formula(rng, atoms, max_depth, size - 1)),
        1 if max_depth > 0 => Formula::next(random_formula(rng, atoms, max_depth - 1, size - 1)),
        1 | 2 => {
            let (l, r) = split(rng);
            Formula::and(
                random_formula(rng, atoms, max_depth, l),
                random_formula(rng, atoms, max_depth, r),
            )
        }
        3 => {
            let (l, r) = split(rng);
            Formula::or(
                random_formula(rng, atoms, max_depth, l),
                random_formula(rng, atoms, max_depth, r),
            )
        }
        _ => {
            let (l, r) = split(rng);
            Formula::implies(
                random_formula(rng, atoms, max_depth, l),
                random_formula(rng, atoms, max_depth, r),
            )
        }
    }
}

pub fn arb_formula(max_depth: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (0..ATOMS.len()).prop_map(|i| Formula::atom(ATOMS[i])),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.prop_map(Formula::next),
        ]
    })
    .prop_filter("bounded depth", move |f| f.x_depth() <= max_depth)
}

/// Every trace of `len` letters over `atoms`.
pub fn all_traces(atoms: &[&str], len: usize) -> Vec<Trace> {
    let vars = atoms.len() * len;
    (0..1u64 << vars)
        .map(|bits| {
            Trace::new(
                (0..len)
                    .map(|t| {
                        atoms
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| bits >> (t * atoms.len() + k) & 1 == 1)
                            .map(|(_, a)| a.to_string())
                            .collect::<BTreeSet<_>>()
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Truth-table validity: `f` holds at position 0 of every trace long enough
/// for its depth.
pub fn valid_by_enumeration(f: &Formula, traces: &[Trace]) -> bool {
    traces.iter().all(|t| eval(f, t, 0).expect("traces cover the depth"))
}

pub fn equivalent_on(f: &Formula, g: &Formula, traces: &[Trace]) -> bool {
    traces
        .iter()
        .all(|t| eval(f, t, 0).unwrap() == eval(g, t, 0).unwrap())
}

pub struct Pipeline {
    pub spec: ReactiveSpec,
    pub modes: ModeDecomposition,
    pub projections: Vec<Projection>,
    /// `None` when some projection is unrealizable.
    pub machines: Option<Vec<MealyMachine>>,
}

pub fn pipeline(spec_text: &str, modes_text: &str) -> Pipeline {
    let spec = parse_spec(spec_text).unwrap();
    let modes = parse_modes(modes_text, &spec).unwrap();
    let projections = compute_projections(&spec, &modes).unwrap();
    let machines = projections
        .iter()
        .map(|p| {
            synthesize(&p.spec, &SynthOptions::default())
                .unwrap()
                .machine()
                .cloned()
        })
        .collect();
    Pipeline {
        spec,
        modes,
        projections,
        machines,
    }
}

impl Pipeline {
    pub fn composed(&self) -> MealyMachine {
        let (start, _) = start_mode(&self.spec, &self.modes);
        let manifest = ProjectionManifest::new(&self.spec, &self.projections, start);
        compose(&manifest.with_machines(self.machines.clone().expect("all realizable"))).unwrap()
    }
}
