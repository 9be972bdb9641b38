mod common;

use common::{all_traces, arb_formula, valid_by_enumeration, ATOMS};
use moby::ltl::{eval, Formula, Trace};
use moby::projector::rm_modes;
use moby::propcheck::{is_sat, is_valid, model, TimedAtom};
use proptest::prelude::*;

fn traces() -> &'static [Trace] {
    use std::sync::OnceLock;
    static T: OnceLock<Vec<Trace>> = OnceLock::new();
    T.get_or_init(|| all_traces(&ATOMS, 3))
}

/// Trace whose letter `t` holds exactly the atoms set true at offset `t`.
fn trace_of(m: &std::collections::BTreeMap<TimedAtom, bool>) -> Trace {
    let letters = (0..3)
        .map(|t| {
            m.iter()
                .filter(|(a, v)| **v && a.offset == t)
                .map(|(a, _)| a.name.clone())
                .collect()
        })
        .collect();
    Trace::new(letters)
}

#[test]
fn constants_and_tautologies() {
    assert!(is_valid(&Formula::True));
    assert!(!is_valid(&Formula::False));
    assert!(is_sat(&Formula::atom("a")));
    let xa = Formula::next(Formula::atom("a"));
    assert!(is_valid(&Formula::or(xa.clone(), Formula::not(xa))));
}

#[test]
fn unsatisfiable_has_no_model() {
    let a = Formula::atom("a");
    assert_eq!(model(&Formula::and(a.clone(), Formula::not(a))), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn validity_matches_truth_tables(f in arb_formula(2)) {
        prop_assert_eq!(is_valid(&f), valid_by_enumeration(&f, traces()));
    }

    #[test]
    fn satisfiability_is_dual_to_validity(f in arb_formula(2)) {
        prop_assert_eq!(is_sat(&f), !is_valid(&Formula::not(f.clone())));
    }

    #[test]
    fn models_satisfy_their_formula(f in arb_formula(2)) {
        if let Some(m) = model(&f) {
            prop_assert_eq!(eval(&f, &trace_of(&m), 0), Ok(true));
        }
    }

    #[test]
    fn rm_modes_agrees_where_the_mode_holds(phi in arb_formula(2), mode in arb_formula(0)) {
        let r = rm_modes(&phi, &mode);
        for t in traces() {
            if eval(&mode, t, 0).unwrap() {
                prop_assert_eq!(eval(&r, t, 0), eval(&phi, t, 0), "trace {:?}", t);
            }
        }
    }
}
