mod common;

use std::collections::BTreeSet;

use common::{all_traces, arb_formula, equivalent_on, ATOMS};
use moby::frontend::parse_spec;
use moby::ltl::{asf, eval, guarded_nnf, is_nnf, nnf, nsf, rm_next, simpl, Formula, LtlError, Trace};
use proptest::prelude::*;

fn a(n: &str) -> Formula {
    Formula::atom(n)
}

fn x(f: Formula) -> Formula {
    Formula::next(f)
}

#[test]
fn asf_and_nsf_on_the_worked_example() {
    // X p -> (X q && r)
    let f = Formula::implies(x(a("p")), Formula::and(x(a("q")), a("r")));
    assert_eq!(asf(&f), BTreeSet::from([a("r")]));
    assert_eq!(nsf(&f), BTreeSet::from([x(a("p")), x(a("q"))]));
}

#[test]
fn nsf_keeps_maximal_next_subformulas() {
    let inner = x(Formula::or(a("p"), x(a("q"))));
    let f = Formula::and(inner.clone(), a("r"));
    assert_eq!(nsf(&f), BTreeSet::from([inner]));
}

#[test]
fn rm_next_requires_a_leading_next() {
    assert_eq!(rm_next(&x(x(a("p")))).unwrap(), x(a("p")));
    assert!(matches!(rm_next(&a("p")), Err(LtlError::NotANextFormula(_))));
}

#[test]
fn eval_needs_a_long_enough_window() {
    let t = Trace::from_names(&[&["p"], &[]]);
    assert_eq!(eval(&x(a("p")), &t, 0), Ok(false));
    assert_eq!(eval(&a("p"), &t, 0), Ok(true));
    assert!(matches!(
        eval(&x(x(a("p"))), &t, 0),
        Err(LtlError::WindowTooShort { depth: 2, .. })
    ));
}

fn traces() -> &'static [Trace] {
    use std::sync::OnceLock;
    static T: OnceLock<Vec<Trace>> = OnceLock::new();
    T.get_or_init(|| all_traces(&ATOMS, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nnf_is_equivalent_and_normal(f in arb_formula(2)) {
        let g = nnf(&f);
        prop_assert!(is_nnf(&g));
        prop_assert!(equivalent_on(&f, &g, traces()));
        // X true normalizes to true, so depth can only drop
        prop_assert!(g.x_depth() <= f.x_depth());
    }

    #[test]
    fn guarded_nnf_is_equivalent(f in arb_formula(2)) {
        prop_assert!(equivalent_on(&f, &guarded_nnf(&f), traces()));
    }

    #[test]
    fn simpl_is_equivalent_and_never_grows(f in arb_formula(2)) {
        let g = simpl(&f);
        prop_assert!(equivalent_on(&f, &g, traces()));
        prop_assert!(g.size() <= f.size());
        prop_assert_eq!(simpl(&g), g.clone());
    }

    #[test]
    fn printed_formulas_parse_back(f in arb_formula(2)) {
        let text = format!("INPUTS {{ a; b; c; d; }} ASSUMPTIONS {{ G ({f}); }}");
        let spec = parse_spec(&text).unwrap();
        let back = spec.assumptions.first().cloned().unwrap_or(Formula::True);
        prop_assert!(equivalent_on(&f, &back, traces()), "{} vs {}", f, back);
    }
}
