use std::collections::BTreeSet;

use super::{Formula, LtlError};

/// Maximal next-free subformulas.
///
/// The walk stops at `Next` nodes, so atoms that only occur under a `Next`
/// are not reported. Works on any Boolean shape, including surface `Implies`.
pub fn asf(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    collect_asf(f, &mut out);
    out
}

fn collect_asf(f: &Formula, out: &mut BTreeSet<Formula>) {
    if !f.contains_next() {
        out.insert(f.clone());
        return;
    }
    match f {
        Formula::Next(_) => {}
        Formula::Not(a) => collect_asf(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_asf(a, out);
            collect_asf(b, out);
        }
        Formula::True | Formula::False | Formula::Atom(_) => unreachable!(),
    }
}

/// Maximal subformulas rooted at `Next`.
pub fn nsf(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    collect_nsf(f, &mut out);
    out
}

fn collect_nsf(f: &Formula, out: &mut BTreeSet<Formula>) {
    match f {
        Formula::Next(_) => {
            out.insert(f.clone());
        }
        Formula::Not(a) => collect_nsf(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_nsf(a, out);
            collect_nsf(b, out);
        }
        Formula::True | Formula::False | Formula::Atom(_) => {}
    }
}

/// Strips one leading `Next`.
pub fn rm_next(f: &Formula) -> Result<Formula, LtlError> {
    match f {
        Formula::Next(inner) => Ok((**inner).clone()),
        other => Err(LtlError::NotANextFormula(other.to_string())),
    }
}

/// Name of the obligation atom for `X^depth literal`.
///
/// `X p` gives `s_X_p`, `X X !p` gives `s_XX_not_p`.
pub fn obligation_name(depth: usize, literal: &Formula) -> Option<String> {
    let (negated, atom) = match literal {
        Formula::Atom(name) => (false, name),
        Formula::Not(inner) => match &**inner {
            Formula::Atom(name) => (true, name),
            _ => return None,
        },
        _ => return None,
    };
    let mut name = String::from("s_");
    name.push_str(&"X".repeat(depth));
    name.push('_');
    if negated {
        name.push_str("not_");
    }
    name.push_str(atom);
    Some(name)
}

/// The variable standing for a timed literal: the literal itself at depth 0,
/// a fresh obligation atom otherwise.
pub fn obligation_var(f: &Formula) -> Result<Formula, LtlError> {
    let unsupported = || LtlError::UnsupportedShape(f.to_string());
    let (depth, literal) = f.as_timed_literal().ok_or_else(unsupported)?;
    if depth == 0 {
        return Ok(f.clone());
    }
    obligation_name(depth, literal)
        .map(Formula::Atom)
        .ok_or_else(unsupported)
}

/// Replaces every subtree equal to `target`, outermost first.
pub fn substitute(f: &Formula, target: &Formula, replacement: &Formula) -> Formula {
    if f == target {
        return replacement.clone();
    }
    let go = |g: &Formula| substitute(g, target, replacement);
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(go(a)),
        Formula::Next(a) => Formula::next(go(a)),
        Formula::And(a, b) => Formula::and(go(a), go(b)),
        Formula::Or(a, b) => Formula::or(go(a), go(b)),
        Formula::Implies(a, b) => Formula::implies(go(a), go(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::nnf;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }
    fn x(f: Formula) -> Formula {
        Formula::next(f)
    }
    fn set(items: Vec<Formula>) -> BTreeSet<Formula> {
        items.into_iter().collect()
    }

    fn example() -> Formula {
        Formula::implies(x(a("p")), Formula::and(x(a("q")), a("r")))
    }

    #[test]
    fn asf_on_surface_and_normal_forms() {
        assert_eq!(asf(&example()), set(vec![a("r")]));
        assert_eq!(asf(&nnf(&example())), set(vec![a("r")]));
        let pq = Formula::and(a("p"), a("q"));
        assert_eq!(asf(&pq), set(vec![pq.clone()]));
        let f = Formula::or(
            x(a("p")),
            Formula::and(x(Formula::not(a("q"))), Formula::or(a("a"), a("b"))),
        );
        assert_eq!(asf(&f), set(vec![Formula::or(a("a"), a("b"))]));
    }

    #[test]
    fn nsf_examples() {
        assert_eq!(nsf(&example()), set(vec![x(a("p")), x(a("q"))]));
        assert_eq!(
            nsf(&nnf(&example())),
            set(vec![x(Formula::not(a("p"))), x(a("q"))])
        );
        assert!(nsf(&a("p")).is_empty());
        let f = Formula::or(x(x(a("p"))), x(a("q")));
        assert_eq!(nsf(&f), set(vec![x(x(a("p"))), x(a("q"))]));
    }

    #[test]
    fn rm_next_strips_one() {
        assert_eq!(rm_next(&x(x(a("p")))).unwrap(), x(a("p")));
        assert_eq!(rm_next(&x(Formula::not(a("q")))).unwrap(), Formula::not(a("q")));
        assert!(matches!(rm_next(&a("p")), Err(LtlError::NotANextFormula(_))));
    }

    #[test]
    fn obligation_names() {
        assert_eq!(obligation_var(&x(a("p"))).unwrap(), a("s_X_p"));
        assert_eq!(obligation_var(&a("p")).unwrap(), a("p"));
        assert_eq!(
            obligation_var(&Formula::not(a("p"))).unwrap(),
            Formula::not(a("p"))
        );
        let pos = obligation_var(&x(a("counter_1"))).unwrap();
        let neg = obligation_var(&x(Formula::not(a("counter_1")))).unwrap();
        assert_eq!(neg, a("s_X_not_counter_1"));
        assert_ne!(pos, neg);
        assert_eq!(obligation_var(&x(x(a("p")))).unwrap(), a("s_XX_p"));
        assert!(matches!(
            obligation_var(&Formula::and(a("p"), a("q"))),
            Err(LtlError::UnsupportedShape(_))
        ));
    }

    #[test]
    fn substitute_examples() {
        let s = a("s");
        let f = Formula::or(x(a("p")), a("q"));
        assert_eq!(substitute(&f, &x(a("p")), &s), Formula::or(s.clone(), a("q")));
        assert_eq!(substitute(&a("p"), &a("q"), &a("r")), a("p"));
        let both = Formula::and(x(a("p")), x(a("p")));
        assert_eq!(substitute(&both, &x(a("p")), &s), Formula::and(s.clone(), s));
    }
}
