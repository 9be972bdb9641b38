//! Normal forms and Boolean simplification.

use super::Formula;

/// Negation normal form with `Next` pushed onto literals.
///
/// The result contains no `Implies`, `Not` only directly above atoms, and
/// `Next` only in chains `X^i l` with `l` a literal.
pub fn nnf(f: &Formula) -> Formula {
    normalize(f, false, false)
}

/// Like [`nnf`], but an implication whose antecedent is `Next`-free is kept
/// as `a -> b` (with both sides normalized).
///
/// Every `Next` in the result still occurs with positive polarity, so
/// replacing a timed literal by a stronger fresh variable remains sound.
/// This form keeps the shape of requirements such as `reset -> X c`.
pub fn guarded_nnf(f: &Formula) -> Formula {
    normalize(f, false, true)
}

fn normalize(f: &Formula, negated: bool, keep_implies: bool) -> Formula {
    match f {
        Formula::True => {
            if negated {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::False => {
            if negated {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Atom(_) => {
            if negated {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(a) => normalize(a, !negated, keep_implies),
        Formula::And(a, b) => {
            let (x, y) = (
                normalize(a, negated, keep_implies),
                normalize(b, negated, keep_implies),
            );
            if negated {
                Formula::or(x, y)
            } else {
                Formula::and(x, y)
            }
        }
        Formula::Or(a, b) => {
            let (x, y) = (
                normalize(a, negated, keep_implies),
                normalize(b, negated, keep_implies),
            );
            if negated {
                Formula::and(x, y)
            } else {
                Formula::or(x, y)
            }
        }
        Formula::Implies(a, b) => {
            if negated {
                Formula::and(
                    normalize(a, false, keep_implies),
                    normalize(b, true, keep_implies),
                )
            } else if keep_implies && !a.contains_next() {
                Formula::implies(
                    normalize(a, false, false),
                    normalize(b, false, keep_implies),
                )
            } else {
                Formula::or(
                    normalize(a, true, keep_implies),
                    normalize(b, false, keep_implies),
                )
            }
        }
        Formula::Next(a) => push_next(normalize(a, negated, keep_implies)),
    }
}

/// Distributes one `Next` over an already normalized formula.
fn push_next(f: Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f,
        Formula::Atom(_) | Formula::Not(_) | Formula::Next(_) => Formula::next(f),
        Formula::And(a, b) => Formula::and(push_next(*a), push_next(*b)),
        Formula::Or(a, b) => Formula::or(push_next(*a), push_next(*b)),
        Formula::Implies(a, b) => Formula::implies(push_next(*a), push_next(*b)),
    }
}

/// Constant folding: the result is `True`, `False`, or free of constants.
pub fn simpl(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => match simpl(a) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        },
        Formula::And(a, b) => match (simpl(a), simpl(b)) {
            (Formula::False, _) | (_, Formula::False) => Formula::False,
            (Formula::True, x) | (x, Formula::True) => x,
            (x, y) => Formula::and(x, y),
        },
        Formula::Or(a, b) => match (simpl(a), simpl(b)) {
            (Formula::True, _) | (_, Formula::True) => Formula::True,
            (Formula::False, x) | (x, Formula::False) => x,
            (x, y) => Formula::or(x, y),
        },
        Formula::Implies(a, b) => match (simpl(a), simpl(b)) {
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (Formula::True, y) => y,
            (x, Formula::False) => simpl(&Formula::not(x)),
            (x, y) => Formula::implies(x, y),
        },
        Formula::Next(a) => match simpl(a) {
            c @ (Formula::True | Formula::False) => c,
            other => Formula::next(other),
        },
    }
}

/// True when the formula is in [`nnf`] shape.
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Not(a) => matches!(**a, Formula::Atom(_)),
        Formula::And(a, b) | Formula::Or(a, b) => is_nnf(a) && is_nnf(b),
        Formula::Implies(..) => false,
        Formula::Next(_) => f.as_timed_literal().is_some(),
    }
}
