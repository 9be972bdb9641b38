use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Who controls an atomic proposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomKind {
    Input,
    Output,
    /// Introduced by the projector: obligation, jump and done variables.
    Fresh,
}

/// A formula of LTL restricted to the Next operator.
///
/// `Implies` is kept as a surface connective; [`nnf`](super::nnf) removes it.
/// The `G` operator never appears here: it lives in the structure of a
/// reactive specification (each assumption and guarantee is implicitly
/// under `G`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    /// `X^k f`.
    pub fn next_n(k: usize, mut f: Formula) -> Self {
        for _ in 0..k {
            f = Formula::next(f);
        }
        f
    }

    /// Left-folded conjunction; `True` for an empty iterator.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-folded disjunction; `False` for an empty iterator.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Maximum nesting of `Next` along any root-to-leaf path.
    pub fn x_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(a) => a.x_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.x_depth().max(b.x_depth())
            }
            Formula::Next(a) => 1 + a.x_depth(),
        }
    }

    pub fn contains_next(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => false,
            Formula::Not(a) => a.contains_next(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.contains_next() || b.contains_next()
            }
            Formula::Next(_) => true,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Next(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            Formula::Not(a) | Formula::Next(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn mentions(&self, atom: &str) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(name) => name == atom,
            Formula::Not(a) | Formula::Next(a) => a.mentions(atom),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.mentions(atom) || b.mentions(atom)
            }
        }
    }

    /// `Atom` or `Not(Atom)`.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(a) => matches!(**a, Formula::Atom(_)),
            _ => false,
        }
    }

    /// Splits `X^i l` into `(i, l)` when `l` is a literal.
    pub fn as_timed_literal(&self) -> Option<(usize, &Formula)> {
        let mut depth = 0;
        let mut cur = self;
        while let Formula::Next(inner) = cur {
            depth += 1;
            cur = inner;
        }
        cur.is_literal().then_some((depth, cur))
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) | Formula::Next(_) => 4,
            Formula::True | Formula::False | Formula::Atom(_) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(name) => write!(f, "{name}"),
            Formula::Not(a) => {
                write!(f, "!")?;
                a.fmt_prec(f, 4)
            }
            Formula::Next(a) => {
                write!(f, "X ")?;
                a.fmt_prec(f, 4)
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " && ")?;
                b.fmt_prec(f, 4)
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " || ")?;
                b.fmt_prec(f, 3)
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)
            }
        }
    }
}

/// Prints in the TLSF expression syntax accepted by the frontend.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn x_depth_counts_nested_next() {
        let f = Formula::or(Formula::next(Formula::next(p())), Formula::next(q()));
        assert_eq!(f.x_depth(), 2);
        assert_eq!(p().x_depth(), 0);
    }

    #[test]
    fn display_keeps_associativity() {
        let left = Formula::and(Formula::and(p(), q()), Formula::atom("r"));
        let right = Formula::and(p(), Formula::and(q(), Formula::atom("r")));
        assert_eq!(left.to_string(), "p && q && r");
        assert_eq!(right.to_string(), "p && (q && r)");
        let imp = Formula::implies(Formula::implies(p(), q()), p());
        assert_eq!(imp.to_string(), "(p -> q) -> p");
        assert_eq!(Formula::next(Formula::or(p(), q())).to_string(), "X (p || q)");
        assert_eq!(Formula::not(Formula::next(p())).to_string(), "!X p");
    }

    #[test]
    fn timed_literal_shape() {
        let f = Formula::next(Formula::next(Formula::not(p())));
        let (k, lit) = f.as_timed_literal().unwrap();
        assert_eq!(k, 2);
        assert_eq!(lit, &Formula::not(p()));
        assert!(Formula::next(Formula::and(p(), q())).as_timed_literal().is_none());
    }
}
