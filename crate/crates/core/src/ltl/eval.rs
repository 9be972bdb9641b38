use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Formula, LtlError};

/// A finite sequence of letters; each letter holds the atoms that are true.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub letters: Vec<BTreeSet<String>>,
}

impl Trace {
    pub fn new(letters: Vec<BTreeSet<String>>) -> Self {
        Trace { letters }
    }

    /// Builds a trace from slices of atom names.
    pub fn from_names<S: AsRef<str>>(letters: &[&[S]]) -> Self {
        Trace {
            letters: letters
                .iter()
                .map(|l| l.iter().map(|s| s.as_ref().to_string()).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Truth of `f` at position `i`.
pub fn eval(f: &Formula, trace: &Trace, i: usize) -> Result<bool, LtlError> {
    let depth = f.x_depth();
    if i + depth >= trace.len() {
        return Err(LtlError::WindowTooShort {
            position: i,
            depth,
            length: trace.len(),
        });
    }
    Ok(eval_unchecked(f, &trace.letters, i))
}

/// Evaluates on a slice of letters; the caller guarantees the window is long
/// enough.
pub fn eval_letters(f: &Formula, letters: &[BTreeSet<String>], i: usize) -> bool {
    eval_unchecked(f, letters, i)
}

fn eval_unchecked(f: &Formula, letters: &[BTreeSet<String>], i: usize) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(name) => letters[i].contains(name),
        Formula::Not(a) => !eval_unchecked(a, letters, i),
        Formula::And(a, b) => eval_unchecked(a, letters, i) && eval_unchecked(b, letters, i),
        Formula::Or(a, b) => eval_unchecked(a, letters, i) || eval_unchecked(b, letters, i),
        Formula::Implies(a, b) => !eval_unchecked(a, letters, i) || eval_unchecked(b, letters, i),
        Formula::Next(a) => eval_unchecked(a, letters, i + 1),
    }
}
