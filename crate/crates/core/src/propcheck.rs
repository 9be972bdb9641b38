//! Validity and satisfiability of `Next`-bounded formulas.
//!
//! `X^k p` is read as the propositional variable `p@k`; a formula of depth
//! `d` is valid over all traces iff its expansion is a tautology. The
//! expansion is Tseitin-encoded and handed to a small DPLL search.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::ltl::Formula;

/// Atom `name` observed `offset` letters ahead.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimedAtom {
    pub name: String,
    pub offset: usize,
}

impl fmt::Display for TimedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.offset)
    }
}

/// Purely propositional formula over timed atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Timed {
    True,
    False,
    Var(TimedAtom),
    Not(Box<Timed>),
    And(Box<Timed>, Box<Timed>),
    Or(Box<Timed>, Box<Timed>),
}

impl fmt::Display for Timed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timed::True => write!(f, "true"),
            Timed::False => write!(f, "false"),
            Timed::Var(a) => write!(f, "{a}"),
            Timed::Not(a) => write!(f, "!{a}"),
            Timed::And(a, b) => write!(f, "({a} && {b})"),
            Timed::Or(a, b) => write!(f, "({a} || {b})"),
        }
    }
}

pub fn expand(f: &Formula) -> Timed {
    expand_at(f, 0)
}

fn expand_at(f: &Formula, offset: usize) -> Timed {
    match f {
        Formula::True => Timed::True,
        Formula::False => Timed::False,
        Formula::Atom(name) => Timed::Var(TimedAtom {
            name: name.clone(),
            offset,
        }),
        Formula::Not(a) => Timed::Not(Box::new(expand_at(a, offset))),
        Formula::And(a, b) => Timed::And(Box::new(expand_at(a, offset)), Box::new(expand_at(b, offset))),
        Formula::Or(a, b) => Timed::Or(Box::new(expand_at(a, offset)), Box::new(expand_at(b, offset))),
        Formula::Implies(a, b) => Timed::Or(
            Box::new(Timed::Not(Box::new(expand_at(a, offset)))),
            Box::new(expand_at(b, offset)),
        ),
        Formula::Next(a) => expand_at(a, offset + 1),
    }
}

pub fn is_sat(f: &Formula) -> bool {
    model(f).is_some()
}

pub fn is_valid(f: &Formula) -> bool {
    !is_sat(&Formula::not(f.clone()))
}

/// A satisfying assignment of the timed atoms occurring in `f`.
pub fn model(f: &Formula) -> Option<BTreeMap<TimedAtom, bool>> {
    let mut enc = Encoder::default();
    let root = enc.encode(&expand(f));
    enc.clauses.push(vec![root]);
    let mut solver = Dpll::new(enc.next_var, enc.clauses);
    if !solver.solve() {
        return None;
    }
    Some(
        enc.atoms
            .into_iter()
            .map(|(atom, var)| (atom, solver.value(var)))
            .collect(),
    )
}

/// Literals are non-zero integers: `v` or `-v` for variable `v ≥ 1`.
type Lit = i32;

#[derive(Default)]
struct Encoder {
    next_var: i32,
    atoms: HashMap<TimedAtom, i32>,
    clauses: Vec<Vec<Lit>>,
    true_var: Option<i32>,
}

impl Encoder {
    fn fresh(&mut self) -> i32 {
        self.next_var += 1;
        self.next_var
    }

    fn constant_true(&mut self) -> Lit {
        if let Some(v) = self.true_var {
            return v;
        }
        let v = self.fresh();
        self.clauses.push(vec![v]);
        self.true_var = Some(v);
        v
    }

    fn encode(&mut self, f: &Timed) -> Lit {
        match f {
            Timed::True => self.constant_true(),
            Timed::False => -self.constant_true(),
            Timed::Var(a) => {
                if let Some(&v) = self.atoms.get(a) {
                    return v;
                }
                let v = self.fresh();
                self.atoms.insert(a.clone(), v);
                v
            }
            Timed::Not(a) => -self.encode(a),
            Timed::And(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, x]);
                self.clauses.push(vec![-v, y]);
                self.clauses.push(vec![v, -x, -y]);
                v
            }
            Timed::Or(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![v, -x]);
                self.clauses.push(vec![v, -y]);
                self.clauses.push(vec![-v, x, y]);
                v
            }
        }
    }
}

struct Dpll {
    clauses: Vec<Vec<Lit>>,
    /// 0 unassigned, 1 true, -1 false; indexed by variable.
    assign: Vec<i8>,
    trail: Vec<i32>,
}

impl Dpll {
    fn new(vars: i32, clauses: Vec<Vec<Lit>>) -> Self {
        Dpll {
            clauses,
            assign: vec![0; vars as usize + 1],
            trail: Vec::new(),
        }
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.assign[l.unsigned_abs() as usize];
        if l > 0 {
            v
        } else {
            -v
        }
    }

    fn set(&mut self, l: Lit) {
        self.assign[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
        self.trail.push(l.abs());
    }

    fn value(&self, var: i32) -> bool {
        self.assign[var as usize] == 1
    }

    /// Unit propagation to fixpoint; false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for ci in 0..self.clauses.len() {
                let mut unassigned = None;
                let mut count = 0;
                let mut satisfied = false;
                for &l in &self.clauses[ci] {
                    match self.lit_value(l) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {
                            count += 1;
                            unassigned = Some(l);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match (count, unassigned) {
                    (0, _) => return false,
                    (1, Some(l)) => {
                        self.set(l);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.assign[v as usize] = 0;
        }
    }

    fn solve(&mut self) -> bool {
        if !self.propagate() {
            return false;
        }
        let Some(var) = (1..self.assign.len()).find(|&v| self.assign[v] == 0) else {
            return true;
        };
        for l in [var as i32, -(var as i32)] {
            let mark = self.trail.len();
            self.set(l);
            if self.solve() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}
