//! Explicit window arena and its safety fixpoint.
//!
//! A letter is a `u64` bitmask over all atoms. Inputs take bits `0..nx`;
//! output `k` takes bit `nx + ny - 1 - k`, so that the output part of a
//! letter read as an integer orders output valuations lexicographically in
//! declaration order (first output most significant, false before true).
//!
//! A state holds the last `d` letters and whether position 0 has been
//! judged. Position `t` is judged once letter `t + d` is known, which is
//! when the window would overflow. Windows of length `d` are indexed
//! densely (first letter most significant), so the successors of a window
//! form one aligned block of `2^atoms` indices and a state's moves can be
//! evaluated for all letters at once as a bitset.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use crate::frontend::ReactiveSpec;
use crate::ltl::{nnf, Formula};

use super::mealy::{MealyMachine, Transition};
use super::{SynthError, SynthOptions};

/// Formula compiled against the letter layout.
#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Lit { offset: usize, bit: u32, neg: bool },
    And(Vec<Node>),
    Or(Vec<Node>),
}

fn compile(f: &Formula, bits: &HashMap<String, u32>) -> Result<Node, SynthError> {
    go(&nnf(f), 0, bits)
}

fn go(f: &Formula, off: usize, bits: &HashMap<String, u32>) -> Result<Node, SynthError> {
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Atom(a) => Node::Lit {
            offset: off,
            bit: *bits
                .get(a)
                .ok_or_else(|| SynthError::UnknownAtom(a.clone()))?,
            neg: false,
        },
        Formula::Not(inner) => match go(inner, off, bits)? {
            Node::Lit { offset, bit, neg } => Node::Lit {
                offset,
                bit,
                neg: !neg,
            },
            Node::Const(b) => Node::Const(!b),
            _ => unreachable!("negation normal form"),
        },
        Formula::And(..) | Formula::Or(..) => {
            let conj = matches!(f, Formula::And(..));
            let mut parts = Vec::new();
            flatten(f, conj, &mut parts);
            let kids = parts
                .into_iter()
                .map(|g| go(g, off, bits))
                .collect::<Result<Vec<_>, _>>()?;
            if conj {
                Node::And(kids)
            } else {
                Node::Or(kids)
            }
        }
        Formula::Next(inner) => go(inner, off + 1, bits)?,
        Formula::Implies(..) => unreachable!("negation normal form"),
    })
}

fn flatten<'a>(f: &'a Formula, conj: bool, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) if conj => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        Formula::Or(a, b) if !conj => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        _ => out.push(f),
    }
}


/// A compiled formula with the window letters plugged in; what remains
/// reads only the newest letter.
enum Res {
    Const(bool),
    Lit { bit: u32, neg: bool },
    And(Vec<Res>),
    Or(Vec<Res>),
}

/// `window` holds the letters at offsets `0..d`; offset `d` is open.
fn residual(node: &Node, window: &[u64]) -> Res {
    match node {
        Node::Const(b) => Res::Const(*b),
        Node::Lit { offset, bit, neg } => match window.get(*offset) {
            Some(w) => Res::Const(((w >> bit) & 1 == 1) != *neg),
            None => Res::Lit {
                bit: *bit,
                neg: *neg,
            },
        },
        Node::And(xs) | Node::Or(xs) => {
            let conj = matches!(node, Node::And(_));
            let mut kids = Vec::new();
            for x in xs {
                match residual(x, window) {
                    // absorbing constant
                    Res::Const(b) if b != conj => return Res::Const(b),
                    Res::Const(_) => {}
                    r => kids.push(r),
                }
            }
            match kids.len() {
                0 => Res::Const(conj),
                1 => kids.pop().expect("one element"),
                _ if conj => Res::And(kids),
                _ => Res::Or(kids),
            }
        }
    }
}

/// Sets of letters, one bit per letter.
struct Letters {
    atoms: u32,
    words: usize,
    /// Mask of the meaningful bits of each word.
    full: u64,
    /// `lits[b]`: letters with bit `b` set.
    lits: Vec<Vec<u64>>,
}

impl Letters {
    fn new(atoms: u32) -> Self {
        let count = 1u64 << atoms;
        let words = count.div_ceil(64) as usize;
        let full = if count >= 64 { u64::MAX } else { (1u64 << count) - 1 };
        let lits = (0..atoms)
            .map(|b| {
                (0..words as u64)
                    .map(|w| {
                        (0..64u64)
                            .filter(|i| (w * 64 + i) < count && ((w * 64 + i) >> b) & 1 == 1)
                            .map(|i| 1u64 << i)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Letters {
            atoms,
            words,
            full,
            lits,
        }
    }

    fn constant(&self, b: bool) -> Vec<u64> {
        vec![if b { self.full } else { 0 }; self.words]
    }

    fn table(&self, r: &Res) -> Vec<u64> {
        match r {
            Res::Const(b) => self.constant(*b),
            Res::Lit { bit, neg } => {
                let t = &self.lits[*bit as usize];
                if *neg {
                    t.iter().map(|w| !w & self.full).collect()
                } else {
                    t.clone()
                }
            }
            Res::And(xs) | Res::Or(xs) => {
                let conj = matches!(r, Res::And(_));
                let mut acc = self.table(&xs[0]);
                for x in &xs[1..] {
                    let t = self.table(x);
                    for (a, b) in acc.iter_mut().zip(&t) {
                        if conj {
                            *a &= b;
                        } else {
                            *a |= b;
                        }
                    }
                }
                acc
            }
        }
    }

    /// The `2^atoms` bits of `set` starting at `base`.
    fn block(&self, set: &[u64], base: u64) -> Vec<u64> {
        if self.words > 1 {
            let w = (base / 64) as usize;
            set[w..w + self.words].to_vec()
        } else {
            vec![(set[(base / 64) as usize] >> (base % 64)) & self.full]
        }
    }
}

fn get(set: &[u64], i: u64) -> bool {
    (set[(i / 64) as usize] >> (i % 64)) & 1 == 1
}

fn put(set: &mut [u64], i: u64) {
    set[(i / 64) as usize] |= 1 << (i % 64);
}

fn bitset(len: u64) -> Vec<u64> {
    vec![0; len.div_ceil(64) as usize]
}

fn ones(set: &[u64]) -> impl Iterator<Item = u64> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            Some(w as u64 * 64 + i)
        })
    })
}

/// A state of the arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum State {
    /// Fewer than `d` letters seen.
    Prefix { len: usize, window: u64 },
    /// `d` letters seen, position 0 not judged yet.
    Fresh(u64),
    /// `d` letters seen after position 0 was judged.
    Started(u64),
    /// An environment condition failed; every continuation wins.
    Won,
}

/// The window arena with the started windows reachable from the initial
/// state.
pub struct SafetyGame {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub depth: usize,
    nx: u32,
    letters: Letters,
    ie: Node,
    is: Node,
    assume: Node,
    guarantee: Node,
    reach: Vec<u64>,
    pub arena_states: usize,
}

/// Moves of a judged state: letters leading to the won sink, and letters
/// leading to another window. The rest lose.
struct Moves {
    won: Vec<u64>,
    cont: Vec<u64>,
}

impl SafetyGame {
    fn n(&self) -> u32 {
        self.letters.atoms
    }

    fn window_space(&self) -> u64 {
        1u64 << (self.n() as usize * self.depth)
    }

    pub fn initial(&self) -> State {
        if self.depth == 0 {
            State::Fresh(0)
        } else {
            State::Prefix { len: 0, window: 0 }
        }
    }

    fn unpack(&self, window: u64, len: usize) -> Vec<u64> {
        let n = self.n() as usize;
        let mask = (1u64 << n) - 1;
        (0..len)
            .map(|k| (window >> (n * (len - 1 - k))) & mask)
            .collect()
    }

    fn judged(&self, window: u64, first: bool) -> Moves {
        let w = self.unpack(window, self.depth);
        let l = &self.letters;
        let mut won = l.constant(false);
        let mut live = l.constant(true);
        let stage = |node: &Node, wins: bool, live: &mut Vec<u64>, won: &mut Vec<u64>| {
            let t = l.table(&residual(node, &w));
            for k in 0..live.len() {
                if wins {
                    won[k] |= live[k] & !t[k];
                }
                live[k] &= t[k];
            }
        };
        if first {
            stage(&self.ie, true, &mut live, &mut won);
            stage(&self.is, false, &mut live, &mut won);
        }
        stage(&self.assume, true, &mut live, &mut won);
        stage(&self.guarantee, false, &mut live, &mut won);
        Moves { won, cont: live }
    }

    /// First started window reached from full window `window`.
    fn next_base(&self, window: u64) -> u64 {
        (window << self.n()) & (self.window_space() - 1)
    }

    /// Bits of `set` (over started windows) for the successors of `window`.
    fn successors_in(&self, set: &[u64], window: u64) -> Vec<u64> {
        if self.depth == 0 {
            self.letters.constant(get(set, 0))
        } else {
            self.letters.block(set, self.next_base(window))
        }
    }

    /// Whether every input letter admits some output letter in `good`.
    fn forall_exists(&self, good: &[u64]) -> bool {
        let nx = self.nx;
        if nx <= 6 {
            let any = good.iter().fold(0, |a, w| a | w);
            (0..1u64 << nx).all(|x| {
                let pattern: u64 = (0..64).filter(|i| i % (1 << nx) == x).map(|i| 1u64 << i).sum();
                any & pattern != 0
            })
        } else {
            (0..1u64 << nx).all(|x| self.least_output(good, x).is_some())
        }
    }

    fn least_output(&self, good: &[u64], x: u64) -> Option<u64> {
        let ny = self.n() - self.nx;
        (0..1u64 << ny).find(|v| get(good, x | (v << self.nx)))
    }
}

const CHECK_EVERY: usize = 256;

fn out_of_time(opts: &SynthOptions) -> bool {
    opts.deadline.is_some_and(|d| Instant::now() >= d)
}

/// Compiles the objective and explores the started windows reachable from
/// the initial state.
pub fn build_game(spec: &ReactiveSpec, opts: &SynthOptions) -> Result<SafetyGame, SynthError> {
    let nx = spec.inputs.len();
    let ny = spec.outputs.len();
    let n = nx + ny;
    let obj = spec.objective();
    let depth = obj.depth;
    let too_large = || SynthError::ArenaTooLarge {
        atoms: n,
        depth,
        budget: opts.budget,
    };
    // every window of length <= d is reachable before anything is judged
    let log_budget = (opts.budget.max(1) as f64).log2();
    if (n * depth) as f64 > log_budget || n * depth > 32 || n > 32 {
        return Err(too_large());
    }
    let prefix_states: usize = (0..=depth).map(|j| 1usize << (n * j)).sum();
    if prefix_states > opts.budget {
        return Err(too_large());
    }

    let mut bits = HashMap::new();
    for (k, x) in spec.inputs.iter().enumerate() {
        bits.insert(x.clone(), k as u32);
    }
    for (k, y) in spec.outputs.iter().enumerate() {
        bits.insert(y.clone(), (n - 1 - k) as u32);
    }
    let mut game = SafetyGame {
        inputs: spec.inputs.clone(),
        outputs: spec.outputs.clone(),
        depth,
        nx: nx as u32,
        letters: Letters::new(n as u32),
        ie: compile(&obj.initially, &bits)?,
        is: compile(&obj.preset, &bits)?,
        assume: compile(&obj.assumption, &bits)?,
        guarantee: compile(&obj.guarantee, &bits)?,
        reach: Vec::new(),
        arena_states: prefix_states,
    };

    let space = game.window_space();
    let mut reach = bitset(space);
    let mut queue = VecDeque::new();
    let visit = |game: &SafetyGame, window: u64, first: bool, reach: &mut Vec<u64>, queue: &mut VecDeque<u64>| {
        let moves = game.judged(window, first);
        let base = if depth == 0 { 0 } else { game.next_base(window) };
        for l in ones(&moves.cont) {
            let t = if depth == 0 { 0 } else { base + l };
            if !get(reach, t) {
                put(reach, t);
                queue.push_back(t);
            }
        }
    };
    for (k, w) in (0..space).enumerate() {
        if k % CHECK_EVERY == 0 && out_of_time(opts) {
            return Err(SynthError::Timeout);
        }
        visit(&game, w, true, &mut reach, &mut queue);
    }
    let mut seen = 0usize;
    while let Some(w) = queue.pop_front() {
        seen += 1;
        if game.arena_states + seen > opts.budget {
            return Err(too_large());
        }
        if seen.is_multiple_of(CHECK_EVERY) && out_of_time(opts) {
            return Err(SynthError::Timeout);
        }
        visit(&game, w, false, &mut reach, &mut queue);
    }
    game.arena_states += seen;
    game.reach = reach;
    Ok(game)
}

/// Winning and losing sets after the fixpoint.
#[derive(Debug)]
pub struct Solution {
    /// Over started windows.
    pub started_losing: Vec<u64>,
    /// Over full windows not yet judged.
    pub fresh_winning: Vec<u64>,
    /// `prefix_winning[j]` over windows of length `j < d`.
    pub prefix_winning: Vec<Vec<u64>>,
    pub iterations: usize,
}

impl Solution {
    pub fn initial_winning(&self) -> bool {
        match self.prefix_winning.first() {
            Some(layer) => get(layer, 0),
            None => get(&self.fresh_winning, 0),
        }
    }
}

impl SafetyGame {
    /// Letters keeping the play winning from a full window.
    fn good_full(&self, sol: &Solution, window: u64, first: bool) -> (Moves, Vec<u64>) {
        let moves = self.judged(window, first);
        let lose = self.successors_in(&sol.started_losing, window);
        let good = moves
            .won
            .iter()
            .zip(&moves.cont)
            .zip(&lose)
            .map(|((w, c), l)| w | (c & !l))
            .collect();
        (moves, good)
    }

    fn good_prefix(&self, sol: &Solution, len: usize, window: u64) -> Vec<u64> {
        let next = if len + 1 < self.depth {
            &sol.prefix_winning[len + 1]
        } else {
            &sol.fresh_winning
        };
        self.letters.block(next, window << self.n())
    }
}

/// Greatest fixpoint of the winning region.
///
/// Each round removes every started window where some input admits no
/// output that either wins outright or moves to a window still considered
/// winning. The unjudged layers are then decided backwards from it.
pub fn solve(game: &SafetyGame, opts: &SynthOptions) -> Result<Solution, SynthError> {
    let space = game.window_space();
    let mut sol = Solution {
        started_losing: bitset(space),
        fresh_winning: bitset(space),
        prefix_winning: (0..game.depth)
            .map(|j| bitset(1u64 << (game.n() as usize * j)))
            .collect(),
        iterations: 0,
    };
    let live: Vec<u64> = ones(&game.reach).collect();
    loop {
        sol.iterations += 1;
        let mut changed = false;
        for (k, &w) in live.iter().enumerate() {
            if k % CHECK_EVERY == 0 && out_of_time(opts) {
                return Err(SynthError::Timeout);
            }
            if get(&sol.started_losing, w) {
                continue;
            }
            let (_, good) = game.good_full(&sol, w, false);
            if !game.forall_exists(&good) {
                put(&mut sol.started_losing, w);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for w in 0..space {
        if (w as usize).is_multiple_of(CHECK_EVERY) && out_of_time(opts) {
            return Err(SynthError::Timeout);
        }
        let (_, good) = game.good_full(&sol, w, true);
        if game.forall_exists(&good) {
            put(&mut sol.fresh_winning, w);
        }
    }
    for len in (0..game.depth).rev() {
        for w in 0..1u64 << (game.n() as usize * len) {
            if game.forall_exists(&game.good_prefix(&sol, len, w)) {
                put(&mut sol.prefix_winning[len], w);
            }
        }
    }
    Ok(sol)
}

/// Reads the output valuation `v` (first output most significant) as a
/// machine output mask (bit `k` is output `k`).
fn output_mask(v: u64, ny: u32) -> u64 {
    (0..ny)
        .filter(|k| v >> (ny - 1 - k) & 1 == 1)
        .map(|k| 1u64 << k)
        .sum()
}

/// The strategy that plays the least winning output letter, restricted to
/// the states it reaches.
pub fn extract(game: &SafetyGame, sol: &Solution) -> MealyMachine {
    let nx = game.nx;
    let ny = game.n() - nx;
    let mask = game.window_space() - 1;
    let init = game.initial();
    let mut ids: HashMap<State, usize> = HashMap::from([(init, 0)]);
    let mut order = vec![init];
    let mut rows: Vec<Vec<Transition>> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let state = order[i];
        let (won, good) = match state {
            State::Prefix { len, window } => (None, game.good_prefix(sol, len, window)),
            State::Fresh(w) | State::Started(w) => {
                let (moves, good) = game.good_full(sol, w, matches!(state, State::Fresh(_)));
                (Some(moves.won), good)
            }
            State::Won => (None, game.letters.constant(true)),
        };
        let mut row = Vec::with_capacity(1 << nx);
        for x in 0..1u64 << nx {
            let (v, next) = if state == State::Won {
                (0, State::Won)
            } else {
                let v = game
                    .least_output(&good, x)
                    .expect("winning states have a move for every input");
                let l = x | (v << nx);
                let next = match state {
                    State::Prefix { len, window } if len + 1 < game.depth => State::Prefix {
                        len: len + 1,
                        window: (window << game.n()) | l,
                    },
                    State::Prefix { window, .. } => State::Fresh((window << game.n()) | l),
                    _ if won.as_ref().is_some_and(|w| get(w, l)) => State::Won,
                    State::Fresh(w) | State::Started(w) => {
                        State::Started(((w << game.n()) | l) & mask)
                    }
                    State::Won => unreachable!(),
                };
                (v, next)
            };
            let id = *ids.entry(next).or_insert_with(|| {
                order.push(next);
                order.len() - 1
            });
            row.push(Transition {
                next: id,
                output: output_mask(v, ny),
            });
        }
        rows.push(row);
        i += 1;
    }
    MealyMachine::new(game.inputs.clone(), game.outputs.clone(), 0, rows)
}
