//! Realizability checking and controller extraction by an explicit safety
//! game over windows of letters.

mod game;
mod mealy;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::frontend::ReactiveSpec;

pub use game::{build_game, extract, solve, SafetyGame, Solution, State};
pub use mealy::{MachineError, MealyMachine, Transition, MACHINE_SCHEMA};

pub const DEFAULT_BUDGET: usize = 1 << 24;
pub const BUDGET_ENV: &str = "MOBY_ARENA_BUDGET";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("arena too large: {atoms} atoms at depth {depth} exceed the budget of {budget} states")]
    ArenaTooLarge {
        atoms: usize,
        depth: usize,
        budget: usize,
    },
    #[error("synthesis timed out")]
    Timeout,
    #[error("atom `{0}` is not declared as an input or output")]
    UnknownAtom(String),
}

#[derive(Debug, Clone, Copy)]
pub struct SynthOptions {
    /// Maximum number of arena states.
    pub budget: usize,
    pub deadline: Option<Instant>,
}

impl Default for SynthOptions {
    /// Budget from `MOBY_ARENA_BUDGET` when set, else 2^24; no deadline.
    fn default() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        SynthOptions {
            budget,
            deadline: None,
        }
    }
}

impl SynthOptions {
    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, PartialEq)]
pub struct SynthStats {
    pub arena_states: usize,
    pub iterations: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Realizable(MealyMachine),
    Unrealizable,
}

#[derive(Debug, Clone)]
pub struct SynthResult {
    pub verdict: Verdict,
    pub stats: SynthStats,
}

impl SynthResult {
    pub fn is_realizable(&self) -> bool {
        matches!(self.verdict, Verdict::Realizable(_))
    }

    pub fn machine(&self) -> Option<&MealyMachine> {
        match &self.verdict {
            Verdict::Realizable(m) => Some(m),
            Verdict::Unrealizable => None,
        }
    }
}

pub fn synthesize(spec: &ReactiveSpec, opts: &SynthOptions) -> Result<SynthResult, SynthError> {
    let start = Instant::now();
    let game = build_game(spec, opts)?;
    let sol = solve(&game, opts)?;
    let verdict = if sol.initial_winning() {
        Verdict::Realizable(extract(&game, &sol))
    } else {
        Verdict::Unrealizable
    };
    log::debug!(
        "synthesis: {} states, {} rounds",
        game.arena_states,
        sol.iterations
    );
    Ok(SynthResult {
        verdict,
        stats: SynthStats {
            arena_states: game.arena_states,
            iterations: sol.iterations,
            seconds: start.elapsed().as_secs_f64(),
        },
    })
}
