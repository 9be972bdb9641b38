//! Benchmark families, size metrics and the comparison runner.

mod generators;
mod metrics;
mod runner;

use thiserror::Error;

pub use generators::{
    gen_counter_machine, gen_lift, gen_thermostat, gen_toy_families, generate, near_equal_groups,
    Generated,
};
pub use metrics::{measure, SizeMetrics};
pub use runner::{run_bench, BenchOptions, BenchReport, BenchRow, Check, Outcome, ProjectionRow};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("group count {k} must lie in 1..={} for bound {n}", n + 1)]
    InvalidGroupCount { n: usize, k: usize },
    #[error("unknown benchmark family `{0}`")]
    UnknownFamily(String),
    #[error("{0}")]
    InvalidParameter(String),
}
