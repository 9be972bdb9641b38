//! Monolithic versus decomposed synthesis on generated cases.

use std::fmt::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::{measure, Generated, SizeMetrics};
use crate::composer::{compose, start_mode, ProjectionManifest};
use crate::frontend::{parse_modes, parse_spec, ReactiveSpec};
use crate::projector::compute_projections;
use crate::synth::{synthesize, MealyMachine, SynthError, SynthOptions, SynthResult};
use crate::verifier::product_check;

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    pub timeout: Duration,
    /// Worker threads for projection synthesis.
    pub jobs: usize,
    pub budget: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            timeout: Duration::from_secs(60),
            jobs: 1,
            budget: SynthOptions::default().budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Realizable,
    Unrealizable,
    Timeout,
    TooLarge,
    Error(String),
}

impl Outcome {
    fn label(&self) -> &str {
        match self {
            Outcome::Realizable => "realizable",
            Outcome::Unrealizable => "unrealizable",
            Outcome::Timeout => "timeout",
            Outcome::TooLarge => "too-large",
            Outcome::Error(_) => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Check {
    Pass,
    Fail,
    /// No composition: some projection was not realizable.
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionRow {
    pub mode: String,
    pub outcome: Outcome,
    pub seconds: f64,
    pub metrics: SizeMetrics,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub case: String,
    pub modes: usize,
    pub mono: Outcome,
    pub mono_seconds: f64,
    pub mono_metrics: SizeMetrics,
    pub projections: Vec<ProjectionRow>,
    /// Projection synthesis times, summed and maximum.
    pub decomposed_sum: f64,
    pub decomposed_max: f64,
    /// Project, synthesize all, compose and verify, wall clock.
    pub decomposed_total: f64,
    pub max_projection_metrics: SizeMetrics,
    pub verification: Check,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

fn outcome(r: &Result<SynthResult, SynthError>) -> Outcome {
    match r {
        Ok(r) if r.is_realizable() => Outcome::Realizable,
        Ok(_) => Outcome::Unrealizable,
        Err(SynthError::Timeout) => Outcome::Timeout,
        Err(SynthError::ArenaTooLarge { .. }) => Outcome::TooLarge,
        Err(e) => Outcome::Error(e.to_string()),
    }
}

fn synth_opts(opts: &BenchOptions) -> SynthOptions {
    SynthOptions {
        budget: opts.budget,
        deadline: None,
    }
    .with_timeout(opts.timeout)
}

fn error_row(case: &str, e: impl std::fmt::Display) -> BenchRow {
    BenchRow {
        case: case.to_string(),
        modes: 0,
        mono: Outcome::Error(e.to_string()),
        mono_seconds: 0.0,
        mono_metrics: SizeMetrics::default(),
        projections: Vec::new(),
        decomposed_sum: 0.0,
        decomposed_max: 0.0,
        decomposed_total: 0.0,
        max_projection_metrics: SizeMetrics::default(),
        verification: Check::Skipped,
    }
}

/// Runs every case; failures become report rows.
pub fn run_bench(cases: &[Generated], opts: &BenchOptions) -> BenchReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .expect("thread pool");
    let rows = cases.iter().map(|c| run_case(c, opts, &pool)).collect();
    BenchReport { rows }
}

fn run_case(case: &Generated, opts: &BenchOptions, pool: &rayon::ThreadPool) -> BenchRow {
    let spec = match parse_spec(&case.spec) {
        Ok(s) => s,
        Err(e) => return error_row(&case.name, e),
    };
    let modes = match parse_modes(&case.modes, &spec) {
        Ok(m) => m,
        Err(e) => return error_row(&case.name, e),
    };
    log::info!("{}: monolithic", case.name);
    let mono = synthesize(&spec, &synth_opts(opts));
    let mono_seconds = match &mono {
        Ok(r) => r.stats.seconds,
        Err(_) => opts.timeout.as_secs_f64(),
    };

    log::info!("{}: decomposed", case.name);
    let started = Instant::now();
    let projections = match compute_projections(&spec, &modes) {
        Ok(p) => p,
        Err(e) => {
            let mut row = error_row(&case.name, e);
            row.mono = outcome(&mono);
            return row;
        }
    };
    let results: Vec<(Result<SynthResult, SynthError>, f64)> = pool.install(|| {
        projections
            .par_iter()
            .map(|p| {
                let t = Instant::now();
                let r = synthesize(&p.spec, &synth_opts(opts));
                (r, t.elapsed().as_secs_f64())
            })
            .collect()
    });
    let machines: Option<Vec<MealyMachine>> = results
        .iter()
        .map(|(r, _)| r.as_ref().ok().and_then(|r| r.machine().cloned()))
        .collect();
    let verification = match machines {
        Some(ms) => verify_composition(&spec, &modes, &projections, ms),
        None => Check::Skipped,
    };
    let decomposed_total = started.elapsed().as_secs_f64();

    let rows: Vec<ProjectionRow> = projections
        .iter()
        .zip(&results)
        .map(|(p, (r, secs))| ProjectionRow {
            mode: p.mode_name.clone(),
            outcome: outcome(r),
            seconds: *secs,
            metrics: measure(&p.spec),
        })
        .collect();
    let max_projection_metrics = SizeMetrics {
        clause_count: rows.iter().map(|r| r.metrics.clause_count).max().unwrap_or(0),
        length: rows.iter().map(|r| r.metrics.length).max().unwrap_or(0),
    };
    BenchRow {
        case: case.name.clone(),
        modes: projections.len(),
        mono: outcome(&mono),
        mono_seconds,
        mono_metrics: measure(&spec),
        decomposed_sum: rows.iter().map(|r| r.seconds).sum(),
        decomposed_max: rows.iter().map(|r| r.seconds).fold(0.0, f64::max),
        decomposed_total,
        projections: rows,
        max_projection_metrics,
        verification,
    }
}

fn verify_composition(
    spec: &ReactiveSpec,
    modes: &crate::frontend::ModeDecomposition,
    projections: &[crate::projector::Projection],
    machines: Vec<MealyMachine>,
) -> Check {
    let (start, _) = start_mode(spec, modes);
    let manifest = ProjectionManifest::new(spec, projections, start);
    match compose(&manifest.with_machines(machines)).map(|m| product_check(&m, spec)) {
        Ok(Ok(v)) if v.passed() => Check::Pass,
        _ => Check::Fail,
    }
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "case,modes,mono,mono_s,mono_clauses,mono_length,decomposed,sum_s,max_s,total_s,max_clauses,max_length,verification\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.3},{},{},{},{:.3},{:.3},{:.3},{},{},{:?}",
                r.case,
                r.modes,
                r.mono.label(),
                r.mono_seconds,
                r.mono_metrics.clause_count,
                r.mono_metrics.length,
                r.decomposed_label(),
                r.decomposed_sum,
                r.decomposed_max,
                r.decomposed_total,
                r.max_projection_metrics.clause_count,
                r.max_projection_metrics.length,
                r.verification,
            );
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from(
            "| case | modes | monolithic | time (s) | clauses | length | decomposed | sum (s) | max (s) | end to end (s) | max clauses | max length | verified |\n|---|---|---|---|---|---|---|---|---|---|---|---|---|\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:.3} | {} | {} | {} | {:.3} | {:.3} | {:.3} | {} | {} | {:?} |",
                r.case,
                r.modes,
                r.mono.label(),
                r.mono_seconds,
                r.mono_metrics.clause_count,
                r.mono_metrics.length,
                r.decomposed_label(),
                r.decomposed_sum,
                r.decomposed_max,
                r.decomposed_total,
                r.max_projection_metrics.clause_count,
                r.max_projection_metrics.length,
                r.verification,
            );
        }
        out
    }
}

impl BenchRow {
    /// The worst projection outcome.
    pub fn decomposed_label(&self) -> &str {
        self.projections
            .iter()
            .find(|p| p.outcome != Outcome::Realizable)
            .map_or(if self.projections.is_empty() { "none" } else { "realizable" }, |p| {
                p.outcome.label()
            })
    }
}
