//! Command-line entry point.
//!
//! Exit codes: 0 success, realizable or pass; 1 unrealizable, illegal or
//! failed verification; 2 usage or input errors.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::bench::{generate, run_bench, BenchOptions, Check, Generated};
use crate::composer::{compose, projection_stem, start_mode, ProjectionManifest};
use crate::frontend::{emit_tlsf, parse_modes, parse_spec_with, ModeDecomposition, ReactiveSpec};
use crate::projector::{check_legality, check_legality_in, compute_projections, legality_context, Legality};
use crate::synth::{synthesize, MealyMachine, SynthOptions, SynthResult, Verdict};
use crate::verifier::{product_check, Verification};

#[derive(Debug, Parser)]
#[command(name = "moby", version, about = "Mode-based decomposition for safety LTL synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a specification and its modes and check mode legality.
    Check {
        /// Specification in TLSF.
        spec: PathBuf,
        /// Mode decomposition.
        modes: PathBuf,
        /// Override a specification parameter, e.g. `-D N=4`.
        #[arg(short = 'D', value_parser = parse_param)]
        param: Vec<(String, i64)>,
    },
    /// Write one TLSF projection per mode and a manifest into a directory.
    Project {
        /// Specification in TLSF.
        spec: PathBuf,
        /// Mode decomposition.
        modes: PathBuf,
        /// Output directory.
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Also synthesize every projection and write its machine.
        #[arg(long)]
        synth: bool,
        /// Parallel synthesis workers.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Per-projection timeout in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Override a specification parameter.
        #[arg(short = 'D', value_parser = parse_param)]
        param: Vec<(String, i64)>,
    },
    /// Decide realizability and optionally write the controller.
    Synth {
        /// Specification or projection in TLSF.
        spec: PathBuf,
        /// Where to write the machine as JSON.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Timeout in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Override a specification parameter.
        #[arg(short = 'D', value_parser = parse_param)]
        param: Vec<(String, i64)>,
    },
    /// Compose the machines of a projection directory.
    Compose {
        /// Directory written by `project`, with every machine present.
        dir: PathBuf,
        /// Where to write the composed machine.
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Check a machine against a specification by exhaustive exploration.
    Verify {
        /// Machine in JSON.
        machine: PathBuf,
        /// Specification in TLSF.
        spec: PathBuf,
        /// Override a specification parameter.
        #[arg(short = 'D', value_parser = parse_param)]
        param: Vec<(String, i64)>,
    },
    /// Compare monolithic and decomposed synthesis on a generated family.
    ///
    /// `cm N k1 k2 ...` runs CM(N) with each group count; toy families take
    /// a list of sizes.
    Bench {
        /// `cm`, `toy_thermostat` or `toy_lift`.
        family: String,
        params: Vec<usize>,
        /// Per-synthesis timeout in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Parallel projection workers.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the report as a Markdown table.
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
    /// Render a machine as Graphviz.
    ExportDot {
        /// Machine in JSON.
        machine: PathBuf,
        /// Output file; stdout if absent.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Emit a generated specification and modes file.
    Gen {
        /// `cm`, `toy_thermostat` or `toy_lift`.
        family: String,
        /// `N k` for `cm`, `n` for the toy families.
        params: Vec<usize>,
        /// Directory for `<name>.tlsf` and `<name>.modes`; stdout if absent.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value = value
        .trim()
        .parse()
        .map_err(|_| format!("`{value}` is not an integer"))?;
    Ok((name.trim().to_string(), value))
}

/// A failed command and its exit code.
#[derive(Debug)]
pub enum Exit {
    /// Negative outcome (exit 1).
    Fail(String),
    /// Bad usage or input (exit 2).
    Input(String),
}

impl Exit {
    pub fn code(&self) -> i32 {
        match self {
            Exit::Fail(_) => 1,
            Exit::Input(_) => 2,
        }
    }
}

type CmdResult = Result<(), Exit>;

fn input<E: std::fmt::Display>(context: &Path) -> impl FnOnce(E) -> Exit + '_ {
    move |e| Exit::Input(format!("{}: {e}", context.display()))
}

fn read(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(input(path))
}

fn write(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(input(path))
}

fn load_spec(path: &Path, params: &[(String, i64)]) -> Result<ReactiveSpec, Exit> {
    parse_spec_with(&read(path)?, params).map_err(input(path))
}

fn load_modes(path: &Path, spec: &ReactiveSpec) -> Result<ModeDecomposition, Exit> {
    parse_modes(&read(path)?, spec).map_err(input(path))
}

fn load_machine(path: &Path) -> Result<MealyMachine, Exit> {
    MealyMachine::from_json(&read(path)?).map_err(input(path))
}

fn synth_options(timeout: Option<f64>) -> SynthOptions {
    let opts = SynthOptions::default();
    match timeout {
        Some(s) => opts.with_timeout(Duration::from_secs_f64(s)),
        None => opts,
    }
}

fn describe(legality: &Legality, modes: &ModeDecomposition) -> String {
    let name = |i: usize| modes.modes[i].name.as_str();
    match legality {
        Legality::Legal => "legal".to_string(),
        Legality::Overlap {
            first,
            second,
            witness,
        } => format!(
            "modes `{}` and `{}` overlap, e.g. at {}",
            name(*first),
            name(*second),
            valuation(witness)
        ),
        Legality::Incomplete { witness } => {
            format!("no mode covers {}", valuation(witness))
        }
    }
}

fn valuation(v: &crate::projector::Valuation) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|(a, b)| if *b { a.clone() } else { format!("!{a}") })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Legality over all valuations, or else over those allowed by the
/// invariant guarantees (with a warning).
fn legality(spec: &ReactiveSpec, modes: &ModeDecomposition) -> CmdResult {
    let plain = check_legality(modes);
    if plain.is_legal() {
        return Ok(());
    }
    let within = check_legality_in(modes, &legality_context(spec));
    if within.is_legal() {
        eprintln!(
            "warning: {} in general, but legal under the invariant guarantees",
            describe(&plain, modes)
        );
        return Ok(());
    }
    Err(Exit::Fail(format!("illegal modes: {}", describe(&within, modes))))
}

fn report(r: &SynthResult) {
    let verdict = if r.is_realizable() { "realizable" } else { "unrealizable" };
    println!(
        "{verdict} ({} arena states, {} rounds, {:.3} s)",
        r.stats.arena_states, r.stats.iterations, r.stats.seconds
    );
}

fn cmd_check(spec: &Path, modes: &Path, params: &[(String, i64)]) -> CmdResult {
    let s = load_spec(spec, params)?;
    let m = load_modes(modes, &s)?;
    legality(&s, &m)?;
    println!(
        "ok: {} inputs, {} outputs, {} guarantees, {} modes",
        s.inputs.len(),
        s.outputs.len(),
        s.guarantees.len(),
        m.modes.len()
    );
    Ok(())
}

fn cmd_project(
    spec: &Path,
    modes: &Path,
    out: &Path,
    synth: bool,
    jobs: usize,
    timeout: Option<f64>,
    params: &[(String, i64)],
) -> CmdResult {
    let s = load_spec(spec, params)?;
    let m = load_modes(modes, &s)?;
    legality(&s, &m)?;
    let projections = compute_projections(&s, &m).map_err(|e| Exit::Fail(e.to_string()))?;
    let (start, warning) = start_mode(&s, &m);
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    std::fs::create_dir_all(out).map_err(input(out))?;
    let manifest = ProjectionManifest::new(&s, &projections, start);
    for p in &projections {
        let title = format!("projection for mode {}", p.mode_name);
        write(&out.join(format!("{}.tlsf", projection_stem(p))), &emit_tlsf(&p.spec, &title))?;
    }
    manifest.save(out).map_err(|e| Exit::Input(e.to_string()))?;
    println!("{} projections written to {}", projections.len(), out.display());
    if !synth {
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Exit::Input(e.to_string()))?;
    let opts = synth_options(timeout);
    let results: Vec<_> = pool.install(|| {
        projections
            .par_iter()
            .map(|p| synthesize(&p.spec, &opts))
            .collect()
    });
    let mut failed = Vec::new();
    for ((p, r), entry) in projections.iter().zip(results).zip(&manifest.modes) {
        print!("{}: ", p.mode_name);
        match r {
            Ok(r) => {
                report(&r);
                match &r.verdict {
                    Verdict::Realizable(w) => write(&out.join(&entry.machine_file), &w.to_json())?,
                    Verdict::Unrealizable => failed.push(p.mode_name.clone()),
                }
            }
            Err(e) => {
                println!("{e}");
                failed.push(p.mode_name.clone());
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Exit::Fail(format!("no controller for mode(s) {}", failed.join(", "))))
    }
}

fn cmd_synth(spec: &Path, out: Option<&Path>, timeout: Option<f64>, params: &[(String, i64)]) -> CmdResult {
    let s = load_spec(spec, params)?;
    let r = synthesize(&s, &synth_options(timeout)).map_err(|e| Exit::Fail(e.to_string()))?;
    report(&r);
    match (&r.verdict, out) {
        (Verdict::Realizable(w), Some(path)) => write(path, &w.to_json()),
        (Verdict::Realizable(_), None) => Ok(()),
        (Verdict::Unrealizable, _) => Err(Exit::Fail("unrealizable".to_string())),
    }
}

fn cmd_compose(dir: &Path, out: &Path) -> CmdResult {
    let manifest = ProjectionManifest::load(dir).map_err(|e| Exit::Input(e.to_string()))?;
    let parts = manifest
        .composition(dir)
        .map_err(|e| Exit::Input(e.to_string()))?;
    let w = compose(&parts).map_err(|e| Exit::Fail(e.to_string()))?;
    write(out, &w.to_json())?;
    println!("composed machine with {} states written to {}", w.num_states(), out.display());
    Ok(())
}

fn cmd_verify(machine: &Path, spec: &Path, params: &[(String, i64)]) -> CmdResult {
    let w = load_machine(machine)?;
    let s = load_spec(spec, params)?;
    match product_check(&w, &s).map_err(|e| Exit::Input(e.to_string()))? {
        Verification::Pass { configurations } => {
            println!("pass ({configurations} configurations)");
            Ok(())
        }
        Verification::Fail(cex) => {
            println!("fail");
            println!(
                "{}",
                serde_json::to_string_pretty(&cex).expect("counterexamples serialize")
            );
            Err(Exit::Fail("verification failed".to_string()))
        }
    }
}

fn bench_cases(family: &str, params: &[usize]) -> Result<Vec<Generated>, Exit> {
    let bad = |e: crate::bench::BenchError| Exit::Input(e.to_string());
    match family {
        "cm" | "counter_machine" => match params {
            [n] => Ok(vec![generate(family, &[*n, 1]).map_err(bad)?]),
            [n, ks @ ..] => ks.iter().map(|k| generate(family, &[*n, *k]).map_err(bad)).collect(),
            [] => Err(Exit::Input("cm needs a bound and group counts".into())),
        },
        _ if params.is_empty() => Err(Exit::Input(format!("{family} needs at least one size"))),
        _ => params.iter().map(|n| generate(family, &[*n]).map_err(bad)).collect(),
    }
}

fn cmd_bench(
    family: &str,
    params: &[usize],
    timeout: f64,
    jobs: usize,
    csv: Option<&Path>,
    markdown: Option<&Path>,
) -> CmdResult {
    let cases = bench_cases(family, params)?;
    let opts = BenchOptions {
        timeout: Duration::from_secs_f64(timeout),
        jobs,
        ..BenchOptions::default()
    };
    let report = run_bench(&cases, &opts);
    let table = report.to_markdown();
    print!("{table}");
    if let Some(path) = csv {
        write(path, &report.to_csv())?;
    }
    if let Some(path) = markdown {
        write(path, &table)?;
    }
    if report.rows.iter().any(|r| r.verification == Check::Fail) {
        return Err(Exit::Fail("a composed controller failed verification".into()));
    }
    Ok(())
}

fn cmd_export_dot(machine: &Path, out: Option<&Path>) -> CmdResult {
    let dot = load_machine(machine)?.to_dot();
    match out {
        Some(path) => write(path, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn cmd_gen(family: &str, params: &[usize], out: Option<&Path>) -> CmdResult {
    let g = generate(family, params).map_err(|e| Exit::Input(e.to_string()))?;
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(input(dir))?;
            write(&dir.join(format!("{}.tlsf", g.name)), &g.spec)?;
            write(&dir.join(format!("{}.modes", g.name)), &g.modes)?;
            println!("{}", g.name);
        }
        None => {
            print!("{}", g.spec);
            println!("// ---- modes ----");
            print!("{}", g.modes);
        }
    }
    Ok(())
}

pub fn execute(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Check { spec, modes, param } => cmd_check(&spec, &modes, &param),
        Command::Project {
            spec,
            modes,
            out,
            synth,
            jobs,
            timeout,
            param,
        } => cmd_project(&spec, &modes, &out, synth, jobs, timeout, &param),
        Command::Synth {
            spec,
            out,
            timeout,
            param,
        } => cmd_synth(&spec, out.as_deref(), timeout, &param),
        Command::Compose { dir, out } => cmd_compose(&dir, &out),
        Command::Verify {
            machine,
            spec,
            param,
        } => cmd_verify(&machine, &spec, &param),
        Command::Bench {
            family,
            params,
            timeout,
            jobs,
            csv,
            markdown,
        } => cmd_bench(&family, &params, timeout, jobs, csv.as_deref(), markdown.as_deref()),
        Command::ExportDot { machine, out } => cmd_export_dot(&machine, out.as_deref()),
        Command::Gen {
            family,
            params,
            out,
        } => cmd_gen(&family, &params, out.as_deref()),
    }
}

/// Parses `args` (including the program name) and runs the command;
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                Exit::Fail(m) | Exit::Input(m) => eprintln!("error: {m}"),
            }
            e.code()
        }
    }
}
