//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fail.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{all_traces, pipeline, random_formula, valid_by_enumeration, ATOMS};
use moby::bench::{generate, measure};
use moby::composer::{compose, start_mode, ProjectionManifest};
use moby::frontend::{emit_tlsf, parse_modes, parse_spec};
use moby::ltl::{asf, eval, nnf, nsf, Formula};
use moby::projector::{compute_projections, rm_modes};
use moby::propcheck::is_valid;
use moby::synth::{synthesize, SynthError, SynthOptions, DEFAULT_BUDGET};
use moby::verifier::product_check;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn golden_fidelity() -> Outcome {
    let started = Instant::now();
    let g = generate("cm", &[2, 3]).unwrap();
    let spec = parse_spec(&g.spec).unwrap();
    let modes = parse_modes(&g.modes, &spec).unwrap();
    let projections = compute_projections(&spec, &modes).unwrap();
    let mut differing = Vec::new();
    for p in &projections {
        let stem = format!("{}_{}", p.mode_index + 1, p.mode_name);
        let path = root().join(format!("tests/golden/cm_n2_k3/{stem}.tlsf"));
        let golden = std::fs::read_to_string(path).unwrap_or_default();
        if emit_tlsf(&p.spec, &format!("projection for mode {}", p.mode_name)) != golden {
            differing.push(stem);
        }
    }
    let shown: BTreeSet<String> =
        projections[0].spec.guarantees.iter().map(|f| f.to_string()).collect();
    let missing: Vec<&str> = [
        "!done -> counter_0",
        "!done -> reset -> s_X_counter_0",
        "!done -> start -> s_X_counter_1 || s_X_reset",
        "!done && s_X_counter_0 -> X counter_0",
        "!done -> !trigger",
        "done -> X done",
        "jump_2 -> X done",
        "!jump_2 -> !done -> X !done",
    ]
    .into_iter()
    .filter(|s| !shown.contains(*s))
    .collect();
    let secs = started.elapsed().as_secs_f64();
    check(
        differing.is_empty() && missing.is_empty() && secs < 1.0,
        format!("golden mismatches {differing:?}, missing shapes {missing:?}, {secs:.2} s"),
    )
}

fn corpus() -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for n in [2, 4, 6, 8] {
        for k in 2..=n + 1 {
            let g = generate("cm", &[n, k]).unwrap();
            out.push((g.name, g.spec, g.modes));
        }
    }
    for n in 1..=4 {
        let g = generate("toy_thermostat", &[n]).unwrap();
        out.push((g.name, g.spec, g.modes));
    }
    for n in 1..=3 {
        let g = generate("toy_lift", &[n]).unwrap();
        out.push((g.name, g.spec, g.modes));
    }
    out
}

fn composition_correctness() -> Outcome {
    let started = Instant::now();
    let mut composed = 0;
    let mut failures = Vec::new();
    for (name, spec, modes) in corpus() {
        let p = pipeline(&spec, &modes);
        if p.machines.is_none() {
            continue;
        }
        composed += 1;
        if !product_check(&p.composed(), &p.spec).unwrap().passed() {
            failures.push(name);
        }
    }
    let secs = started.elapsed().as_secs_f64();
    check(
        failures.is_empty() && composed > 0 && secs < 300.0,
        format!("{composed} compositions checked, failing {failures:?}, {secs:.1} s"),
    )
}

fn size_reduction() -> Outcome {
    let g = generate("cm", &[10, 5]).unwrap();
    let spec = parse_spec(&g.spec).unwrap();
    let modes = parse_modes(&g.modes, &spec).unwrap();
    let mono = measure(&spec);
    let projections = compute_projections(&spec, &modes).unwrap();
    let clauses = projections.iter().map(|p| measure(&p.spec).clause_count).max().unwrap();
    let length = projections.iter().map(|p| measure(&p.spec).length).max().unwrap();
    check(
        2 * clauses <= mono.clause_count && 2 * length <= mono.length,
        format!(
            "CM(10) k=5: clauses {clauses}/{} ({:.0}%), length {length}/{} ({:.0}%)",
            mono.clause_count,
            100.0 * clauses as f64 / mono.clause_count as f64,
            mono.length,
            100.0 * length as f64 / mono.length as f64
        ),
    )
}

fn speedup() -> Outcome {
    let limit = Duration::from_secs(60);
    let opts = SynthOptions {
        budget: DEFAULT_BUDGET,
        deadline: None,
    }
    .with_timeout(limit);
    let mono_text = generate("cm", &[10, 1]).unwrap().spec;
    let spec = parse_spec(&mono_text).unwrap();
    let started = Instant::now();
    let mono = synthesize(&spec, &opts);
    let mono_secs = started.elapsed().as_secs_f64();
    let mono_exceeds = matches!(mono, Err(SynthError::Timeout | SynthError::ArenaTooLarge { .. }));
    let mono_label = match &mono {
        Ok(r) if r.is_realizable() => format!("realizable in {mono_secs:.2} s"),
        Ok(_) => format!("unrealizable in {mono_secs:.2} s"),
        Err(e) => format!("{e}"),
    };

    let started = Instant::now();
    let g = generate("cm", &[10, 5]).unwrap();
    let spec = parse_spec(&g.spec).unwrap();
    let modes = parse_modes(&g.modes, &spec).unwrap();
    let projections = compute_projections(&spec, &modes).unwrap();
    let machines: Option<Vec<_>> = projections
        .iter()
        .map(|p| synthesize(&p.spec, &opts).ok().and_then(|r| r.machine().cloned()))
        .collect();
    let verified = machines.is_some_and(|ms| {
        let (start, _) = start_mode(&spec, &modes);
        let manifest = ProjectionManifest::new(&spec, &projections, start);
        let w = compose(&manifest.with_machines(ms)).unwrap();
        product_check(&w, &spec).unwrap().passed()
    });
    let dec_secs = started.elapsed().as_secs_f64();
    check(
        mono_exceeds && verified && dec_secs < limit.as_secs_f64(),
        format!(
            "monolithic CM(10): {mono_label}; decomposed k=5 end to end: {} in {dec_secs:.2} s",
            if verified { "verified" } else { "not verified" }
        ),
    )
}

fn helper_fidelity() -> Outcome {
    let spec = parse_spec(
        "INPUTS { p; q; r; } OUTPUTS { o; } GUARANTEES { G (X p -> (X q && r)); }",
    )
    .unwrap();
    let f = &spec.guarantees[0];
    let a = |n: &str| Formula::atom(n);
    let x = |f: Formula| Formula::next(f);
    let asf_ok = asf(f) == BTreeSet::from([a("r")]);
    let nsf_ok = nsf(f) == BTreeSet::from([x(a("p")), x(a("q"))]);

    let m1 = Formula::and(a("counter_1"), Formula::not(a("counter_2")));
    let phi1 = Formula::implies(Formula::not(a("counter_2")), Formula::not(a("trigger")));
    let phi2 = Formula::implies(
        Formula::and(a("counter_1"), Formula::not(a("reset"))),
        x(Formula::or(a("counter_2"), a("reset"))),
    );
    let rm1 = rm_modes(&phi1, &m1);
    let rm2 = rm_modes(&phi2, &m1);
    let rm_ok = rm1 == Formula::not(a("trigger"))
        && rm2 == Formula::implies(Formula::not(a("reset")), x(Formula::or(a("counter_2"), a("reset"))));
    check(
        asf_ok && nsf_ok && rm_ok,
        format!("asf {:?}, nsf {:?}, rm_modes `{rm1}` and `{rm2}`", asf(f), nsf(f)),
    )
}

fn oracle_agreement() -> Outcome {
    const CASES: usize = 10_000;
    let traces = all_traces(&ATOMS, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f6279);
    let (mut valid, mut disagreements, mut rm_failures) = (0, 0, 0);
    for i in 0..CASES {
        let atoms = rng.gen_range(1..=ATOMS.len());
        let size = rng.gen_range(1..=14);
        let f = random_formula(&mut rng, atoms, 2, size);
        // a share of tautologies, so both answers are exercised
        let f = match i % 4 {
            0 => Formula::or(f.clone(), nnf(&Formula::not(f))),
            1 => {
                let g = random_formula(&mut rng, atoms, 2, 4);
                Formula::implies(Formula::and(f.clone(), g), f)
            }
            _ => f,
        };
        let truth = valid_by_enumeration(&f, &traces);
        valid += usize::from(truth);
        if is_valid(&f) != truth {
            disagreements += 1;
        }
        let mode_size = rng.gen_range(1..=5);
        let mode = random_formula(&mut rng, atoms, 0, mode_size);
        let r = rm_modes(&f, &mode);
        let agrees = traces
            .iter()
            .filter(|t| eval(&mode, t, 0).unwrap())
            .all(|t| eval(&r, t, 0).unwrap() == eval(&f, t, 0).unwrap());
        if !agrees {
            rm_failures += 1;
        }
    }
    check(
        disagreements == 0 && rm_failures == 0,
        format!(
            "{CASES} formulas ({valid} valid): {disagreements} validity disagreements, {rm_failures} rm_modes failures"
        ),
    )
}

fn solver_soundness() -> Outcome {
    let opts = SynthOptions::default();
    let mut realizable = 0;
    let mut unsound = Vec::new();
    for (name, spec_text, modes_text) in corpus() {
        let spec = parse_spec(&spec_text).unwrap();
        let modes = parse_modes(&modes_text, &spec).unwrap();
        let mut specs = vec![(name.clone(), spec.clone())];
        for p in compute_projections(&spec, &modes).unwrap() {
            specs.push((format!("{name}/{}", p.mode_name), p.spec));
        }
        for (label, s) in specs {
            if let Ok(r) = synthesize(&s, &opts) {
                if let Some(m) = r.machine() {
                    realizable += 1;
                    if !product_check(m, &s).unwrap().passed() {
                        unsound.push(label);
                    }
                }
            }
        }
    }
    let mut fixtures: Vec<String> = ["unrealizable.tlsf", "unrealizable_response.tlsf"]
        .iter()
        .map(|f| std::fs::read_to_string(root().join("../../benchmarks").join(f)).unwrap())
        .collect();
    fixtures.push("INPUTS { r; } OUTPUTS { g; } PRESET { g; } GUARANTEES { G (r -> !g); }".into());
    let wrong: Vec<usize> = fixtures
        .iter()
        .enumerate()
        .filter(|(_, t)| synthesize(&parse_spec(t).unwrap(), &opts).unwrap().is_realizable())
        .map(|(i, _)| i)
        .collect();
    check(
        unsound.is_empty() && wrong.is_empty(),
        format!(
            "{realizable} realizable verdicts, failing verification {unsound:?}; {} unrealizable fixtures, misjudged {wrong:?}",
            fixtures.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 7] = [
        ("1 worked-example fidelity", golden_fidelity),
        ("2 composition correctness", composition_correctness),
        ("3 size reduction", size_reduction),
        ("4 speedup phenomenon", speedup),
        ("5 helper-function fidelity", helper_fidelity),
        ("6 oracle agreement", oracle_agreement),
        ("7 solver soundness", solver_soundness),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1} s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.1} s]");
            }
        }
    }
    println!("acceptance: {} of 7 criteria pass", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
