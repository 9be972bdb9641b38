use std::path::PathBuf;
use std::time::Duration;

use moby::bench::{
    gen_counter_machine, gen_toy_families, generate, measure, near_equal_groups, run_bench,
    BenchError, BenchOptions, Check, Generated, Outcome,
};
use moby::frontend::{parse_modes, parse_spec};
use moby::projector::{check_legality_in, compute_projections, legality_context};

fn benchmarks() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks")
}

fn quick() -> BenchOptions {
    BenchOptions {
        timeout: Duration::from_secs(60),
        ..BenchOptions::default()
    }
}

#[test]
fn generators_are_deterministic_and_match_the_fixtures() {
    for (family, params) in [
        ("cm", vec![2, 3]),
        ("cm", vec![10, 5]),
        ("toy_thermostat", vec![4]),
        ("toy_lift", vec![3]),
    ] {
        let a = generate(family, &params).unwrap();
        assert_eq!(a, generate(family, &params).unwrap());
        let spec = std::fs::read_to_string(benchmarks().join(format!("{}.tlsf", a.name))).unwrap();
        let modes = std::fs::read_to_string(benchmarks().join(format!("{}.modes", a.name))).unwrap();
        assert_eq!((a.spec, a.modes), (spec, modes), "{family} {params:?}");
    }
}

#[test]
fn bad_parameters_are_rejected() {
    assert_eq!(
        gen_counter_machine(2, 5),
        Err(BenchError::InvalidGroupCount { n: 2, k: 5 })
    );
    assert_eq!(
        gen_counter_machine(2, 0),
        Err(BenchError::InvalidGroupCount { n: 2, k: 0 })
    );
    assert_eq!(
        gen_toy_families("cruise", 1),
        Err(BenchError::UnknownFamily("cruise".into()))
    );
    assert!(matches!(generate("cm", &[3]), Err(BenchError::InvalidParameter(_))));
}

#[test]
fn groups_are_near_equal_and_consecutive() {
    assert_eq!(near_equal_groups(11, 5), vec![
        vec![0, 1, 2],
        vec![3, 4],
        vec![5, 6],
        vec![7, 8],
        vec![9, 10],
    ]);
    for n in 1..12 {
        for k in 1..=n {
            let g = near_equal_groups(n, k);
            let flat: Vec<usize> = g.iter().flatten().copied().collect();
            assert_eq!(flat, (0..n).collect::<Vec<_>>());
            let sizes: Vec<usize> = g.iter().map(Vec::len).collect();
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
    }
}

#[test]
fn generated_modes_are_legal() {
    let mut cases = Vec::new();
    for n in [2, 4, 6, 8, 10] {
        for k in 1..=n + 1 {
            cases.push(generate("cm", &[n, k]).unwrap());
        }
    }
    for n in 1..=4 {
        cases.push(generate("toy_thermostat", &[n]).unwrap());
    }
    for n in 1..=3 {
        cases.push(generate("toy_lift", &[n]).unwrap());
    }
    for g in cases {
        let spec = parse_spec(&g.spec).unwrap();
        let modes = parse_modes(&g.modes, &spec).unwrap();
        assert!(
            check_legality_in(&modes, &legality_context(&spec)).is_legal(),
            "{}",
            g.name
        );
    }
}

fn max_metrics(n: usize, k: usize) -> (usize, usize) {
    let g = generate("cm", &[n, k]).unwrap();
    let spec = parse_spec(&g.spec).unwrap();
    let modes = parse_modes(&g.modes, &spec).unwrap();
    let ms: Vec<_> = compute_projections(&spec, &modes)
        .unwrap()
        .iter()
        .map(|p| measure(&p.spec))
        .collect();
    (
        ms.iter().map(|m| m.clause_count).max().unwrap(),
        ms.iter().map(|m| m.length).max().unwrap(),
    )
}

fn max_clauses(n: usize, k: usize) -> usize {
    max_metrics(n, k).0
}

#[test]
fn more_modes_give_smaller_projections() {
    for n in [4, 6, 8, 10] {
        let lengths: Vec<usize> = (2..=n + 1).map(|k| max_metrics(n, k).1).collect();
        assert!(lengths.windows(2).all(|w| w[1] <= w[0]), "CM({n}): {lengths:?}");
        assert!(max_clauses(n, n + 1) < max_clauses(n, 2), "CM({n})");
    }
}

#[test]
fn projection_clause_count_strictly_decreases_with_more_modes() {
    for n in [4, 6, 8, 10] {
        let counts: Vec<usize> = (2..=n + 1).map(|k| max_clauses(n, k)).collect();
        assert!(counts.windows(2).all(|w| w[1] < w[0]), "CM({n}): {counts:?}");
    }
}

#[test]
fn empty_case_list_gives_an_empty_report() {
    let report = run_bench(&[], &quick());
    assert!(report.rows.is_empty());
    assert_eq!(report.to_csv().lines().count(), 1);
    assert_eq!(report.to_markdown().lines().count(), 2);
}

#[test]
fn unrealizable_projection_skips_composition() {
    let case = Generated {
        name: "clairvoyant".into(),
        spec: "INPUTS { r; } OUTPUTS { g; } GUARANTEES { G (g <-> X r); }".into(),
        modes: "MODE all { pred = true; init = true; }".into(),
    };
    let report = run_bench(&[case], &quick());
    let row = &report.rows[0];
    assert_eq!(row.mono, Outcome::Unrealizable);
    assert_eq!(row.projections[0].outcome, Outcome::Unrealizable);
    assert_eq!(row.verification, Check::Skipped);
    assert_eq!(row.decomposed_label(), "unrealizable");
}

#[test]
fn malformed_cases_become_error_rows() {
    let case = Generated {
        name: "broken".into(),
        spec: "INPUTS { r; ".into(),
        modes: String::new(),
    };
    let report = run_bench(&[case], &quick());
    assert!(matches!(report.rows[0].mono, Outcome::Error(_)));
    assert!(report.to_csv().contains("broken,0,error"));
}

#[test]
fn reports_have_one_line_per_case() {
    let cases = vec![generate("cm", &[2, 3]).unwrap(), generate("toy_lift", &[1]).unwrap()];
    let report = run_bench(&cases, &quick());
    for row in &report.rows {
        assert_eq!(row.mono, Outcome::Realizable);
        assert_eq!(row.verification, Check::Pass);
        assert_eq!(row.modes, row.projections.len());
    }
    let csv = report.to_csv();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().starts_with("cm_n2_k3,3,realizable,"));
    assert_eq!(report.to_markdown().lines().count(), 4);
}

#[test]
fn decomposition_beats_monolithic_for_some_mode_count() {
    // decomposed time is the slowest projection, all running in parallel
    let cases: Vec<Generated> = [2, 4, 8]
        .into_iter()
        .map(|k| generate("cm", &[8, k]).unwrap())
        .collect();
    let report = run_bench(&cases, &quick());
    let summary: Vec<(f64, f64)> = report
        .rows
        .iter()
        .map(|r| (r.mono_seconds, r.decomposed_max))
        .collect();
    assert!(report.rows.iter().all(|r| r.verification == Check::Pass));
    assert!(
        summary.iter().any(|(mono, dec)| dec < mono),
        "(monolithic, decomposed) seconds: {summary:?}"
    );
}
