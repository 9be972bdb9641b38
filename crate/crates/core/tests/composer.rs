mod common;

use std::collections::BTreeSet;

use common::pipeline;
use moby::bench::generate;
use moby::composer::{
    compose, erase_fresh, start_mode, ComposeError, CompositionManifest, ProjectionManifest,
};
use moby::synth::{MealyMachine, Transition};
use moby::verifier::{product_check, simulate};

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// One state over input `r`; every move emits `outputs[k]` for set bit `k`.
fn constant(outputs: &[&str], mask: u64) -> MealyMachine {
    let t = Transition { next: 0, output: mask };
    MealyMachine::new(
        vec!["r".into()],
        outputs.iter().map(|s| s.to_string()).collect(),
        0,
        vec![vec![t, t]],
    )
}

fn two_modes(first: MealyMachine) -> CompositionManifest {
    CompositionManifest {
        machines: vec![first, constant(&["g", "done"], 0b00)],
        start: 0,
        jumps: vec![vec![(1, "jump_2".into())], vec![]],
        fresh: set(&["jump_2", "done"]),
        outputs: vec!["g".into()],
    }
}

#[test]
fn erase_fresh_removes_only_fresh_atoms() {
    let fresh = set(&["done", "jump_2", "s_X_p"]);
    assert_eq!(erase_fresh(&set(&["g", "done", "s_X_p"]), &fresh), set(&["g"]));
    assert_eq!(erase_fresh(&set(&[]), &fresh), set(&[]));
    assert_eq!(erase_fresh(&set(&["g"]), &set(&[])), set(&["g"]));
}

#[test]
fn jump_moves_to_the_target_initial_state() {
    // mode 1 emits g and jumps at once; mode 2 emits nothing forever
    let composed = compose(&two_modes(constant(&["g", "jump_2", "done"], 0b011))).unwrap();
    assert_eq!(composed.outputs, vec!["g".to_string()]);
    assert_eq!(composed.num_states(), 2);
    let t = simulate(&composed, &[set(&[]), set(&["r"]), set(&[])]);
    assert_eq!(t.letters, vec![set(&["g"]), set(&["r"]), set(&[])]);
}

#[test]
fn without_a_jump_the_start_mode_stays() {
    let composed = compose(&two_modes(constant(&["g", "jump_2", "done"], 0b001))).unwrap();
    assert_eq!(composed.num_states(), 1);
    let t = simulate(&composed, &[set(&[]), set(&["r"])]);
    assert_eq!(t.letters, vec![set(&["g"]), set(&["g", "r"])]);
}

#[test]
fn single_mode_composes_to_itself() {
    let m = CompositionManifest {
        machines: vec![constant(&["g", "done"], 0b01)],
        start: 0,
        jumps: vec![vec![]],
        fresh: set(&["done"]),
        outputs: vec!["g".into()],
    };
    let composed = compose(&m).unwrap();
    assert_eq!(composed.num_states(), 1);
    assert_eq!(composed.step(0, 1).output, 1);
}

#[test]
fn two_jumps_at_once_are_rejected() {
    let m = CompositionManifest {
        machines: vec![
            constant(&["jump_2", "jump_3"], 0b11),
            constant(&[], 0),
            constant(&[], 0),
        ],
        start: 0,
        jumps: vec![vec![(1, "jump_2".into()), (2, "jump_3".into())], vec![], vec![]],
        fresh: set(&["jump_2", "jump_3"]),
        outputs: vec![],
    };
    assert!(matches!(
        compose(&m),
        Err(ComposeError::MultipleJumps { mode: 0, state: 0, .. })
    ));
}

#[test]
fn unknown_targets_and_missing_atoms_are_rejected() {
    let mut m = two_modes(constant(&["g", "jump_2", "done"], 0));
    m.jumps[0] = vec![(7, "jump_2".into())];
    assert!(matches!(
        compose(&m),
        Err(ComposeError::UnknownTargetMode { mode: 0, target: 7 })
    ));
    let m = two_modes(constant(&["g", "done"], 0));
    assert!(matches!(compose(&m), Err(ComposeError::MissingAtom { mode: 0, .. })));
    let empty = CompositionManifest {
        machines: vec![],
        start: 0,
        jumps: vec![],
        fresh: set(&[]),
        outputs: vec![],
    };
    assert!(matches!(compose(&empty), Err(ComposeError::Empty)));
}

#[test]
fn manifest_round_trips_through_a_directory() {
    let g = generate("cm", &[2, 3]).unwrap();
    let p = pipeline(&g.spec, &g.modes);
    let (start, warning) = start_mode(&p.spec, &p.modes);
    assert_eq!((start, warning), (0, None));
    let manifest = ProjectionManifest::new(&p.spec, &p.projections, start);
    let dir = tempfile::tempdir().unwrap();
    manifest.save(dir.path()).unwrap();
    let back = ProjectionManifest::load(dir.path()).unwrap();
    assert_eq!(back, manifest);
    assert!(matches!(
        back.composition(dir.path()),
        Err(ComposeError::MissingMachine(name)) if name == "m1"
    ));
    for (e, w) in back.modes.iter().zip(p.machines.as_ref().unwrap()) {
        std::fs::write(dir.path().join(&e.machine_file), w.to_json()).unwrap();
    }
    let composed = compose(&back.composition(dir.path()).unwrap()).unwrap();
    assert_eq!(composed, p.composed());
    assert!(product_check(&composed, &p.spec).unwrap().passed());
}

#[test]
fn foreign_manifest_schema_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("manifest.json"),
        r#"{"schema":"other/9","inputs":[],"outputs":[],"start":0,"modes":[]}"#,
    )
    .unwrap();
    assert!(matches!(
        ProjectionManifest::load(dir.path()),
        Err(ComposeError::Schema(s)) if s == "other/9"
    ));
}
