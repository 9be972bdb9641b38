//! Parametric specification families, emitted as TLSF and modes text.

use std::fmt::Write;

use super::BenchError;

/// A generated specification together with its mode decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub name: String,
    pub spec: String,
    pub modes: String,
}

/// Splits `0..n` into `k` consecutive groups whose sizes differ by at most one.
pub fn near_equal_groups(n: usize, k: usize) -> Vec<Vec<usize>> {
    let (base, extra) = (n / k, n % k);
    let mut groups = Vec::with_capacity(k);
    let mut next = 0;
    for g in 0..k {
        let size = base + usize::from(g < extra);
        groups.push((next..next + size).collect());
        next += size;
    }
    groups
}

fn one_hot(bus: &str, on: usize, width: usize) -> String {
    let mut parts = vec![format!("{bus}_{on}")];
    parts.extend((0..width).filter(|&j| j != on).map(|j| format!("!{bus}_{j}")));
    parts.join(" && ")
}

/// The counter machine with bound `n`, with counter values grouped into `k`
/// modes.
pub fn gen_counter_machine(n: usize, k: usize) -> Result<Generated, BenchError> {
    if n == 0 {
        return Err(BenchError::InvalidParameter(
            "the counter bound must be at least 1".into(),
        ));
    }
    if k == 0 || k > n + 1 {
        return Err(BenchError::InvalidGroupCount { n, k });
    }
    let mut spec = String::new();
    let _ = writeln!(spec, "// counter machine with reset, bound {n}");
    let _ = writeln!(spec, "PARAMETERS {{ N = {n}; }}");
    spec.push_str("INPUTS { reset; start; }\n");
    spec.push_str("OUTPUTS { counter[N+1]; trigger; }\n");
    spec.push_str("INITIALLY { !reset && !start; }\n");
    spec.push_str("ASSUMPTIONS { G !(reset && start); }\n");
    spec.push_str("PRESET { counter[0] && (&&[1 <= i <= N] !counter[i]); }\n");
    spec.push_str("DEFINITIONS {\n");
    spec.push_str(
        "  mutual(b) = G ||[0 <= i < n] (b[i] && &&[j IN {0, 1 .. (n-1)} (\\) {i}] !b[j]);\n",
    );
    spec.push_str("}\n");
    spec.push_str("GUARANTEES {\n");
    spec.push_str("  mutual(counter);\n");
    spec.push_str("  G (reset -> X counter[0]);\n");
    spec.push_str("  G ((counter[0] && start) -> X (counter[1] || reset));\n");
    for i in 1..n {
        let _ = writeln!(
            spec,
            "  G ((counter[{i}] && !reset) -> X (counter[{}] || reset));",
            i + 1
        );
    }
    let _ = writeln!(spec, "  G (counter[{n}] -> X counter[0]);");
    let _ = writeln!(spec, "  G (counter[{n}] -> trigger);");
    let _ = writeln!(spec, "  G (!counter[{n}] -> !trigger);");
    spec.push_str("}\n");

    let width = n + 1;
    let groups = near_equal_groups(width, k);
    let mut modes = String::new();
    for (g, members) in groups.iter().enumerate() {
        let pred = members
            .iter()
            .map(|&c| format!("({})", one_hot("counter", c, width)))
            .collect::<Vec<_>>()
            .join(" || ");
        let _ = writeln!(modes, "MODE m{} {{", g + 1);
        let _ = writeln!(modes, "  pred = {pred};");
        let _ = writeln!(modes, "  init = {};", one_hot("counter", members[0], width));
        modes.push_str("}\n");
    }
    modes.push_str("RELATION {\n");
    for g in 1..=k {
        if g < k {
            let _ = writeln!(modes, "  m{g} -> m{};", g + 1);
        }
        if g > 1 {
            // reset and wrap-around both lead back to the first group
            let _ = writeln!(modes, "  m{g} -> m1;");
        }
    }
    modes.push_str("}\n");

    Ok(Generated {
        name: format!("cm_n{n}_k{k}"),
        spec,
        modes,
    })
}

/// Thermostat with `n` heating stages and three modes (idle, heating,
/// cooling). The environment reports `cold` or `hot`; heating ramps up one
/// stage per cold step.
pub fn gen_thermostat(n: usize) -> Result<Generated, BenchError> {
    if n == 0 {
        return Err(BenchError::InvalidParameter(
            "toy_thermostat needs at least one stage".into(),
        ));
    }
    let mut spec = String::new();
    let _ = writeln!(spec, "// thermostat with {n} heating stage(s)");
    let _ = writeln!(spec, "PARAMETERS {{ n = {n}; }}");
    spec.push_str(
        "INPUTS { cold; hot; }
OUTPUTS { idle; heat; cool; stage[n]; }
ASSUMPTIONS { G !(cold && hot); }
PRESET { idle && !heat && !cool && (&&[0 <= i < n] !stage[i]); }
GUARANTEES {
  G ((idle && !heat && !cool) || (!idle && heat && !cool) || (!idle && !heat && cool));
  G (cold -> X heat);
  G (hot -> X cool);
  G ((!cold && !hot) -> X idle);
  G (!heat -> &&[0 <= i < n] !stage[i]);
  G (heat -> ||[0 <= i < n] stage[i]);
  &&[0 <= i < n] G (stage[i] -> &&[j IN {0 .. n-1} (\\) {i}] !stage[j]);
  G (!heat -> X (heat -> stage[0]));
  &&[0 <= i < n-1] G ((stage[i] && cold) -> X stage[i+1]);
  G ((stage[n-1] && cold) -> X stage[n-1]);
}
",
    );
    let stages_off = (0..n)
        .map(|i| format!("!stage_{i}"))
        .collect::<Vec<_>>()
        .join(" && ");
    let heat_entry = (0..n)
        .map(|i| {
            if i == 0 {
                "stage_0".to_string()
            } else {
                format!("!stage_{i}")
            }
        })
        .collect::<Vec<_>>()
        .join(" && ");
    let modes = format!(
        "MODE idling {{
  pred = idle && !heat && !cool;
  init = idle && !heat && !cool && {stages_off};
}}
MODE heating {{
  pred = !idle && heat && !cool;
  init = !idle && heat && !cool && {heat_entry};
}}
MODE cooling {{
  pred = !idle && !heat && cool;
  init = !idle && !heat && cool && {stages_off};
}}
"
    );
    Ok(Generated {
        name: format!("toy_thermostat_n{n}"),
        spec,
        modes,
    })
}

/// Shuttle lift over floors `0..=n+1`: from the ground floor it climbs to
/// the top on request and then descends back. Modes: parked at the ground
/// floor, ascending, descending.
pub fn gen_lift(n: usize) -> Result<Generated, BenchError> {
    if n == 0 {
        return Err(BenchError::InvalidParameter(
            "toy_lift needs at least one intermediate floor".into(),
        ));
    }
    let top = n + 1;
    let floors = n + 2;
    let mut spec = String::new();
    let _ = writeln!(spec, "// shuttle lift with {floors} floors");
    let _ = writeln!(spec, "PARAMETERS {{ m = {n}; }}");
    spec.push_str(
        "INPUTS { call; hold; }
OUTPUTS { floor[m+2]; up; door; }
PRESET { floor[0] && (&&[1 <= i <= m+1] !floor[i]) && !up; }
DEFINITIONS {
  mutual(b) = G ||[0 <= i < n] (b[i] && &&[j IN {0, 1 .. (n-1)} (\\) {i}] !b[j]);
}
GUARANTEES {
  mutual(floor);
  G (floor[0] -> !up);
  G (floor[m+1] -> !up);
  G (door <-> (floor[0] && !call));
  G ((floor[0] && call) -> X (floor[1] && up));
  G ((floor[0] && !call) -> X floor[0]);
  &&[1 <= i <= m] G ((floor[i] && up && !hold) -> X floor[i+1]);
  &&[1 <= i <= m] G ((floor[i] && up) -> X (up || floor[m+1]));
  &&[1 <= i <= m+1] G ((floor[i] && !up && !hold) -> X floor[i-1]);
  &&[1 <= i <= m+1] G ((floor[i] && !up) -> X !up);
  &&[1 <= i <= m+1] G ((floor[i] && hold) -> X floor[i]);
}
",
    );
    let ascending = (1..=n)
        .map(|i| format!("({})", one_hot("floor", i, floors)))
        .collect::<Vec<_>>()
        .join(" || ");
    let descending = (1..=top)
        .map(|i| format!("({})", one_hot("floor", i, floors)))
        .collect::<Vec<_>>()
        .join(" || ");
    let modes = format!(
        "MODE ground {{
  pred = {ground};
  init = {ground} && !up;
}}
MODE ascending {{
  pred = up && ({ascending});
  init = up && {first};
}}
MODE descending {{
  pred = !up && ({descending});
  init = !up && {top_floor};
}}
RELATION {{
  ground -> ascending;
  ascending -> descending;
  descending -> ground;
}}
",
        ground = one_hot("floor", 0, floors),
        first = one_hot("floor", 1, floors),
        top_floor = one_hot("floor", top, floors),
    );
    Ok(Generated {
        name: format!("toy_lift_n{n}"),
        spec,
        modes,
    })
}

/// Dispatches on a family name: `cm` takes `[N, k]`, the toy families `[n]`.
pub fn generate(family: &str, params: &[usize]) -> Result<Generated, BenchError> {
    let arity = |expected: usize| {
        if params.len() == expected {
            Ok(())
        } else {
            Err(BenchError::InvalidParameter(format!(
                "family `{family}` takes {expected} parameter(s), {} given",
                params.len()
            )))
        }
    };
    match family {
        "cm" | "counter_machine" => {
            arity(2)?;
            gen_counter_machine(params[0], params[1])
        }
        "toy_thermostat" => {
            arity(1)?;
            gen_thermostat(params[0])
        }
        "toy_lift" => {
            arity(1)?;
            gen_lift(params[0])
        }
        other => Err(BenchError::UnknownFamily(other.to_string())),
    }
}

/// The toy families by name.
pub fn gen_toy_families(name: &str, n: usize) -> Result<Generated, BenchError> {
    match name {
        "toy_thermostat" => gen_thermostat(n),
        "toy_lift" => gen_lift(n),
        other => Err(BenchError::UnknownFamily(other.to_string())),
    }
}
