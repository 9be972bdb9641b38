use std::fmt::Write;

use super::modes::ModeDecomposition;
use super::spec::ReactiveSpec;
use crate::ltl::Formula;

/// Renders a specification as TLSF accepted by [`parse_spec`](super::parse_spec).
pub fn emit_tlsf(spec: &ReactiveSpec, title: &str) -> String {
    let mut out = String::new();
    out.push_str("INFO {\n");
    let _ = writeln!(out, "  TITLE:       \"{}\"", title.replace('"', "'"));
    out.push_str("  DESCRIPTION: \"safety specification\"\n");
    out.push_str("  SEMANTICS:   Mealy\n");
    out.push_str("  TARGET:      Mealy\n");
    out.push_str("}\n\nMAIN {\n");
    decl_section(&mut out, "INPUTS", &spec.inputs);
    decl_section(&mut out, "OUTPUTS", &spec.outputs);
    if spec.initially != Formula::True {
        let _ = writeln!(out, "  INITIALLY {{\n    {};\n  }}", spec.initially);
    }
    if spec.preset != Formula::True {
        let _ = writeln!(out, "  PRESET {{\n    {};\n  }}", spec.preset);
    }
    item_section(&mut out, "ASSUMPTIONS", &spec.assumptions);
    item_section(&mut out, "GUARANTEES", &spec.guarantees);
    out.push_str("}\n");
    out
}

fn decl_section(out: &mut String, name: &str, atoms: &[String]) {
    if atoms.is_empty() {
        return;
    }
    let _ = writeln!(out, "  {name} {{");
    for a in atoms {
        let _ = writeln!(out, "    {a};");
    }
    out.push_str("  }\n");
}

fn item_section(out: &mut String, name: &str, items: &[Formula]) {
    if items.is_empty() {
        return;
    }
    let _ = writeln!(out, "  {name} {{");
    for f in items {
        let _ = writeln!(out, "    G ({f});");
    }
    out.push_str("  }\n");
}

/// Renders a decomposition in the modes file format.
pub fn emit_modes(decomposition: &ModeDecomposition) -> String {
    let mut out = String::new();
    for m in &decomposition.modes {
        let _ = writeln!(out, "MODE {} {{", m.name);
        let _ = writeln!(out, "  pred = {};", m.predicate);
        let _ = writeln!(out, "  init = {};", m.init);
        if m.arrival != Formula::True {
            let _ = writeln!(out, "  arrival = {};", m.arrival);
        }
        out.push_str("}\n");
    }
    out.push_str("RELATION {\n");
    for (i, j) in &decomposition.relation {
        let _ = writeln!(
            out,
            "  {} -> {};",
            decomposition.modes[*i].name, decomposition.modes[*j].name
        );
    }
    out.push_str("}\n");
    out
}
