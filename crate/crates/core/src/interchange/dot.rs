use std::fmt::Write;

use crate::automaton::Doa;

use super::doa_to_document;

const START: &str = "<start>";

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: circles for external states (double circles when
/// final), diamonds for internal states, a gray arrow from an invisible
/// start node into the initial state.
pub fn doa_to_dot(doa: &Doa) -> String {
    let mut out = String::from("digraph doa {\n    rankdir=LR;\n");
    let _ = writeln!(out, "    {} [shape=point, style=invis];", quote(START));
    for state in doa_to_document(doa).states {
        let shape = if doa.is_internal(&state.name) {
            "diamond"
        } else if state.is_final {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "    {} [shape={shape}];", quote(&state.name));
    }
    let _ = writeln!(out, "    {} -> {} [color=gray];", quote(START), quote(&doa.initial));
    for e in &doa.method_transitions {
        let _ = writeln!(
            out,
            "    {} -> {} [label={}, color=blue];",
            quote(&e.from),
            quote(&e.to),
            quote(&e.sig.to_string())
        );
    }
    for e in &doa.result_transitions {
        let _ = writeln!(
            out,
            "    {} -> {} [label={}, color=blue];",
            quote(&e.from),
            quote(&e.to),
            quote(&e.label)
        );
    }
    out.push_str("}\n");
    out
}
