//! Automaton to protocol.
//!
//! Every external state that is not a final sink becomes a named state
//! definition; transitions into final sinks are written `end`, and internal
//! states are written inline as `<...>` choices at each transition that
//! leads to them.

use std::collections::{HashSet, VecDeque};

use crate::automaton::{validate_doa_with, Doa, StateName, ValidationMode};
use crate::diagnostic::{has_errors, Code, Diagnostic};
use crate::syntax::{
    is_identifier, LabeledTarget, Loc, MethodTransition, NamedStateDef, OptionTarget, StateBody, StateRef, Target,
    TypestateAst,
};

/// Order in which states are emitted: the initial state, then the others in
/// breadth-first order (outgoing edges visited in symbol text order), then
/// unreachable states by name. Final sinks are never emitted.
pub fn emit_state_order(doa: &Doa) -> Vec<StateName> {
    let emitted = |s: &str| doa.is_external(s) && !doa.is_final_sink(s);
    let mut order = Vec::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    if doa.is_state(&doa.initial) {
        seen.insert(doa.initial.as_str());
        queue.push_back(doa.initial.as_str());
    }
    while let Some(state) = queue.pop_front() {
        if emitted(state) {
            order.push(state.to_owned());
        }
        let mut next: Vec<(String, &str)> = doa
            .method_edges_from(state)
            .map(|e| (e.sig.to_string(), e.to.as_str()))
            .chain(doa.result_edges_from(state).map(|e| (e.label.clone(), e.to.as_str())))
            .collect();
        next.sort();
        for (_, to) in next {
            if doa.is_state(to) && seen.insert(to) {
                queue.push_back(to);
            }
        }
    }
    let mut rest: Vec<&StateName> = doa
        .external_states
        .iter()
        .filter(|s| !seen.contains(s.as_str()) && emitted(s))
        .collect();
    rest.sort();
    order.extend(rest.into_iter().cloned());
    order
}

/// Translates an automaton into a protocol named `name`.
pub fn decompile(name: &str, doa: &Doa) -> Result<TypestateAst, Vec<Diagnostic>> {
    let mut diags = validate_doa_with(doa, ValidationMode::Decompile);
    if !is_identifier(name) {
        diags.push(Diagnostic::error(
            Code::MalformedDoa,
            format!("`{name}` is not a valid protocol name"),
        ));
    }
    if has_errors(&diags) {
        diags.retain(Diagnostic::is_error);
        return Err(diags);
    }

    let order = emit_state_order(doa);
    if doa.is_final_sink(&doa.initial) {
        if !order.is_empty() {
            return Err(vec![Diagnostic::error(
                Code::InitialIsEnd,
                format!(
                    "initial state `{}` is a final state without transitions, but other states exist; \
                     the first state of a protocol cannot be `end`",
                    doa.initial
                ),
            )
            .on_element(format!("state {}", doa.initial))]);
        }
        return Ok(TypestateAst {
            name: name.to_owned(),
            states: Vec::new(),
        });
    }

    let states = order
        .iter()
        .map(|state| NamedStateDef {
            name: state.clone(),
            body: body(doa, state),
            loc: Loc::default(),
        })
        .collect();
    Ok(TypestateAst {
        name: name.to_owned(),
        states,
    })
}

fn body(doa: &Doa, state: &str) -> StateBody {
    let transitions = doa
        .method_edges_from(state)
        .map(|e| MethodTransition {
            sig: e.sig.clone(),
            target: target(doa, &e.to),
            loc: Loc::default(),
        })
        .collect();
    StateBody { transitions }
}

fn target(doa: &Doa, to: &str) -> Target {
    if doa.is_internal(to) {
        let options = doa
            .result_edges_from(to)
            .map(|e| LabeledTarget {
                label: e.label.clone(),
                target: if doa.is_final_sink(&e.to) {
                    OptionTarget::End
                } else {
                    OptionTarget::Named(StateRef::new(e.to.as_str()))
                },
                loc: Loc::default(),
            })
            .collect();
        Target::Choice(options)
    } else if doa.is_final_sink(to) {
        Target::End
    } else {
        Target::Named(StateRef::new(to))
    }
}
