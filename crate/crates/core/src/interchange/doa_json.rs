use std::collections::HashSet;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::automaton::{validate_doa, Doa, MethodEdge, ResultEdge};
use crate::diagnostic::{Checked, Code, Diagnostic};
use crate::syntax::MethodSig;

use super::{read_document, write_document};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    External,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub name: String,
    pub kind: StateKind,
    pub initial: bool,
    #[serde(rename = "final")]
    pub is_final: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MethodEntry {
    pub return_type: String,
    pub name: String,
    pub params: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodTransitionEntry {
    pub from: String,
    /// Index into [`DoaDocument::methods`].
    pub method: usize,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultTransitionEntry {
    pub from: String,
    pub label: String,
    pub to: String,
}

/// The JSON form of an automaton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DoaDocument {
    pub schema_version: String,
    pub states: Vec<StateEntry>,
    pub methods: Vec<MethodEntry>,
    pub labels: Vec<String>,
    pub method_transitions: Vec<MethodTransitionEntry>,
    pub result_transitions: Vec<ResultTransitionEntry>,
}

/// States are listed initial first, then by name; everything else keeps
/// the automaton's order.
pub fn doa_to_document(doa: &Doa) -> DoaDocument {
    let mut names: Vec<&String> = doa.states().collect();
    names.sort_by_key(|n| (**n != doa.initial, n.as_str()));
    names.dedup();
    let states = names
        .into_iter()
        .map(|n| StateEntry {
            name: n.clone(),
            kind: if doa.is_internal(n) { StateKind::Internal } else { StateKind::External },
            initial: *n == doa.initial,
            is_final: doa.is_final(n),
        })
        .collect();
    let methods: IndexSet<&MethodSig> = doa
        .methods
        .iter()
        .chain(doa.method_transitions.iter().map(|e| &e.sig))
        .collect();
    DoaDocument {
        schema_version: SCHEMA_VERSION.to_owned(),
        states,
        methods: methods
            .iter()
            .map(|m| MethodEntry {
                return_type: m.return_type.clone(),
                name: m.name.clone(),
                params: m.params.clone(),
            })
            .collect(),
        labels: doa.labels.iter().cloned().collect(),
        method_transitions: doa
            .method_transitions
            .iter()
            .map(|e| MethodTransitionEntry {
                from: e.from.clone(),
                method: methods.get_index_of(&e.sig).expect("collected above"),
                to: e.to.clone(),
            })
            .collect(),
        result_transitions: doa
            .result_transitions
            .iter()
            .map(|e| ResultTransitionEntry {
                from: e.from.clone(),
                label: e.label.clone(),
                to: e.to.clone(),
            })
            .collect(),
    }
}

pub fn doa_to_json(doa: &Doa) -> String {
    write_document(&doa_to_document(doa))
}

/// Checks the document-level rules (version, unique names, one initial
/// state, indices in range) and builds the automaton. The automaton is not
/// validated here.
pub fn doa_from_document(doc: &DoaDocument) -> Result<Doa, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let schema = |msg: String, at: String| Diagnostic::error(Code::JsonSchema, msg).at_pointer(at);
    if doc.schema_version != SCHEMA_VERSION {
        diags.push(schema(
            format!("unsupported schemaVersion `{}` (expected `{SCHEMA_VERSION}`)", doc.schema_version),
            "/schemaVersion".into(),
        ));
    }
    let mut seen = HashSet::new();
    for (i, s) in doc.states.iter().enumerate() {
        if !seen.insert(s.name.as_str()) {
            diags.push(schema(format!("state `{}` is listed more than once", s.name), format!("/states/{i}/name")));
        }
        if s.kind == StateKind::Internal && s.is_final {
            diags.push(schema(format!("internal state `{}` cannot be final", s.name), format!("/states/{i}/final")));
        }
    }
    let initials: Vec<&StateEntry> = doc.states.iter().filter(|s| s.initial).collect();
    if initials.len() != 1 {
        diags.push(schema(
            format!("exactly one state must be initial, found {}", initials.len()),
            "/states".into(),
        ));
    }
    for (i, t) in doc.method_transitions.iter().enumerate() {
        if t.method >= doc.methods.len() {
            diags.push(schema(
                format!("method index {} is out of range ({} methods)", t.method, doc.methods.len()),
                format!("/methodTransitions/{i}/method"),
            ));
        }
    }
    for (i, t) in doc.result_transitions.iter().enumerate() {
        if !doc.labels.contains(&t.label) {
            diags.push(schema(
                format!("label `{}` is not listed in `labels`", t.label),
                format!("/resultTransitions/{i}/label"),
            ));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let methods: Vec<MethodSig> = doc
        .methods
        .iter()
        .map(|m| MethodSig::new(m.return_type.as_str(), m.name.as_str(), m.params.iter().cloned()))
        .collect();
    let by_kind = |kind| -> IndexSet<String> {
        doc.states.iter().filter(|s| s.kind == kind).map(|s| s.name.clone()).collect()
    };
    Ok(Doa {
        external_states: by_kind(StateKind::External),
        internal_states: by_kind(StateKind::Internal),
        methods: methods.iter().cloned().collect(),
        labels: doc.labels.iter().cloned().collect(),
        initial: initials[0].name.clone(),
        finals: doc.states.iter().filter(|s| s.is_final).map(|s| s.name.clone()).collect(),
        method_transitions: doc
            .method_transitions
            .iter()
            .map(|t| MethodEdge {
                from: t.from.clone(),
                sig: methods[t.method].clone(),
                to: t.to.clone(),
            })
            .collect(),
        result_transitions: doc
            .result_transitions
            .iter()
            .map(|t| ResultEdge {
                from: t.from.clone(),
                label: t.label.clone(),
                to: t.to.clone(),
            })
            .collect(),
    })
}

/// Reads an automaton document and validates the automaton. On success
/// the warnings found by validation are returned alongside it.
pub fn doa_from_json(text: &str) -> Result<Checked<Doa>, Vec<Diagnostic>> {
    let doc: DoaDocument = read_document(text).map_err(|d| vec![d])?;
    let doa = doa_from_document(&doc)?;
    let diags = validate_doa(&doa);
    if crate::diagnostic::has_errors(&diags) {
        return Err(diags);
    }
    Ok(Checked {
        value: doa,
        warnings: diags,
    })
}
