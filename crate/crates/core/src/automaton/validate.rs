use std::collections::HashMap;

use crate::diagnostic::{Code, Diagnostic, Severity};
use crate::syntax::{is_identifier, is_type_identifier};

use super::{Doa, END};

/// How strictly to treat shapes the protocol grammar cannot express.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidationMode {
    /// Final states with outgoing method transitions and non-final states
    /// without any are legal automata; they are reported as warnings.
    #[default]
    General,
    /// The automaton is about to be turned into a protocol, so those shapes
    /// are errors.
    Decompile,
}

pub fn validate_doa(doa: &Doa) -> Vec<Diagnostic> {
    validate_doa_with(doa, ValidationMode::General)
}

/// Checks the well-formedness rules of an automaton and returns every
/// violation. Accepts arbitrary input, including automata whose
/// transitions name undeclared states.
pub fn validate_doa_with(doa: &Doa, mode: ValidationMode) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    names(doa, &mut diags);
    shape(doa, &mut diags);
    transitions(doa, &mut diags);
    determinism(doa, &mut diags);
    sinks(doa, mode, &mut diags);

    let reachable = doa.reachable();
    for state in doa.states() {
        if !reachable.contains(state) {
            diags.push(
                Diagnostic::warning(
                    Code::Unreachable,
                    format!("state `{state}` is not reachable from the initial state"),
                )
                .on_element(format!("state {state}")),
            );
        }
    }
    diags
}

fn malformed(msg: String, element: String) -> Diagnostic {
    Diagnostic::error(Code::MalformedDoa, msg).on_element(element)
}

fn names(doa: &Doa, diags: &mut Vec<Diagnostic>) {
    for s in doa.states() {
        if !is_identifier(s) && s != END {
            diags.push(malformed(format!("`{s}` is not a valid state name"), format!("state {s}")));
        }
    }
    for sig in &doa.methods {
        let ok = is_type_identifier(&sig.return_type)
            && is_identifier(&sig.name)
            && sig.params.iter().all(|p| is_type_identifier(p));
        if !ok {
            diags.push(malformed(format!("`{sig}` is not a valid method signature"), format!("method {sig}")));
        }
    }
    for label in &doa.labels {
        if !is_identifier(label) {
            diags.push(malformed(format!("`{label}` is not a valid label"), format!("label {label}")));
        }
    }
}

fn shape(doa: &Doa, diags: &mut Vec<Diagnostic>) {
    for s in &doa.internal_states {
        if doa.external_states.contains(s) {
            diags.push(malformed(
                format!("state `{s}` is declared both external and internal"),
                format!("state {s}"),
            ));
        }
    }
    if !doa.is_external(&doa.initial) {
        diags.push(malformed(
            format!("initial state `{}` is not a declared external state", doa.initial),
            format!("state {}", doa.initial),
        ));
    }
    for f in &doa.finals {
        if !doa.is_external(f) {
            diags.push(malformed(
                format!("final state `{f}` is not a declared external state"),
                format!("state {f}"),
            ));
        }
    }
    if doa.is_internal(END) {
        diags.push(
            Diagnostic::error(Code::ReservedEnd, "`end` is reserved and cannot be an internal state")
                .on_element(format!("state {END}")),
        );
    } else if doa.is_external(END) && !doa.is_final_sink(END) {
        diags.push(
            Diagnostic::error(
                Code::ReservedEnd,
                "`end` is reserved for the final state without transitions",
            )
            .on_element(format!("state {END}")),
        );
    }
}

fn transitions(doa: &Doa, diags: &mut Vec<Diagnostic>) {
    for e in &doa.method_transitions {
        let element = format!("transition {e}");
        if !doa.is_state(&e.from) {
            diags.push(
                Diagnostic::error(Code::UndefinedTarget, format!("transition from undefined state `{}`", e.from))
                    .on_element(element.clone()),
            );
        } else if doa.is_internal(&e.from) {
            diags.push(malformed(
                format!("internal state `{}` cannot have method transitions", e.from),
                element.clone(),
            ));
        }
        if !doa.is_state(&e.to) {
            diags.push(
                Diagnostic::error(Code::UndefinedTarget, format!("transition to undefined state `{}`", e.to))
                    .on_element(element.clone()),
            );
        }
        if !doa.methods.contains(&e.sig) {
            diags.push(malformed(format!("method `{}` is not declared", e.sig), element));
        }
    }
    for e in &doa.result_transitions {
        let element = format!("transition {e}");
        if !doa.is_state(&e.from) {
            diags.push(
                Diagnostic::error(Code::UndefinedTarget, format!("transition from undefined state `{}`", e.from))
                    .on_element(element.clone()),
            );
        } else if doa.is_external(&e.from) {
            diags.push(malformed(
                format!("external state `{}` cannot have result transitions", e.from),
                element.clone(),
            ));
        }
        if doa.is_internal(&e.to) {
            diags.push(
                Diagnostic::error(
                    Code::ChoiceToChoice,
                    format!("result transition from `{}` leads to internal state `{}`", e.from, e.to),
                )
                .on_element(element.clone()),
            );
        } else if !doa.is_state(&e.to) {
            diags.push(
                Diagnostic::error(Code::UndefinedTarget, format!("transition to undefined state `{}`", e.to))
                    .on_element(element.clone()),
            );
        }
        if !doa.labels.contains(&e.label) {
            diags.push(malformed(format!("label `{}` is not declared", e.label), element));
        }
    }
    for t in &doa.internal_states {
        if doa.result_edges_from(t).next().is_none() {
            diags.push(
                Diagnostic::error(
                    Code::ChoiceNoResults,
                    format!("internal state `{t}` has no result transitions"),
                )
                .on_element(format!("state {t}")),
            );
        }
    }
}

fn determinism(doa: &Doa, diags: &mut Vec<Diagnostic>) {
    let mut methods = HashMap::new();
    for e in &doa.method_transitions {
        let key = (e.from.as_str(), e.sig.call_key());
        if let Some(first) = methods.insert(key, e) {
            diags.push(
                Diagnostic::error(
                    Code::Nondeterministic,
                    format!("`{first}` and `{e}` leave the same state on the same method"),
                )
                .on_element(format!("transition {e}")),
            );
        }
    }
    let mut results = HashMap::new();
    for e in &doa.result_transitions {
        if let Some(first) = results.insert((e.from.as_str(), e.label.as_str()), e) {
            diags.push(
                Diagnostic::error(
                    Code::Nondeterministic,
                    format!("`{first}` and `{e}` leave the same state on the same label"),
                )
                .on_element(format!("transition {e}")),
            );
        }
    }
}

fn sinks(doa: &Doa, mode: ValidationMode, diags: &mut Vec<Diagnostic>) {
    let severity = match mode {
        ValidationMode::General => Severity::Warning,
        ValidationMode::Decompile => Severity::Error,
    };
    for s in &doa.external_states {
        let has_methods = doa.method_edges_from(s).next().is_some();
        let (code, message) = match (doa.is_final(s), has_methods) {
            // reported above as a reserved-name violation
            _ if s == END => continue,
            (true, true) => (
                Code::FinalNotSink,
                format!("final state `{s}` has outgoing method transitions; protocols can only express final states as `end`"),
            ),
            (false, false) => (
                Code::SinkNotFinal,
                format!("state `{s}` has no transitions but is not final; protocols treat empty states as final"),
            ),
            _ => continue,
        };
        diags.push(Diagnostic {
            severity,
            code,
            message,
            location: None,
        }
        .on_element(format!("state {s}")));
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{drone, sig};
    use super::*;

    fn codes(doa: &Doa) -> Vec<(Severity, Code)> {
        validate_doa(doa).into_iter().map(|d| (d.severity, d.code)).collect()
    }

    #[test]
    fn drone_only_warns_about_end() {
        let diags = validate_doa(&drone());
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, Code::Unreachable);
        assert!(diags[0].message.contains("`end`"));
    }

    #[test]
    fn choice_without_results() {
        let mut d = Doa::with_initial("a");
        d.internal_states.insert("t".into());
        d.add_method_edge("a", sig("Boolean", "m", &[]), "t");
        assert_eq!(codes(&d), vec![(Severity::Error, Code::ChoiceNoResults)]);
    }

    #[test]
    fn choice_to_choice() {
        let mut d = Doa::with_initial("a");
        d.internal_states.extend(["t".to_owned(), "u".to_owned()]);
        d.add_method_edge("a", sig("Boolean", "m", &[]), "t")
            .add_result_edge("t", "Yes", "u")
            .add_result_edge("u", "No", "a");
        assert_eq!(codes(&d), vec![(Severity::Error, Code::ChoiceToChoice)]);
    }

    #[test]
    fn undefined_target() {
        let mut d = Doa::with_initial("a");
        d.add_method_edge("a", sig("void", "m", &[]), "a");
        d.method_transitions.insert(super::super::MethodEdge {
            from: "a".into(),
            sig: sig("void", "n", &[]),
            to: "zz".into(),
        });
        d.methods.insert(sig("void", "n", &[]));
        assert_eq!(codes(&d), vec![(Severity::Error, Code::UndefinedTarget)]);
    }

    #[test]
    fn nondeterminism_including_return_type_overloads() {
        let mut d = Doa::with_initial("a");
        d.add_method_edge("a", sig("void", "m", &[]), "a")
            .add_method_edge("a", sig("void", "m", &[]), "b")
            .add_method_edge("b", sig("void", "k", &[]), "a");
        assert_eq!(codes(&d), vec![(Severity::Error, Code::Nondeterministic)]);

        let mut d = Doa::with_initial("a");
        d.add_method_edge("a", sig("void", "m", &[]), "a")
            .add_method_edge("a", sig("int", "m", &[]), "a");
        assert_eq!(codes(&d), vec![(Severity::Error, Code::Nondeterministic)]);
    }

    #[test]
    fn sink_rules_depend_on_mode() {
        let mut d = Doa::single("a");
        d.add_method_edge("a", sig("void", "m", &[]), "b");
        let general: Vec<_> = codes(&d);
        assert_eq!(
            general,
            vec![(Severity::Warning, Code::FinalNotSink), (Severity::Warning, Code::SinkNotFinal)]
        );
        let strict: Vec<_> = validate_doa_with(&d, ValidationMode::Decompile)
            .into_iter()
            .map(|d| (d.severity, d.code))
            .collect();
        assert_eq!(
            strict,
            vec![(Severity::Error, Code::FinalNotSink), (Severity::Error, Code::SinkNotFinal)]
        );
    }

    #[test]
    fn reserved_end() {
        let mut d = Doa::with_initial("a");
        d.add_method_edge("a", sig("void", "m", &[]), END)
            .add_method_edge(END, sig("void", "m", &[]), "a");
        d.finals.insert(END.into());
        let got = codes(&d);
        assert!(got.contains(&(Severity::Error, Code::ReservedEnd)));
        assert!(!got.iter().any(|(_, c)| *c == Code::FinalNotSink));
    }

    #[test]
    fn malformed_shapes() {
        let mut d = Doa::end_only();
        d.initial = "nowhere".into();
        d.labels.insert("not a label".into());
        let got = codes(&d);
        assert!(got.iter().filter(|(_, c)| *c == Code::MalformedDoa).count() >= 2);
    }
}
