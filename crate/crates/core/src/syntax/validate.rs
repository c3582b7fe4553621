use std::collections::HashSet;

use crate::diagnostic::{Code, Diagnostic};

use super::ast::*;

/// Checks the structural rules of a protocol. Returns every violation in
/// document order; an empty list means the protocol is valid.
pub fn validate_ast(ast: &TypestateAst) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut defined = HashSet::new();
    for state in &ast.states {
        if state.name == "end" {
            diags.push(
                Diagnostic::error(Code::ReservedEnd, "`end` is reserved and cannot name a state")
                    .at_opt(state.loc.0),
            );
        }
        if !defined.insert(state.name.as_str()) {
            diags.push(
                Diagnostic::error(
                    Code::DupState,
                    format!("state `{}` is defined more than once", state.name),
                )
                .at_opt(state.loc.0),
            );
        }
    }
    let checker = Checker { defined: &defined };
    for state in &ast.states {
        checker.body(&state.body, &mut diags);
    }
    diags
}

struct Checker<'a> {
    defined: &'a HashSet<&'a str>,
}

impl Checker<'_> {
    fn body(&self, body: &StateBody, diags: &mut Vec<Diagnostic>) {
        let mut keys = HashSet::new();
        for t in &body.transitions {
            if !keys.insert(t.sig.call_key()) {
                diags.push(
                    Diagnostic::error(
                        Code::DupTransition,
                        format!(
                            "method `{}({})` already has a transition in this state",
                            t.sig.name,
                            t.sig.params.join(", ")
                        ),
                    )
                    .at_opt(t.loc.0),
                );
            }
            match &t.target {
                Target::End => {}
                Target::Named(r) => self.reference(r, diags),
                Target::Inline(b) => self.body(b, diags),
                Target::Choice(options) => self.choice(t, options, diags),
            }
        }
    }

    fn choice(&self, t: &MethodTransition, options: &[LabeledTarget], diags: &mut Vec<Diagnostic>) {
        if options.is_empty() {
            diags.push(
                Diagnostic::error(
                    Code::EmptyChoice,
                    format!("choice after `{}` has no options", t.sig),
                )
                .at_opt(t.loc.0),
            );
        }
        let mut labels = HashSet::new();
        for o in options {
            if !labels.insert(o.label.as_str()) {
                diags.push(
                    Diagnostic::error(
                        Code::DupLabel,
                        format!("label `{}` appears more than once in this choice", o.label),
                    )
                    .at_opt(o.loc.0),
                );
            }
            match &o.target {
                OptionTarget::End => {}
                OptionTarget::Named(r) => self.reference(r, diags),
                OptionTarget::Inline(b) => self.body(b, diags),
            }
        }
    }

    fn reference(&self, r: &StateRef, diags: &mut Vec<Diagnostic>) {
        if !self.defined.contains(r.name.as_str()) {
            diags.push(
                Diagnostic::error(
                    Code::UndefinedState,
                    format!("state `{}` is not defined", r.name),
                )
                .at_opt(r.loc.0),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::syntax::parse;

    fn codes(text: &str) -> Vec<Code> {
        validate_ast(&parse(text).unwrap()).into_iter().map(|d| d.code).collect()
    }

    #[test]
    fn corpus_is_valid() {
        for (name, text) in corpus::ALL {
            assert_eq!(codes(text), vec![], "{name}");
        }
    }

    #[test]
    fn reserved_end() {
        assert_eq!(codes("typestate x { end = { void m(): end } }"), vec![Code::ReservedEnd]);
    }

    #[test]
    fn undefined_reference_is_located() {
        let ast = parse("typestate x {\n  a = { void m(): b }\n}").unwrap();
        let diags = validate_ast(&ast);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, Code::UndefinedState);
        let pos = diags[0].source_pos().unwrap();
        assert_eq!((pos.line, pos.column), (2, 19));
    }

    #[test]
    fn duplicates() {
        assert_eq!(codes("typestate x { a = {} a = {} }"), vec![Code::DupState]);
        assert_eq!(
            codes("typestate x { a = { void m(): end, int m(): a } }"),
            vec![Code::DupTransition]
        );
        // overloads by parameter types are distinct
        assert_eq!(codes("typestate x { a = { void m(): end, void m(int): a } }"), vec![]);
        assert_eq!(
            codes("typestate x { a = { Boolean m(): <T: a, T: end> } }"),
            vec![Code::DupLabel]
        );
    }

    #[test]
    fn same_method_in_different_states_is_fine() {
        assert_eq!(codes("typestate x { a = { void m(): b } b = { void m(): a } }"), vec![]);
    }

    #[test]
    fn empty_choice() {
        assert_eq!(codes("typestate x { a = { void m(): <> } }"), vec![Code::EmptyChoice]);
    }

    #[test]
    fn nested_bodies_checked() {
        assert_eq!(
            codes("typestate x { a = { void m(): <L: { void n(): zz, void n(): end }> } }"),
            vec![Code::UndefinedState, Code::DupTransition]
        );
    }
}
