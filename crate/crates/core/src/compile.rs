//! Protocol to automaton, by structural recursion over the grammar.
//!
//! Every production yields a small automaton and the pieces are combined
//! with [`Doa::union`]. Anonymous inline states and choices receive fresh
//! names from a [`NameRegistry`] seeded with every declared state name.

use std::collections::HashSet;

use indexmap::IndexSet;

use crate::automaton::{Doa, MethodEdge, ResultEdge, StateName, END};
use crate::diagnostic::{has_errors, Diagnostic};
use crate::syntax::{validate_ast, MethodSig, OptionTarget, StateBody, Target, TypestateAst};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreshKind {
    /// An inline state definition, named `_S<k>`.
    Inner,
    /// An internal-choice state, named `_C<k>`.
    Choice,
}

/// The state names already in use during one translation.
#[derive(Debug, Clone, Default)]
pub struct NameRegistry {
    claimed: HashSet<StateName>,
}

impl NameRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn seeded<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<StateName>,
    {
        NameRegistry {
            claimed: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.claimed.contains(name)
    }

    /// Returns false if the name was already claimed.
    pub fn claim(&mut self, name: impl Into<StateName>) -> bool {
        self.claimed.insert(name.into())
    }

    /// The smallest-numbered unclaimed name of the given kind; the name is
    /// claimed before it is returned.
    pub fn fresh(&mut self, kind: FreshKind) -> StateName {
        let prefix = match kind {
            FreshKind::Inner => "_S",
            FreshKind::Choice => "_C",
        };
        let name = (1..)
            .map(|k| format!("{prefix}{k}"))
            .find(|n| !self.claimed.contains(n))
            .expect("unbounded range");
        self.claimed.insert(name.clone());
        name
    }
}

/// Translates a protocol into its automaton. The protocol is validated
/// first; any validation error is returned instead of an automaton.
pub fn compile(ast: &TypestateAst) -> Result<Doa, Vec<Diagnostic>> {
    let diags = validate_ast(ast);
    if has_errors(&diags) {
        return Err(diags);
    }
    let mut registry = NameRegistry::seeded(ast.states.iter().map(|s| s.name.clone()));
    registry.claim(END);
    let mut compiler = Compiler { registry };
    let doa = compiler.states(ast).map_err(|d| vec![d])?;
    debug_assert!(!has_errors(&crate::automaton::validate_doa(&doa)));
    Ok(doa)
}

struct Compiler {
    registry: NameRegistry,
}

fn set<T: std::hash::Hash + Eq>(items: impl IntoIterator<Item = T>) -> IndexSet<T> {
    items.into_iter().collect()
}

impl Compiler {
    // TB -> e | SDN TB
    fn states(&mut self, ast: &TypestateAst) -> Result<Doa, Diagnostic> {
        let mut pieces = Vec::with_capacity(ast.states.len() + 1);
        for state in &ast.states {
            pieces.push(self.state(&state.name, &state.body)?);
        }
        pieces.push(Doa::end_only());
        fold_union(pieces)
    }

    // SD -> { S }
    fn state(&mut self, start: &str, body: &StateBody) -> Result<Doa, Diagnostic> {
        if body.transitions.is_empty() {
            return Ok(Doa::single(start));
        }
        // S -> M SN
        let mut pieces = Vec::with_capacity(body.transitions.len());
        for t in &body.transitions {
            pieces.push(self.method(start, &t.sig, &t.target)?);
        }
        fold_union(pieces)
    }

    // M -> type method ( A ) : W
    fn method(&mut self, start: &str, sig: &MethodSig, target: &Target) -> Result<Doa, Diagnostic> {
        match target {
            Target::End => Ok(method_edge(start, sig, END, true)),
            Target::Inline(body) if body.transitions.is_empty() => Ok(method_edge(start, sig, END, true)),
            Target::Named(next) => Ok(method_edge(start, sig, &next.name, false)),
            Target::Inline(body) => {
                let inner = self.registry.fresh(FreshKind::Inner);
                method_edge(start, sig, &inner, false).union(&self.state(&inner, body)?)
            }
            Target::Choice(options) => {
                let choice = self.registry.fresh(FreshKind::Choice);
                let mut doa = Doa {
                    external_states: set([start.to_owned()]),
                    internal_states: set([choice.clone()]),
                    methods: set([sig.clone()]),
                    labels: IndexSet::new(),
                    initial: start.to_owned(),
                    finals: IndexSet::new(),
                    method_transitions: set([MethodEdge {
                        from: start.to_owned(),
                        sig: sig.clone(),
                        to: choice.clone(),
                    }]),
                    result_transitions: IndexSet::new(),
                };
                // O -> L ON
                for option in options {
                    let piece = self.option(&choice, &option.label, &option.target)?;
                    doa.absorb(&piece)?;
                }
                Ok(doa)
            }
        }
    }

    // L -> label : LT
    fn option(&mut self, choice: &str, label: &str, target: &OptionTarget) -> Result<Doa, Diagnostic> {
        match target {
            OptionTarget::End => Ok(result_edge(choice, label, END, true)),
            OptionTarget::Inline(body) if body.transitions.is_empty() => Ok(result_edge(choice, label, END, true)),
            OptionTarget::Named(next) => Ok(result_edge(choice, label, &next.name, false)),
            OptionTarget::Inline(body) => {
                let inner = self.registry.fresh(FreshKind::Inner);
                result_edge(choice, label, &inner, false).union(&self.state(&inner, body)?)
            }
        }
    }
}

fn fold_union(pieces: Vec<Doa>) -> Result<Doa, Diagnostic> {
    let mut iter = pieces.into_iter();
    let mut acc = iter.next().expect("at least one piece");
    for piece in iter {
        acc.absorb(&piece)?;
    }
    Ok(acc)
}

/// `⟨{start, to}, {}, {sig}, {}, start, F, {δ(start, sig) = to}, {}⟩` with
/// `F = {to}` when the target is final.
fn method_edge(start: &str, sig: &MethodSig, to: &str, to_is_final: bool) -> Doa {
    Doa {
        external_states: set([start.to_owned(), to.to_owned()]),
        internal_states: IndexSet::new(),
        methods: set([sig.clone()]),
        labels: IndexSet::new(),
        initial: start.to_owned(),
        finals: if to_is_final { set([to.to_owned()]) } else { IndexSet::new() },
        method_transitions: set([MethodEdge {
            from: start.to_owned(),
            sig: sig.clone(),
            to: to.to_owned(),
        }]),
        result_transitions: IndexSet::new(),
    }
}

/// `⟨{to}, {choice}, {}, {label}, ε, F, {}, {τ(choice, label) = to}⟩`.
/// These pieces have no initial state of their own; the choice name fills
/// the slot and is always replaced by the enclosing method piece's start.
fn result_edge(choice: &str, label: &str, to: &str, to_is_final: bool) -> Doa {
    Doa {
        external_states: set([to.to_owned()]),
        internal_states: set([choice.to_owned()]),
        methods: IndexSet::new(),
        labels: set([label.to_owned()]),
        initial: choice.to_owned(),
        finals: if to_is_final { set([to.to_owned()]) } else { IndexSet::new() },
        method_transitions: IndexSet::new(),
        result_transitions: set([ResultEdge {
            from: choice.to_owned(),
            label: label.to_owned(),
            to: to.to_owned(),
        }]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::validate_doa;
    use crate::corpus;
    use crate::diagnostic::Code;
    use crate::syntax::parse;

    fn compile_text(text: &str) -> Doa {
        compile(&parse(text).unwrap()).unwrap()
    }

    fn names(set: &IndexSet<String>) -> Vec<&str> {
        let mut v: Vec<_> = set.iter().map(String::as_str).collect();
        v.sort();
        v
    }

    #[test]
    fn fresh_names() {
        let mut reg = NameRegistry::new();
        assert_eq!(reg.fresh(FreshKind::Choice), "_C1");
        let mut reg = NameRegistry::seeded(["_C1"]);
        assert_eq!(reg.fresh(FreshKind::Choice), "_C2");
        let mut reg = NameRegistry::new();
        assert_eq!(reg.fresh(FreshKind::Inner), "_S1");
        assert_eq!(reg.fresh(FreshKind::Inner), "_S2");
        assert!(reg.contains("_S2"));
    }

    #[test]
    fn basic_worked_example() {
        let doa = compile_text(corpus::BASIC);
        let mut expected = Doa::with_initial("begin");
        expected.add_method_edge("begin", MethodSig::new("void", "terminate", Vec::<String>::new()), END);
        expected.finals.insert(END.into());
        assert_eq!(doa, expected);
    }

    #[test]
    fn empty_protocol() {
        assert_eq!(compile_text("typestate empty {}"), Doa::end_only());
    }

    #[test]
    fn inline_state_gets_fresh_name() {
        let doa = compile_text("typestate t { a = { void m(): { void n(): end } } }");
        assert_eq!(names(&doa.external_states), ["_S1", "a", "end"]);
        let edges: Vec<_> = doa.method_transitions.iter().map(|e| (e.from.as_str(), e.sig.name.as_str(), e.to.as_str())).collect();
        assert_eq!(edges, [("a", "m", "_S1"), ("_S1", "n", "end")]);
        assert_eq!(names(&doa.finals), ["end"]);
    }

    #[test]
    fn fresh_names_avoid_declared_states() {
        let doa = compile_text("typestate t { a = { Boolean m(): <T: {void k(): _S1}> } _S1 = {} _C1 = {} }");
        assert_eq!(names(&doa.internal_states), ["_C2"]);
        assert!(doa.is_external("_S2"));
    }

    #[test]
    fn empty_targets_mean_end() {
        let doa = compile_text("typestate t { a = { void m(): {}, Boolean k(): <X: {}> } }");
        assert!(doa.method_transitions.iter().any(|e| e.sig.name == "m" && e.to == END));
        assert!(doa.result_transitions.iter().any(|e| e.label == "X" && e.to == END));
        assert_eq!(doa.external_states.len(), 2);
    }

    #[test]
    fn empty_named_state_is_final() {
        let doa = compile_text("typestate t { a = { void m(): b } b = {} }");
        assert_eq!(names(&doa.finals), ["b", "end"]);
        assert_eq!(doa.initial, "a");
    }

    #[test]
    fn invalid_ast_rejected() {
        let err = compile(&parse("typestate t { a = { void m(): b } }").unwrap()).unwrap_err();
        assert_eq!(err[0].code, Code::UndefinedState);
    }

    #[test]
    fn output_validates() {
        for (name, text) in corpus::ALL {
            let doa = compile_text(text);
            let diags = validate_doa(&doa);
            assert!(diags.iter().all(|d| d.code == Code::Unreachable && d.message.contains("`end`")), "{name}: {diags:?}");
        }
    }

    #[test]
    fn deterministic_output() {
        let text = "typestate t { a = { void m(): { Boolean n(): <A: {void z(): end}, B: a> } } }";
        let (x, y) = (compile_text(text), compile_text(text));
        assert_eq!(x, y);
        assert!(x.method_transitions.iter().eq(y.method_transitions.iter()));
    }
}
