//! Deterministic object automata.
//!
//! A [`Doa`] has external-choice states (the client picks a method) and
//! internal-choice states (the object picks a result label). Sets keep
//! insertion order so that output derived from an automaton is stable, but
//! equality is set equality.

mod equiv;
mod validate;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use indexmap::IndexSet;

use crate::diagnostic::{Code, Diagnostic};
use crate::syntax::MethodSig;

pub use equiv::{distinguishing_word, equivalent, equivalent_with, Observation};
pub use validate::{validate_doa, validate_doa_with, ValidationMode};

pub type StateName = String;

/// The reserved terminal state every protocol implicitly defines.
pub const END: &str = "end";

/// A letter of the automaton alphabet: a method or a result label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Method(MethodSig),
    Label(String),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Method(sig) => sig.fmt(f),
            Symbol::Label(l) => f.write_str(l),
        }
    }
}

impl From<MethodSig> for Symbol {
    fn from(sig: MethodSig) -> Symbol {
        Symbol::Method(sig)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            s.fmt(f)?;
        }
        Ok(())
    }
}

/// A method-call transition `from --sig--> to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MethodEdge {
    pub from: StateName,
    pub sig: MethodSig,
    pub to: StateName,
}

impl fmt::Display for MethodEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --{}--> {}", self.from, self.sig, self.to)
    }
}

/// A result transition `from --label--> to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResultEdge {
    pub from: StateName,
    pub label: String,
    pub to: StateName,
}

impl fmt::Display for ResultEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --{}--> {}", self.from, self.label, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Doa {
    pub external_states: IndexSet<StateName>,
    pub internal_states: IndexSet<StateName>,
    pub methods: IndexSet<MethodSig>,
    pub labels: IndexSet<String>,
    pub initial: StateName,
    pub finals: IndexSet<StateName>,
    pub method_transitions: IndexSet<MethodEdge>,
    pub result_transitions: IndexSet<ResultEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Reached(StateName),
    /// No transition for symbol number `after` (0-based) from state `at`.
    Stuck { after: usize, at: StateName },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("unknown state `{0}`")]
    UnknownState(StateName),
    #[error("automaton is not well formed ({} error(s))", .0.len())]
    Invalid(Vec<Diagnostic>),
}

impl Doa {
    /// An automaton with a single external state that is both initial and
    /// final, and nothing else.
    pub fn single(state: impl Into<StateName>) -> Doa {
        let state = state.into();
        Doa {
            external_states: IndexSet::from([state.clone()]),
            internal_states: IndexSet::new(),
            methods: IndexSet::new(),
            labels: IndexSet::new(),
            initial: state.clone(),
            finals: IndexSet::from([state]),
            method_transitions: IndexSet::new(),
            result_transitions: IndexSet::new(),
        }
    }

    /// `⟨{end}, {}, {}, {}, end, {end}, {}, {}⟩`, the automaton of an empty protocol.
    pub fn end_only() -> Doa {
        Doa::single(END)
    }

    /// An automaton with one non-final initial state and no transitions.
    pub fn with_initial(state: impl Into<StateName>) -> Doa {
        let mut doa = Doa::single(state);
        doa.finals.clear();
        doa
    }

    /// Adds a method transition, declaring both endpoints as external
    /// states if they are not yet known and the signature as a method.
    pub fn add_method_edge(&mut self, from: &str, sig: MethodSig, to: &str) -> &mut Self {
        for s in [from, to] {
            if !self.internal_states.contains(s) {
                self.external_states.insert(s.to_owned());
            }
        }
        self.methods.insert(sig.clone());
        self.method_transitions.insert(MethodEdge {
            from: from.to_owned(),
            sig,
            to: to.to_owned(),
        });
        self
    }

    /// Adds a result transition, declaring `from` as an internal state.
    pub fn add_result_edge(&mut self, from: &str, label: &str, to: &str) -> &mut Self {
        self.external_states.shift_remove(from);
        self.internal_states.insert(from.to_owned());
        if !self.internal_states.contains(to) {
            self.external_states.insert(to.to_owned());
        }
        self.labels.insert(label.to_owned());
        self.result_transitions.insert(ResultEdge {
            from: from.to_owned(),
            label: label.to_owned(),
            to: to.to_owned(),
        });
        self
    }

    pub fn is_external(&self, state: &str) -> bool {
        self.external_states.contains(state)
    }

    pub fn is_internal(&self, state: &str) -> bool {
        self.internal_states.contains(state)
    }

    pub fn is_state(&self, state: &str) -> bool {
        self.is_external(state) || self.is_internal(state)
    }

    pub fn is_final(&self, state: &str) -> bool {
        self.finals.contains(state)
    }

    pub fn method_edges_from<'a>(&'a self, state: &'a str) -> impl Iterator<Item = &'a MethodEdge> {
        self.method_transitions.iter().filter(move |e| e.from == state)
    }

    pub fn result_edges_from<'a>(&'a self, state: &'a str) -> impl Iterator<Item = &'a ResultEdge> {
        self.result_transitions.iter().filter(move |e| e.from == state)
    }

    /// A final external state without outgoing method transitions.
    pub fn is_final_sink(&self, state: &str) -> bool {
        self.is_final(state) && self.is_external(state) && self.method_edges_from(state).next().is_none()
    }

    /// Single transition step. `None` when no transition exists or the
    /// symbol kind does not match the state kind.
    pub fn step(&self, from: &str, symbol: &Symbol) -> Result<Option<&StateName>, AutomatonError> {
        if !self.is_state(from) {
            return Err(AutomatonError::UnknownState(from.to_owned()));
        }
        Ok(match symbol {
            Symbol::Method(sig) if self.is_external(from) => self
                .method_transitions
                .iter()
                .find(|e| e.from == from && &e.sig == sig)
                .map(|e| &e.to),
            Symbol::Label(label) if self.is_internal(from) => self
                .result_transitions
                .iter()
                .find(|e| e.from == from && &e.label == label)
                .map(|e| &e.to),
            _ => None,
        })
    }

    /// Iterated transition function over a word.
    pub fn run(&self, from: &str, word: &[Symbol]) -> Result<RunOutcome, AutomatonError> {
        let mut at: &str = from;
        if !self.is_state(at) {
            return Err(AutomatonError::UnknownState(at.to_owned()));
        }
        for (i, symbol) in word.iter().enumerate() {
            match self.step(at, symbol)? {
                Some(next) => at = next,
                None => {
                    return Ok(RunOutcome::Stuck {
                        after: i,
                        at: at.to_owned(),
                    })
                }
            }
        }
        Ok(RunOutcome::Reached(at.to_owned()))
    }

    /// Componentwise union keeping `self`'s initial state.
    pub fn union(&self, other: &Doa) -> Result<Doa, Diagnostic> {
        let mut merged = self.clone();
        merged.absorb(other)?;
        Ok(merged)
    }

    /// In-place form of [`Doa::union`]. On conflict `self` is left unchanged.
    pub fn absorb(&mut self, other: &Doa) -> Result<(), Diagnostic> {
        let conflict = |msg: String| Err(Diagnostic::error(Code::UnionConflict, msg));
        for s in &other.external_states {
            if self.internal_states.contains(s) {
                return conflict(format!("state `{s}` is external in one operand and internal in the other"));
            }
        }
        for s in &other.internal_states {
            if self.external_states.contains(s) {
                return conflict(format!("state `{s}` is external in one operand and internal in the other"));
            }
        }
        for e in &other.method_transitions {
            if let Some(clash) = self
                .method_transitions
                .iter()
                .find(|d| d.from == e.from && d.sig == e.sig && d.to != e.to)
            {
                return conflict(format!("`{clash}` and `{e}` make the union nondeterministic"));
            }
        }
        for e in &other.result_transitions {
            if let Some(clash) = self
                .result_transitions
                .iter()
                .find(|d| d.from == e.from && d.label == e.label && d.to != e.to)
            {
                return conflict(format!("`{clash}` and `{e}` make the union nondeterministic"));
            }
        }
        self.external_states.extend(other.external_states.iter().cloned());
        self.internal_states.extend(other.internal_states.iter().cloned());
        self.methods.extend(other.methods.iter().cloned());
        self.labels.extend(other.labels.iter().cloned());
        self.finals.extend(other.finals.iter().cloned());
        self.method_transitions.extend(other.method_transitions.iter().cloned());
        self.result_transitions.extend(other.result_transitions.iter().cloned());
        Ok(())
    }

    /// States reachable from the initial state, in breadth-first order.
    /// Edges into undeclared states are ignored.
    pub fn reachable(&self) -> IndexSet<StateName> {
        let mut seen = IndexSet::new();
        if !self.is_state(&self.initial) {
            return seen;
        }
        let mut queue = VecDeque::from([self.initial.as_str()]);
        seen.insert(self.initial.clone());
        while let Some(state) = queue.pop_front() {
            let next = self
                .method_edges_from(state)
                .map(|e| e.to.as_str())
                .chain(self.result_edges_from(state).map(|e| e.to.as_str()));
            for to in next {
                if self.is_state(to) && seen.insert(to.to_owned()) {
                    queue.push_back(to);
                }
            }
        }
        seen
    }

    /// Every state name, external first.
    pub fn states(&self) -> impl Iterator<Item = &StateName> {
        self.external_states.iter().chain(self.internal_states.iter())
    }

    pub fn state_count(&self) -> usize {
        self.external_states.len() + self.internal_states.len()
    }

    /// The alphabet actually used or declared, as symbols.
    pub fn alphabet(&self) -> HashSet<Symbol> {
        self.methods
            .iter()
            .cloned()
            .map(Symbol::Method)
            .chain(self.labels.iter().cloned().map(Symbol::Label))
            .chain(self.method_transitions.iter().map(|e| Symbol::Method(e.sig.clone())))
            .chain(self.result_transitions.iter().map(|e| Symbol::Label(e.label.clone())))
            .collect()
    }
}
