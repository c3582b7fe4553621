//! Language equivalence of automata.
//!
//! Both automata are completed with a non-accepting sink for missing
//! transitions and explored synchronously from their initial states. Only
//! symbols and what a word leads to are observable; state names are not.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::diagnostic::has_errors;

use super::{validate_doa, AutomatonError, Doa, Symbol, Word};

/// What a word is allowed to tell apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Observation {
    /// Whether the run is stuck, alive in a non-final state, or in a final
    /// state. Equal observations on every word means equal trace sets and
    /// equal accepted sets.
    #[default]
    Traces,
    /// Only whether the run ends in a final state.
    Accepting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Verdict {
    Dead,
    Live,
    Final,
}

/// Dense, completed form of an automaton over a shared alphabet. The last
/// state is the sink.
struct Table {
    next: Vec<Vec<usize>>,
    verdict: Vec<Verdict>,
    initial: usize,
}

impl Table {
    fn build(doa: &Doa, alphabet: &[Symbol]) -> Table {
        let names: Vec<&str> = doa.states().map(String::as_str).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let sink = names.len();
        let symbol_index: HashMap<&Symbol, usize> = alphabet.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut next = vec![vec![sink; alphabet.len()]; names.len() + 1];
        for e in &doa.method_transitions {
            if let (Some(&from), Some(&to)) = (index.get(e.from.as_str()), index.get(e.to.as_str())) {
                if doa.is_external(&e.from) {
                    next[from][symbol_index[&Symbol::Method(e.sig.clone())]] = to;
                }
            }
        }
        for e in &doa.result_transitions {
            if let (Some(&from), Some(&to)) = (index.get(e.from.as_str()), index.get(e.to.as_str())) {
                if doa.is_internal(&e.from) {
                    next[from][symbol_index[&Symbol::Label(e.label.clone())]] = to;
                }
            }
        }
        let mut verdict: Vec<Verdict> = names
            .iter()
            .map(|n| if doa.is_final(n) { Verdict::Final } else { Verdict::Live })
            .collect();
        verdict.push(Verdict::Dead);
        Table {
            next,
            verdict,
            initial: index[doa.initial.as_str()],
        }
    }

    fn observe(&self, state: usize, observation: Observation) -> Verdict {
        match (observation, self.verdict[state]) {
            (Observation::Accepting, Verdict::Live) => Verdict::Dead,
            (_, v) => v,
        }
    }
}

fn shared_alphabet(a: &Doa, b: &Doa) -> Vec<Symbol> {
    let mut symbols: Vec<Symbol> = a.alphabet().union(&b.alphabet()).cloned().collect();
    symbols.sort_by_cached_key(|s| (s.to_string(), s.clone()));
    symbols
}

fn check(doa: &Doa) -> Result<(), AutomatonError> {
    let diags = validate_doa(doa);
    if has_errors(&diags) {
        Err(AutomatonError::Invalid(diags))
    } else {
        Ok(())
    }
}

/// Union-find over the disjoint union of both state sets.
struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    fn new(n: usize) -> Self {
        Partition {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `x` and `y` were already merged.
    fn merge(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        true
    }
}

pub fn equivalent(a: &Doa, b: &Doa) -> Result<bool, AutomatonError> {
    equivalent_with(a, b, Observation::Traces)
}

/// Decides equivalence by merging state pairs that must behave alike
/// (Hopcroft–Karp) and failing on the first pair with different
/// observations.
pub fn equivalent_with(a: &Doa, b: &Doa, observation: Observation) -> Result<bool, AutomatonError> {
    check(a)?;
    check(b)?;
    let alphabet = shared_alphabet(a, b);
    let (ta, tb) = (Table::build(a, &alphabet), Table::build(b, &alphabet));
    let offset = ta.next.len();
    let mut partition = Partition::new(offset + tb.next.len());
    let mut queue = VecDeque::from([(ta.initial, tb.initial)]);
    partition.merge(ta.initial, offset + tb.initial);
    while let Some((p, q)) = queue.pop_front() {
        if ta.observe(p, observation) != tb.observe(q, observation) {
            return Ok(false);
        }
        for sym in 0..alphabet.len() {
            let (p2, q2) = (ta.next[p][sym], tb.next[q][sym]);
            if partition.merge(p2, offset + q2) {
                queue.push_back((p2, q2));
            }
        }
    }
    Ok(true)
}

/// A shortest word on which the two automata observe differently, or
/// `None` if they are equivalent. Ties between words of equal length go
/// to the one whose symbols come first in text order.
pub fn distinguishing_word(a: &Doa, b: &Doa, observation: Observation) -> Result<Option<Word>, AutomatonError> {
    check(a)?;
    check(b)?;
    let alphabet = shared_alphabet(a, b);
    let (ta, tb) = (Table::build(a, &alphabet), Table::build(b, &alphabet));
    let start = (ta.initial, tb.initial);
    let mut parent: HashMap<(usize, usize), ((usize, usize), usize)> = HashMap::new();
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let differs = |(p, q): (usize, usize)| ta.observe(p, observation) != tb.observe(q, observation);
    let mut found = differs(start).then_some(start);
    while found.is_none() {
        let Some(pair) = queue.pop_front() else {
            return Ok(None);
        };
        for sym in 0..alphabet.len() {
            let child = (ta.next[pair.0][sym], tb.next[pair.1][sym]);
            if seen.insert(child) {
                parent.insert(child, (pair, sym));
                if differs(child) {
                    found = Some(child);
                    break;
                }
                queue.push_back(child);
            }
        }
    }
    let mut word = Vec::new();
    let mut at = found.unwrap_or(start);
    while let Some(&(prev, sym)) = parent.get(&at) {
        word.push(alphabet[sym].clone());
        at = prev;
    }
    word.reverse();
    Ok(Some(Word(word)))
}
