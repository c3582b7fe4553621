//! Random protocols and automata for property tests, fuzzing and benches.
//!
//! Name pools are deliberately small so that generated pairs share
//! symbols, and they include names of the `_S<k>`/`_C<k>` form to exercise
//! fresh-name avoidance.

use rand::seq::{index, IndexedRandom, SliceRandom};
use rand::Rng;

use crate::automaton::{Doa, MethodEdge, StateName};
use crate::syntax::{
    LabeledTarget, Loc, MethodSig, MethodTransition, NamedStateDef, OptionTarget, StateBody, StateRef, Target,
    TypestateAst,
};

const STATE_POOL: [&str; 9] = ["Idle", "Busy", "a", "b", "c", "_S1", "_C2", "s0", "Done"];
const METHOD_POOL: [&str; 6] = ["m", "n", "go", "stop", "check", "reset"];
const TYPE_POOL: [&str; 4] = ["void", "Boolean", "int", "java.lang.String"];
const LABEL_POOL: [&str; 4] = ["Yes", "No", "OK", "FAIL"];

/// Size limits for [`random_ast`].
#[derive(Debug, Clone, Copy)]
pub struct AstShape {
    pub max_states: usize,
    pub max_transitions: usize,
    pub max_options: usize,
    /// How deep inline bodies may nest.
    pub max_depth: usize,
}

impl Default for AstShape {
    fn default() -> Self {
        AstShape {
            max_states: 6,
            max_transitions: 4,
            max_options: 3,
            max_depth: 2,
        }
    }
}

/// A protocol that passes validation. The first state always has at least
/// one transition, so the protocol can be decompiled back.
pub fn random_ast<R: Rng + ?Sized>(rng: &mut R, shape: AstShape) -> TypestateAst {
    let n = rng.random_range(0..=shape.max_states.min(STATE_POOL.len()));
    let names: Vec<String> = index::sample(rng, STATE_POOL.len(), n)
        .into_iter()
        .map(|i| STATE_POOL[i].to_owned())
        .collect();
    let states = names
        .iter()
        .enumerate()
        .map(|(i, name)| NamedStateDef {
            name: name.clone(),
            body: random_body(rng, &shape, &names, 0, i == 0),
            loc: Loc::default(),
        })
        .collect();
    TypestateAst {
        name: "Generated".to_owned(),
        states,
    }
}

fn random_sig<R: Rng + ?Sized>(rng: &mut R, name: &str) -> MethodSig {
    let params: Vec<String> = (0..rng.random_range(0..=2))
        .map(|_| TYPE_POOL[rng.random_range(1..TYPE_POOL.len())].to_owned())
        .collect();
    MethodSig::new(*TYPE_POOL.choose(rng).unwrap(), name, params)
}

fn random_body<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &AstShape,
    names: &[String],
    depth: usize,
    non_empty: bool,
) -> StateBody {
    let lo = usize::from(non_empty);
    let k = rng.random_range(lo..=shape.max_transitions.max(lo).min(METHOD_POOL.len()));
    let transitions = index::sample(rng, METHOD_POOL.len(), k)
        .into_iter()
        .map(|i| {
            let sig = random_sig(rng, METHOD_POOL[i]);
            let target = match rng.random_range(0..4) {
                0 => Target::End,
                1 if !names.is_empty() => Target::Named(StateRef::new(names.choose(rng).unwrap().as_str())),
                2 if depth < shape.max_depth => Target::Inline(random_body(rng, shape, names, depth + 1, false)),
                3 => Target::Choice(random_options(rng, shape, names, depth)),
                _ => Target::End,
            };
            MethodTransition {
                sig,
                target,
                loc: Loc::default(),
            }
        })
        .collect();
    StateBody { transitions }
}

fn random_options<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &AstShape,
    names: &[String],
    depth: usize,
) -> Vec<LabeledTarget> {
    let k = rng.random_range(1..=shape.max_options.clamp(1, LABEL_POOL.len()));
    index::sample(rng, LABEL_POOL.len(), k)
        .into_iter()
        .map(|i| {
            let target = match rng.random_range(0..3) {
                1 if !names.is_empty() => OptionTarget::Named(StateRef::new(names.choose(rng).unwrap().as_str())),
                2 if depth < shape.max_depth => OptionTarget::Inline(random_body(rng, shape, names, depth + 1, false)),
                _ => OptionTarget::End,
            };
            LabeledTarget {
                label: LABEL_POOL[i].to_owned(),
                target,
                loc: Loc::default(),
            }
        })
        .collect()
}

/// Size limits for [`random_doa`].
#[derive(Debug, Clone, Copy)]
pub struct DoaShape {
    pub max_external: usize,
    pub max_internal: usize,
    /// Distinct method signatures to draw from.
    pub methods: usize,
    pub labels: usize,
}

impl Default for DoaShape {
    fn default() -> Self {
        DoaShape {
            max_external: 5,
            max_internal: 2,
            methods: 3,
            labels: 2,
        }
    }
}

fn sig_pool(n: usize) -> Vec<MethodSig> {
    (0..n)
        .map(|i| MethodSig::new("void", METHOD_POOL[i % METHOD_POOL.len()], Vec::<String>::new()))
        .collect()
}

/// A well-formed automaton with states `s0..` (external) and `c0..`
/// (internal). Final states are chosen freely, so the result need not be
/// expressible as a protocol.
pub fn random_doa<R: Rng + ?Sized>(rng: &mut R, shape: DoaShape) -> Doa {
    let ext: Vec<StateName> = (0..rng.random_range(1..=shape.max_external.max(1))).map(|i| format!("s{i}")).collect();
    let int: Vec<StateName> = (0..rng.random_range(0..=shape.max_internal)).map(|i| format!("c{i}")).collect();
    let sigs = sig_pool(shape.methods.clamp(1, METHOD_POOL.len()));
    let labels = &LABEL_POOL[..shape.labels.clamp(1, LABEL_POOL.len())];

    let mut doa = Doa::with_initial(ext[0].as_str());
    for s in &ext {
        doa.external_states.insert(s.clone());
        if rng.random_bool(0.3) {
            doa.finals.insert(s.clone());
        }
    }
    for c in &int {
        doa.internal_states.insert(c.clone());
    }
    for s in &ext {
        for sig in &sigs {
            if rng.random_bool(0.5) {
                let to = if !int.is_empty() && rng.random_bool(0.3) {
                    int.choose(rng).unwrap()
                } else {
                    ext.choose(rng).unwrap()
                };
                doa.add_method_edge(s, sig.clone(), to);
            }
        }
    }
    for c in &int {
        let k = rng.random_range(1..=labels.len());
        for i in index::sample(rng, labels.len(), k) {
            doa.add_result_edge(c, labels[i], ext.choose(rng).unwrap());
        }
    }
    doa
}

/// A random automaton adjusted so that it can be decompiled: final states
/// are exactly the external states without transitions, and the initial
/// state has a transition.
pub fn random_decompilable_doa<R: Rng + ?Sized>(rng: &mut R, shape: DoaShape) -> Doa {
    let mut doa = random_doa(rng, shape);
    if doa.method_edges_from(&doa.initial).next().is_none() {
        let initial = doa.initial.clone();
        let sig = doa.methods.first().cloned().unwrap_or_else(|| sig_pool(1).remove(0));
        let to = doa.external_states.get_index(rng.random_range(0..doa.external_states.len())).unwrap().clone();
        doa.add_method_edge(&initial, sig, &to);
    }
    let sinks: Vec<StateName> = doa
        .external_states
        .iter()
        .filter(|s| doa.method_edges_from(s).next().is_none())
        .cloned()
        .collect();
    doa.finals = sinks.into_iter().collect();
    doa
}

/// Renames every state to `r<k>` under a random permutation. The result is
/// equivalent to the input.
pub fn rename_states<R: Rng + ?Sized>(rng: &mut R, doa: &Doa) -> Doa {
    let mut names: Vec<&StateName> = doa.states().collect();
    names.shuffle(rng);
    let map: std::collections::HashMap<&str, String> =
        names.iter().enumerate().map(|(i, s)| (s.as_str(), format!("r{i}"))).collect();
    let r = |s: &StateName| map.get(s.as_str()).cloned().unwrap_or_else(|| s.clone());
    Doa {
        external_states: doa.external_states.iter().map(r).collect(),
        internal_states: doa.internal_states.iter().map(r).collect(),
        methods: doa.methods.clone(),
        labels: doa.labels.clone(),
        initial: r(&doa.initial),
        finals: doa.finals.iter().map(r).collect(),
        method_transitions: doa
            .method_transitions
            .iter()
            .map(|e| MethodEdge {
                from: r(&e.from),
                sig: e.sig.clone(),
                to: r(&e.to),
            })
            .collect(),
        result_transitions: doa
            .result_transitions
            .iter()
            .map(|e| crate::automaton::ResultEdge {
                from: r(&e.from),
                label: e.label.clone(),
                to: r(&e.to),
            })
            .collect(),
    }
}

/// Copies one external state and points some of its incoming method edges
/// at the copy. The result is equivalent to the input.
pub fn unfold<R: Rng + ?Sized>(rng: &mut R, doa: &Doa) -> Doa {
    let mut out = doa.clone();
    let Some(state) = doa.external_states.iter().collect::<Vec<_>>().choose(rng).map(|s| s.to_string()) else {
        return out;
    };
    let copy = (0..).map(|k| format!("{state}_{k}")).find(|n| !doa.is_state(n)).unwrap();
    out.external_states.insert(copy.clone());
    if doa.is_final(&state) {
        out.finals.insert(copy.clone());
    }
    for e in doa.method_edges_from(&state) {
        let to = if e.to == state { copy.clone() } else { e.to.clone() };
        out.add_method_edge(&copy, e.sig.clone(), &to);
    }
    out.method_transitions = out
        .method_transitions
        .into_iter()
        .map(|e| {
            if e.to == state && e.from != copy && rng.random_bool(0.5) {
                MethodEdge { to: copy.clone(), ..e }
            } else {
                e
            }
        })
        .collect();
    out
}

/// A small random edit: retarget, drop or add one method edge, or flip
/// whether one state is final. The result may or may not be equivalent.
pub fn mutate<R: Rng + ?Sized>(rng: &mut R, doa: &Doa) -> Doa {
    let mut out = doa.clone();
    let ext: Vec<StateName> = doa.external_states.iter().cloned().collect();
    match rng.random_range(0..4) {
        0 if !out.method_transitions.is_empty() => {
            let i = rng.random_range(0..out.method_transitions.len());
            let e = out.method_transitions.shift_remove_index(i).unwrap();
            let to = ext.choose(rng).unwrap().clone();
            out.method_transitions.shift_insert(i, MethodEdge { to, ..e });
        }
        1 if !out.method_transitions.is_empty() => {
            let i = rng.random_range(0..out.method_transitions.len());
            out.method_transitions.shift_remove_index(i);
        }
        2 => {
            let from = ext.choose(rng).unwrap().clone();
            let sig = MethodSig::new("void", *METHOD_POOL.choose(rng).unwrap(), Vec::<String>::new());
            if out.method_edges_from(&from).all(|e| e.sig.call_key() != sig.call_key()) {
                let to = ext.choose(rng).unwrap().clone();
                out.add_method_edge(&from, sig, &to);
            }
        }
        _ => {
            let s = ext.choose(rng).unwrap().clone();
            if !out.finals.shift_remove(&s) {
                out.finals.insert(s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    use super::*;
    use crate::automaton::{equivalent, validate_doa, validate_doa_with, ValidationMode};
    use crate::diagnostic::has_errors;
    use crate::syntax::validate_ast;

    #[test]
    fn asts_are_valid_and_start_non_empty() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..500 {
            let ast = random_ast(&mut rng, AstShape::default());
            assert!(!has_errors(&validate_ast(&ast)), "{ast:?}");
            if let Some(first) = ast.states.first() {
                assert!(!first.body.transitions.is_empty());
            }
        }
    }

    #[test]
    fn doas_are_valid() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..500 {
            let doa = random_doa(&mut rng, DoaShape::default());
            assert!(!has_errors(&validate_doa(&doa)), "{doa:?}");
            let d = random_decompilable_doa(&mut rng, DoaShape::default());
            assert!(!has_errors(&validate_doa_with(&d, ValidationMode::Decompile)), "{d:?}");
            assert!(!has_errors(&validate_doa(&mutate(&mut rng, &doa))));
        }
    }

    #[test]
    fn rename_and_unfold_preserve_equivalence() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let doa = random_doa(&mut rng, DoaShape::default());
            assert!(equivalent(&doa, &rename_states(&mut rng, &doa)).unwrap());
            assert!(equivalent(&doa, &unfold(&mut rng, &doa)).unwrap());
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_ast(&mut StdRng::seed_from_u64(9), AstShape::default());
        let b = random_ast(&mut StdRng::seed_from_u64(9), AstShape::default());
        assert_eq!(a, b);
    }
}
