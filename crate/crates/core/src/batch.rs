//! Bulk translation and checking.
//!
//! With the `parallel` feature (on by default) [`map`] spreads work over the
//! rayon thread pool; without it, or through [`map_sequential`], items are
//! processed in order on the calling thread. Results always come back in
//! input order.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::automaton::{equivalent_with, AutomatonError, Doa, Observation};
use crate::compile::compile;
use crate::decompile::decompile;
use crate::generate::{random_ast, AstShape};
use crate::syntax::{parse, parse_bytes, render, TypestateAst};

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// What happened to one protocol on the way protocol → automaton →
/// protocol text → automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundTrip {
    /// Both automata accept the same traces.
    Preserved,
    /// The automata differ.
    Changed,
    /// Some stage failed; the message says which.
    Failed(String),
}

pub fn round_trip(ast: &TypestateAst) -> RoundTrip {
    let first = match compile(ast) {
        Ok(d) => d,
        Err(e) => return RoundTrip::Failed(format!("compile: {} diagnostic(s)", e.len())),
    };
    let back = match decompile(&ast.name, &first) {
        Ok(a) => a,
        Err(e) => return RoundTrip::Failed(format!("decompile: {}", e[0])),
    };
    let reparsed = match parse(&render(&back)) {
        Ok(a) => a,
        Err(e) => return RoundTrip::Failed(format!("reparse: {}", e.to_diagnostic())),
    };
    let second = match compile(&reparsed) {
        Ok(d) => d,
        Err(e) => return RoundTrip::Failed(format!("recompile: {}", e[0])),
    };
    match equivalent_with(&first, &second, Observation::Traces) {
        Ok(true) => RoundTrip::Preserved,
        Ok(false) => RoundTrip::Changed,
        Err(e) => RoundTrip::Failed(format!("equivalence: {e}")),
    }
}

/// `count` random protocols; protocol `i` depends only on `seed` and `i`.
pub fn generate_asts(seed: u64, count: usize, shape: AstShape) -> Vec<TypestateAst> {
    let indices: Vec<u64> = (0..count as u64).collect();
    map(&indices, |&i| {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        random_ast(&mut rng, shape)
    })
}

pub fn round_trip_all(asts: &[TypestateAst]) -> Vec<RoundTrip> {
    map(asts, round_trip)
}

pub fn round_trip_all_sequential(asts: &[TypestateAst]) -> Vec<RoundTrip> {
    map_sequential(asts, round_trip)
}

pub fn equivalence_verdicts(pairs: &[(Doa, Doa)], observation: Observation) -> Vec<Result<bool, AutomatonError>> {
    map(pairs, |(a, b)| equivalent_with(a, b, observation))
}

/// Result of feeding one input to the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseOutcome {
    Accepted,
    Rejected,
    /// The parser panicked, with the panic message if it was a string.
    Panicked(String),
}

pub fn parse_outcome(input: &[u8]) -> ParseOutcome {
    match catch_unwind(AssertUnwindSafe(|| parse_bytes(input).is_ok())) {
        Ok(true) => ParseOutcome::Accepted,
        Ok(false) => ParseOutcome::Rejected,
        Err(payload) => ParseOutcome::Panicked(
            payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_default(),
        ),
    }
}

pub fn parse_outcomes(inputs: &[Vec<u8>]) -> Vec<ParseOutcome> {
    map(inputs, |i| parse_outcome(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_round_trips() {
        let asts: Vec<_> = corpus::ALL.iter().map(|(_, t)| parse(t).unwrap()).collect();
        assert!(round_trip_all(&asts).iter().all(|r| *r == RoundTrip::Preserved));
    }

    #[test]
    fn parallel_matches_sequential() {
        let asts = generate_asts(7, 64, AstShape::default());
        assert_eq!(round_trip_all(&asts), round_trip_all_sequential(&asts));
        assert_eq!(generate_asts(7, 64, AstShape::default()), asts);
    }

    #[test]
    fn parse_outcomes_classify() {
        let inputs = vec![corpus::BASIC.as_bytes().to_vec(), b"typestate".to_vec(), vec![0xff, 0xfe]];
        assert_eq!(
            parse_outcomes(&inputs),
            [ParseOutcome::Accepted, ParseOutcome::Rejected, ParseOutcome::Rejected]
        );
    }
}
