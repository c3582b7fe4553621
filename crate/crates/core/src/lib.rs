//! Translation between Mungo typestate protocols and deterministic object
//! automata (DOAs).
//!
//! ```
//! use typestate_core::{compile, decompile, syntax};
//!
//! let ast = syntax::parse("typestate basic { begin = { void terminate(): end } }").unwrap();
//! let doa = compile::compile(&ast).unwrap();
//! assert_eq!(doa.state_count(), 2);
//! let back = decompile::decompile("basic", &doa).unwrap();
//! assert_eq!(syntax::render(&back), "typestate basic {\n    begin = { void terminate(): end }\n}");
//! ```

pub mod automaton;
pub mod batch;
pub mod compile;
pub mod corpus;
pub mod decompile;
pub mod diagnostic;
pub mod generate;
pub mod interchange;
pub mod pipeline;
pub mod syntax;

pub use automaton::{Doa, Observation};
pub use diagnostic::{Code, Diagnostic, Severity};
