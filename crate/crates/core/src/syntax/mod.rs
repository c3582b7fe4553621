//! Mungo typestate protocols: lexing, LL(1) parsing, canonical rendering
//! and structural validation.

mod ast;
mod lexer;
mod parser;
mod render;
mod validate;

pub use ast::*;
pub use lexer::{decode, tokenize, LexError, Token, TokenKind};
pub use parser::{
    parse, parse_bytes, parse_with_stats, ParseError, ParseStats, SyntaxError, MAX_NESTING,
};
pub use render::render;
pub use validate::validate_ast;
