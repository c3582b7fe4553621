//! LL(1) recursive-descent parser.
//!
//! Each nonterminal of the protocol grammar is one method. Every production
//! choice is made by [`Parser::decide`], which inspects exactly the current
//! token; the cursor only moves forward. [`ParseStats`] records both facts
//! so callers can check them.

use crate::diagnostic::{Code, Diagnostic};

use super::ast::*;
use super::lexer::{decode, tokenize, LexError, Token, TokenKind};

/// Nesting limit for inline states and choices.
pub const MAX_NESTING: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected {}, found {}", expected_list(.expected), .found.describe())]
pub struct ParseError {
    pub found: Token,
    pub expected: Vec<TokenKind>,
    pub note: Option<&'static str>,
}

fn expected_list(expected: &[TokenKind]) -> String {
    match expected {
        [] => "nothing".into(),
        [one] => one.to_string(),
        [init @ .., last] => {
            let init: Vec<_> = init.iter().map(ToString::to_string).collect();
            format!("{} or {last}", init.join(", "))
        }
    }
}

impl ParseError {
    pub fn to_diagnostic(&self) -> Diagnostic {
        let message = match self.note {
            Some(note) => format!("{self} ({note})"),
            None => self.to_string(),
        };
        Diagnostic::error(Code::Parse, message).at(self.found.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn to_diagnostic(&self) -> Diagnostic {
        match self {
            SyntaxError::Lex(e) => e.to_diagnostic(),
            SyntaxError::Parse(e) => e.to_diagnostic(),
        }
    }
}

/// Instrumentation collected during one parse.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseStats {
    /// Production choices made.
    pub decisions: usize,
    /// Largest number of tokens inspected by any single decision.
    pub max_lookahead: usize,
    /// Times the cursor moved backwards. Always zero.
    pub backtracks: usize,
    pub tokens_consumed: usize,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    stats: ParseStats,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            depth: 0,
            stats: ParseStats::default(),
        }
    }

    /// Token `k` places ahead of the cursor. Only `k = 0` is ever used.
    fn peek_nth(&mut self, k: usize) -> &Token {
        self.stats.max_lookahead = self.stats.max_lookahead.max(k + 1);
        let last = self.tokens.len() - 1;
        &self.tokens[(self.pos + k).min(last)]
    }

    fn decide(&mut self) -> TokenKind {
        self.stats.decisions += 1;
        self.peek_nth(0).kind
    }

    fn seek(&mut self, to: usize) {
        if to < self.pos {
            self.stats.backtracks += 1;
        }
        self.pos = to;
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.seek(self.pos + 1);
            self.stats.tokens_consumed += 1;
        }
        tok
    }

    fn error(&self, expected: &[TokenKind]) -> ParseError {
        ParseError {
            found: self.tokens[self.pos].clone(),
            expected: expected.to_vec(),
            note: None,
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        if self.peek_nth(0).kind == kind {
            Ok(self.bump())
        } else {
            Err(self.error(&[kind]))
        }
    }

    /// An unqualified identifier (names of protocols, states, methods, labels).
    fn name(&mut self) -> Result<Token, ParseError> {
        let tok = self.expect(TokenKind::Ident)?;
        if tok.text.contains('.') {
            return Err(ParseError {
                found: tok,
                expected: vec![TokenKind::Ident],
                note: Some("qualified names are only allowed for types"),
            });
        }
        Ok(tok)
    }

    fn type_name(&mut self) -> Result<Token, ParseError> {
        self.expect(TokenKind::Ident)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let mut err = self.error(&[]);
            err.note = Some("nesting too deep");
            return Err(err);
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    // T -> typestate name { TB }
    fn typestate(&mut self) -> Result<TypestateAst, ParseError> {
        self.expect(TokenKind::KwTypestate)?;
        let name = self.name()?.text;
        self.expect(TokenKind::LBrace)?;
        let mut states = Vec::new();
        // TB -> e | SDN TB
        loop {
            match self.decide() {
                TokenKind::RBrace => break,
                // `end` is accepted as a state name so validation can report it
                TokenKind::Ident | TokenKind::KwEnd => states.push(self.state_def()?),
                _ => return Err(self.error(&[TokenKind::Ident, TokenKind::RBrace])),
            }
        }
        self.expect(TokenKind::RBrace)?;
        self.expect(TokenKind::Eof)?;
        Ok(TypestateAst { name, states })
    }

    // SDN -> state = SD
    fn state_def(&mut self) -> Result<NamedStateDef, ParseError> {
        let tok = if self.peek_nth(0).kind == TokenKind::KwEnd {
            self.bump()
        } else {
            self.name()?
        };
        self.expect(TokenKind::Equals)?;
        let body = self.state_body()?;
        Ok(NamedStateDef {
            name: tok.text,
            body,
            loc: tok.start.into(),
        })
    }

    // SD -> { S };  S -> e | M SN;  SN -> e | , M SN
    fn state_body(&mut self) -> Result<StateBody, ParseError> {
        self.enter()?;
        self.expect(TokenKind::LBrace)?;
        let mut transitions = Vec::new();
        match self.decide() {
            TokenKind::RBrace => {}
            TokenKind::Ident => loop {
                transitions.push(self.method()?);
                match self.decide() {
                    TokenKind::Comma => {
                        self.bump();
                    }
                    TokenKind::RBrace => break,
                    _ => return Err(self.error(&[TokenKind::Comma, TokenKind::RBrace])),
                }
            },
            _ => return Err(self.error(&[TokenKind::Ident, TokenKind::RBrace])),
        }
        self.expect(TokenKind::RBrace)?;
        self.leave();
        Ok(StateBody { transitions })
    }

    // M -> type method ( A ) : W
    fn method(&mut self) -> Result<MethodTransition, ParseError> {
        let ret = self.type_name()?;
        let name = self.name()?;
        self.expect(TokenKind::LParen)?;
        let mut params = Vec::new();
        // A -> e | type AN;  AN -> e | , type AN
        match self.decide() {
            TokenKind::RParen => {}
            TokenKind::Ident => loop {
                params.push(self.type_name()?.text);
                match self.decide() {
                    TokenKind::Comma => {
                        self.bump();
                    }
                    TokenKind::RParen => break,
                    _ => return Err(self.error(&[TokenKind::Comma, TokenKind::RParen])),
                }
            },
            _ => return Err(self.error(&[TokenKind::Ident, TokenKind::RParen])),
        }
        self.expect(TokenKind::RParen)?;
        self.expect(TokenKind::Colon)?;
        let target = self.target()?;
        Ok(MethodTransition {
            sig: MethodSig {
                return_type: ret.text,
                name: name.text,
                params,
            },
            target,
            loc: ret.start.into(),
        })
    }

    // W -> end | SD | < O > | state
    fn target(&mut self) -> Result<Target, ParseError> {
        match self.decide() {
            TokenKind::KwEnd => {
                self.bump();
                Ok(Target::End)
            }
            TokenKind::LBrace => Ok(Target::Inline(self.state_body()?)),
            TokenKind::LAngle => Ok(Target::Choice(self.choice()?)),
            TokenKind::Ident => Ok(Target::Named(self.state_ref()?)),
            _ => Err(self.error(&[
                TokenKind::KwEnd,
                TokenKind::LBrace,
                TokenKind::LAngle,
                TokenKind::Ident,
            ])),
        }
    }

    fn state_ref(&mut self) -> Result<StateRef, ParseError> {
        let tok = self.name()?;
        Ok(StateRef {
            name: tok.text,
            loc: tok.start.into(),
        })
    }

    // < O >;  O -> L ON;  ON -> e | , O
    // `<>` is accepted here and reported later as an empty choice.
    fn choice(&mut self) -> Result<Vec<LabeledTarget>, ParseError> {
        self.enter()?;
        self.expect(TokenKind::LAngle)?;
        let mut options = Vec::new();
        match self.decide() {
            TokenKind::RAngle => {}
            TokenKind::Ident => loop {
                options.push(self.option()?);
                match self.decide() {
                    TokenKind::Comma => {
                        self.bump();
                    }
                    TokenKind::RAngle => break,
                    _ => return Err(self.error(&[TokenKind::Comma, TokenKind::RAngle])),
                }
            },
            _ => return Err(self.error(&[TokenKind::Ident, TokenKind::RAngle])),
        }
        self.expect(TokenKind::RAngle)?;
        self.leave();
        Ok(options)
    }

    // L -> label : LT;  LT -> end | state | SD
    fn option(&mut self) -> Result<LabeledTarget, ParseError> {
        let label = self.name()?;
        self.expect(TokenKind::Colon)?;
        let target = match self.decide() {
            TokenKind::KwEnd => {
                self.bump();
                OptionTarget::End
            }
            TokenKind::LBrace => OptionTarget::Inline(self.state_body()?),
            TokenKind::Ident => OptionTarget::Named(self.state_ref()?),
            _ => {
                return Err(self.error(&[TokenKind::KwEnd, TokenKind::LBrace, TokenKind::Ident]))
            }
        };
        Ok(LabeledTarget {
            label: label.text,
            target,
            loc: label.start.into(),
        })
    }
}

/// Parses protocol text, returning the tree together with parser statistics.
pub fn parse_with_stats(text: &str) -> (Result<TypestateAst, SyntaxError>, ParseStats) {
    let tokens = match tokenize(text) {
        Ok(tokens) => tokens,
        Err(e) => return (Err(e.into()), ParseStats::default()),
    };
    let mut parser = Parser::new(tokens);
    let result = parser.typestate().map_err(SyntaxError::from);
    (result, parser.stats)
}

pub fn parse(text: &str) -> Result<TypestateAst, SyntaxError> {
    parse_with_stats(text).0
}

/// Parses raw bytes; invalid UTF-8 is reported as a lexical error.
pub fn parse_bytes(bytes: &[u8]) -> Result<TypestateAst, SyntaxError> {
    parse(decode(bytes)?)
}
