use std::fmt;

use crate::diagnostic::{Code, Diagnostic};

use super::ast::{is_ident_continue, is_ident_start, SourcePos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    KwTypestate,
    KwEnd,
    Ident,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    LParen,
    RParen,
    Colon,
    Comma,
    Equals,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TokenKind::KwTypestate => "`typestate`",
            TokenKind::KwEnd => "`end`",
            TokenKind::Ident => "identifier",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::LAngle => "`<`",
            TokenKind::RAngle => "`>`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::Colon => "`:`",
            TokenKind::Comma => "`,`",
            TokenKind::Equals => "`=`",
            TokenKind::Eof => "end of input",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub start: SourcePos,
    pub end: SourcePos,
}

impl Token {
    pub fn describe(&self) -> String {
        match self.kind {
            TokenKind::Ident => format!("identifier `{}`", self.text),
            kind => kind.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexError {
    #[error("unexpected character `{ch}`")]
    UnexpectedChar { ch: char, pos: SourcePos },
    #[error("unterminated block comment")]
    UnterminatedComment { pos: SourcePos },
    #[error("input is not valid UTF-8")]
    InvalidUtf8 { pos: SourcePos },
}

impl LexError {
    pub fn pos(&self) -> SourcePos {
        match self {
            LexError::UnexpectedChar { pos, .. }
            | LexError::UnterminatedComment { pos }
            | LexError::InvalidUtf8 { pos } => *pos,
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(Code::Lex, self.to_string()).at(self.pos())
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: SourcePos,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos.offset..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_second(&self) -> Option<char> {
        self.rest().chars().nth(1)
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.peek()?;
        self.pos.advance(ch);
        Some(ch)
    }

    fn skip_trivia(&mut self) -> Result<(), LexError> {
        loop {
            match (self.peek(), self.peek_second()) {
                (Some(c), _) if c.is_whitespace() => {
                    self.bump();
                }
                (Some('/'), Some('/')) => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                (Some('/'), Some('*')) => {
                    let start = self.pos;
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            None => return Err(LexError::UnterminatedComment { pos: start }),
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn identifier(&mut self) {
        self.bump();
        loop {
            match self.peek() {
                Some(c) if is_ident_continue(c) => {
                    self.bump();
                }
                // qualified type names: `a.b.C`
                Some('.') if self.peek_second().is_some_and(is_ident_start) => {
                    self.bump();
                    self.bump();
                }
                _ => return,
            }
        }
    }
}

/// Splits protocol text into tokens. The last token is always `Eof`.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let mut cursor = Cursor {
        text,
        pos: SourcePos::START,
    };
    let mut tokens = Vec::new();
    loop {
        cursor.skip_trivia()?;
        let start = cursor.pos;
        let Some(ch) = cursor.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                text: String::new(),
                start,
                end: start,
            });
            return Ok(tokens);
        };
        let kind = match ch {
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            '<' => TokenKind::LAngle,
            '>' => TokenKind::RAngle,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            ':' => TokenKind::Colon,
            ',' => TokenKind::Comma,
            '=' => TokenKind::Equals,
            c if is_ident_start(c) => TokenKind::Ident,
            c => return Err(LexError::UnexpectedChar { ch: c, pos: start }),
        };
        if kind == TokenKind::Ident {
            cursor.identifier();
        } else {
            cursor.bump();
        }
        let lexeme = &text[start.offset..cursor.pos.offset];
        let kind = match (kind, lexeme) {
            (TokenKind::Ident, "typestate") => TokenKind::KwTypestate,
            (TokenKind::Ident, "end") => TokenKind::KwEnd,
            (kind, _) => kind,
        };
        tokens.push(Token {
            kind,
            text: lexeme.to_owned(),
            start,
            end: cursor.pos,
        });
    }
}

/// Byte-level entry point: rejects invalid UTF-8 with a positioned error.
pub fn decode(bytes: &[u8]) -> Result<&str, LexError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let valid = e.valid_up_to();
        // the prefix is valid by construction
        let prefix = std::str::from_utf8(&bytes[..valid]).unwrap_or_default();
        LexError::InvalidUtf8 {
            pos: SourcePos::of_offset(prefix, valid),
        }
    })
}
