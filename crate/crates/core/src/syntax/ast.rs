use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

/// A position in protocol text. `line` and `column` are 1-based (columns
/// count characters), `offset` is a 0-based byte index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourcePos {
    pub line: u32,
    pub column: u32,
    pub offset: usize,
}

impl SourcePos {
    pub const START: SourcePos = SourcePos {
        line: 1,
        column: 1,
        offset: 0,
    };

    /// Position of byte `offset` in `text`. Offsets past the end clamp to
    /// the end of the text; offsets inside a multi-byte character resolve
    /// to that character.
    pub fn of_offset(text: &str, offset: usize) -> SourcePos {
        let mut pos = SourcePos::START;
        for (i, ch) in text.char_indices() {
            if i >= offset {
                break;
            }
            pos.advance(ch);
        }
        pos
    }

    pub(crate) fn advance(&mut self, ch: char) {
        self.offset += ch.len_utf8();
        if ch == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
    }
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Optional source position attached to AST nodes. Positions never take
/// part in structural equality or hashing.
#[derive(Debug, Clone, Copy, Default)]
pub struct Loc(pub Option<SourcePos>);

impl PartialEq for Loc {
    fn eq(&self, _: &Loc) -> bool {
        true
    }
}

impl Eq for Loc {}

impl Hash for Loc {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl From<SourcePos> for Loc {
    fn from(pos: SourcePos) -> Loc {
        Loc(Some(pos))
    }
}

/// A protocol: `typestate name { ... }`. The first state, if any, is initial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypestateAst {
    pub name: String,
    pub states: Vec<NamedStateDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NamedStateDef {
    pub name: String,
    pub body: StateBody,
    pub loc: Loc,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct StateBody {
    pub transitions: Vec<MethodTransition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MethodTransition {
    pub sig: MethodSig,
    pub target: Target,
    pub loc: Loc,
}

/// A method of the automaton alphabet: `returnType name(paramTypes...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MethodSig {
    pub return_type: String,
    pub name: String,
    pub params: Vec<String>,
}

impl MethodSig {
    pub fn new<R, N, P, I>(return_type: R, name: N, params: I) -> Self
    where
        R: Into<String>,
        N: Into<String>,
        P: Into<String>,
        I: IntoIterator<Item = P>,
    {
        MethodSig {
            return_type: return_type.into(),
            name: name.into(),
            params: params.into_iter().map(Into::into).collect(),
        }
    }

    /// Two transitions of one state clash when they share this key; the
    /// return type cannot disambiguate a call site.
    pub fn call_key(&self) -> (&str, &[String]) {
        (&self.name, &self.params)
    }
}

impl fmt::Display for MethodSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}({})", self.return_type, self.name, self.params.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateRef {
    pub name: String,
    pub loc: Loc,
}

impl StateRef {
    pub fn new(name: impl Into<String>) -> Self {
        StateRef {
            name: name.into(),
            loc: Loc::default(),
        }
    }
}

/// Target of a method transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Target {
    End,
    Named(StateRef),
    Inline(StateBody),
    Choice(Vec<LabeledTarget>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTarget {
    pub label: String,
    pub target: OptionTarget,
    pub loc: Loc,
}

/// Target of a choice option; choices cannot nest directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OptionTarget {
    End,
    Named(StateRef),
    Inline(StateBody),
}

pub const KEYWORDS: [&str; 2] = ["typestate", "end"];

pub(crate) fn is_ident_start(ch: char) -> bool {
    ch.is_alphabetic() || ch == '_' || ch == '$'
}

pub(crate) fn is_ident_continue(ch: char) -> bool {
    ch.is_alphanumeric() || ch == '_' || ch == '$'
}

fn is_simple_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue)
}

/// A plain identifier usable as a protocol, state, method or label name.
/// Keywords are not identifiers.
pub fn is_identifier(s: &str) -> bool {
    is_simple_identifier(s) && !KEYWORDS.contains(&s)
}

/// A type name: a plain identifier or a `.`-qualified sequence of them.
pub fn is_type_identifier(s: &str) -> bool {
    s.split('.').all(is_simple_identifier) && !KEYWORDS.contains(&s)
}
