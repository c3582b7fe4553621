//! Loading any supported input and carrying it through validation. The
//! command-line tool and the HTTP service both go through here, so they
//! report the same diagnostics for the same input.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automaton::Doa;
use crate::compile::compile;
use crate::diagnostic::{has_errors, Checked, Diagnostic};
use crate::interchange::{ast_from_json, doa_from_json};
use crate::syntax::{parse, validate_ast, TypestateAst};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    /// Protocol source text.
    Typestate,
    /// A syntax-tree JSON document.
    Ast,
    /// An automaton JSON document.
    Doa,
}

impl InputKind {
    /// `.protocol`, `.ast.json` and `.doa.json`.
    pub fn from_path(path: &Path) -> Option<InputKind> {
        let name = path.file_name()?.to_str()?;
        if name.ends_with(".ast.json") {
            Some(InputKind::Ast)
        } else if name.ends_with(".doa.json") {
            Some(InputKind::Doa)
        } else if name.ends_with(".protocol") {
            Some(InputKind::Typestate)
        } else {
            None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            InputKind::Typestate => "typestate",
            InputKind::Ast => "ast",
            InputKind::Doa => "doa",
        }
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InputKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "typestate" => Ok(InputKind::Typestate),
            "ast" => Ok(InputKind::Ast),
            "doa" => Ok(InputKind::Doa),
            _ => Err(format!("unknown input kind `{s}` (expected typestate, ast or doa)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Loaded {
    Protocol(TypestateAst),
    Automaton(Box<Doa>),
}

/// Reads and fully validates `text` as `kind`.
pub fn load(kind: InputKind, text: &str) -> Result<Checked<Loaded>, Vec<Diagnostic>> {
    match kind {
        InputKind::Typestate => load_protocol(text).map(|c| Checked {
            value: Loaded::Protocol(c.value),
            warnings: c.warnings,
        }),
        InputKind::Ast => ast_from_json(text).map(|ast| Checked {
            value: Loaded::Protocol(ast),
            warnings: Vec::new(),
        }),
        InputKind::Doa => doa_from_json(text).map(|c| Checked {
            value: Loaded::Automaton(Box::new(c.value)),
            warnings: c.warnings,
        }),
    }
}

pub fn load_protocol(text: &str) -> Result<Checked<TypestateAst>, Vec<Diagnostic>> {
    let ast = parse(text).map_err(|e| vec![e.to_diagnostic()])?;
    let diags = validate_ast(&ast);
    if has_errors(&diags) {
        return Err(diags);
    }
    Ok(Checked {
        value: ast,
        warnings: diags,
    })
}

/// Loads `text` and compiles it if it is a protocol.
pub fn load_automaton(kind: InputKind, text: &str) -> Result<Checked<Doa>, Vec<Diagnostic>> {
    let loaded = load(kind, text)?;
    let doa = match loaded.value {
        Loaded::Protocol(ast) => compile(&ast)?,
        Loaded::Automaton(doa) => *doa,
    };
    Ok(Checked {
        value: doa,
        warnings: loaded.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::diagnostic::Code;
    use crate::interchange::doa_to_json;

    #[test]
    fn kinds_from_paths() {
        assert_eq!(InputKind::from_path(Path::new("a/drone.protocol")), Some(InputKind::Typestate));
        assert_eq!(InputKind::from_path(Path::new("x.doa.json")), Some(InputKind::Doa));
        assert_eq!(InputKind::from_path(Path::new("x.ast.json")), Some(InputKind::Ast));
        assert_eq!(InputKind::from_path(Path::new("x.json")), None);
        assert_eq!("doa".parse::<InputKind>(), Ok(InputKind::Doa));
        assert!("dot".parse::<InputKind>().is_err());
    }

    #[test]
    fn every_kind_reaches_an_automaton() {
        let doa = load_automaton(InputKind::Typestate, corpus::DRONE_2).unwrap().value;
        let again = load_automaton(InputKind::Doa, &doa_to_json(&doa)).unwrap().value;
        assert_eq!(doa, again);
    }

    #[test]
    fn errors_come_through() {
        let err = load(InputKind::Typestate, "typestate t { end = {} }").unwrap_err();
        assert_eq!(err[0].code, Code::ReservedEnd);
        let err = load(InputKind::Typestate, "typestate t {").unwrap_err();
        assert_eq!(err[0].code, Code::Parse);
        let err = load(InputKind::Ast, "[").unwrap_err();
        assert_eq!(err[0].code, Code::JsonSyntax);
    }
}
