//! Serialized forms: automaton and syntax-tree JSON documents, and DOT.

mod ast_json;
mod doa_json;
mod dot;

pub use ast_json::{ast_from_json, ast_to_document, ast_to_json, AstBody, AstDocument, AstOption, AstOptionTarget, AstState, AstTarget, AstTransition};
pub use doa_json::{
    doa_from_document, doa_from_json, doa_to_document, doa_to_json, DoaDocument, MethodEntry, MethodTransitionEntry,
    ResultTransitionEntry, StateEntry, StateKind, SCHEMA_VERSION,
};
pub use dot::doa_to_dot;

use serde::de::DeserializeOwned;

use crate::diagnostic::{Code, Diagnostic};
use crate::syntax::SourcePos;

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn syntax_position(text: &str, line: usize, column: usize) -> SourcePos {
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            let col_bytes: usize = l.chars().take(column.saturating_sub(1)).map(char::len_utf8).sum();
            return SourcePos::of_offset(text, offset + col_bytes);
        }
        offset += l.len();
    }
    SourcePos::of_offset(text, text.len())
}

/// Parses `text` as JSON and deserializes it into `T`, turning failures
/// into positioned diagnostics.
fn read_document<T: DeserializeOwned>(text: &str) -> Result<T, Diagnostic> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        Diagnostic::error(Code::JsonSyntax, format!("invalid JSON: {e}")).at(syntax_position(text, e.line(), e.column()))
    })?;
    serde_path_to_error::deserialize(value).map_err(|e| {
        let at = pointer(e.path());
        let at = if at.is_empty() { "/".to_owned() } else { at };
        Diagnostic::error(Code::JsonSchema, e.inner().to_string()).at_pointer(at)
    })
}

fn write_document<T: serde::Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}
