//! Machine-readable diagnostics shared by every stage of the pipeline.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::SourcePos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// The diagnostic catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Code {
    // text
    #[serde(rename = "E_LEX")]
    Lex,
    #[serde(rename = "E_PARSE")]
    Parse,
    // typestate structure
    #[serde(rename = "E_RESERVED_END")]
    ReservedEnd,
    #[serde(rename = "E_UNDEFINED_STATE")]
    UndefinedState,
    #[serde(rename = "E_DUP_STATE")]
    DupState,
    #[serde(rename = "E_DUP_TRANSITION")]
    DupTransition,
    #[serde(rename = "E_DUP_LABEL")]
    DupLabel,
    #[serde(rename = "E_EMPTY_CHOICE")]
    EmptyChoice,
    // automaton structure
    #[serde(rename = "E_UNDEFINED_TARGET")]
    UndefinedTarget,
    #[serde(rename = "E_CHOICE_NO_RESULTS")]
    ChoiceNoResults,
    #[serde(rename = "E_CHOICE_TO_CHOICE")]
    ChoiceToChoice,
    #[serde(rename = "E_NONDETERMINISTIC")]
    Nondeterministic,
    #[serde(rename = "E_FINAL_NOT_SINK")]
    FinalNotSink,
    #[serde(rename = "E_SINK_NOT_FINAL")]
    SinkNotFinal,
    #[serde(rename = "E_MALFORMED_DOA")]
    MalformedDoa,
    #[serde(rename = "E_UNION_CONFLICT")]
    UnionConflict,
    #[serde(rename = "E_INITIAL_IS_END")]
    InitialIsEnd,
    #[serde(rename = "W_UNREACHABLE")]
    Unreachable,
    // interchange
    #[serde(rename = "E_JSON_SYNTAX")]
    JsonSyntax,
    #[serde(rename = "E_JSON_SCHEMA")]
    JsonSchema,
}

impl Code {
    pub const ALL: [Code; 20] = [
        Code::Lex,
        Code::Parse,
        Code::ReservedEnd,
        Code::UndefinedState,
        Code::DupState,
        Code::DupTransition,
        Code::DupLabel,
        Code::EmptyChoice,
        Code::UndefinedTarget,
        Code::ChoiceNoResults,
        Code::ChoiceToChoice,
        Code::Nondeterministic,
        Code::FinalNotSink,
        Code::SinkNotFinal,
        Code::MalformedDoa,
        Code::UnionConflict,
        Code::InitialIsEnd,
        Code::Unreachable,
        Code::JsonSyntax,
        Code::JsonSchema,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::Lex => "E_LEX",
            Code::Parse => "E_PARSE",
            Code::ReservedEnd => "E_RESERVED_END",
            Code::UndefinedState => "E_UNDEFINED_STATE",
            Code::DupState => "E_DUP_STATE",
            Code::DupTransition => "E_DUP_TRANSITION",
            Code::DupLabel => "E_DUP_LABEL",
            Code::EmptyChoice => "E_EMPTY_CHOICE",
            Code::UndefinedTarget => "E_UNDEFINED_TARGET",
            Code::ChoiceNoResults => "E_CHOICE_NO_RESULTS",
            Code::ChoiceToChoice => "E_CHOICE_TO_CHOICE",
            Code::Nondeterministic => "E_NONDETERMINISTIC",
            Code::FinalNotSink => "E_FINAL_NOT_SINK",
            Code::SinkNotFinal => "E_SINK_NOT_FINAL",
            Code::MalformedDoa => "E_MALFORMED_DOA",
            Code::UnionConflict => "E_UNION_CONFLICT",
            Code::InitialIsEnd => "E_INITIAL_IS_END",
            Code::Unreachable => "W_UNREACHABLE",
            Code::JsonSyntax => "E_JSON_SYNTAX",
            Code::JsonSchema => "E_JSON_SCHEMA",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a diagnostic points: into protocol text, at an automaton element,
/// or at a node of a JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Location {
    Source(SourcePos),
    Element { element: String },
    Pointer { pointer: String },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Source(pos) => write!(f, "{}:{}", pos.line, pos.column),
            Location::Element { element } => f.write_str(element),
            Location::Pointer { pointer } => f.write_str(pointer),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            location: None,
        }
    }

    pub fn warning(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            location: None,
        }
    }

    pub fn at(mut self, pos: SourcePos) -> Self {
        self.location = Some(Location::Source(pos));
        self
    }

    pub fn at_opt(mut self, pos: Option<SourcePos>) -> Self {
        self.location = pos.map(Location::Source);
        self
    }

    pub fn on_element(mut self, element: impl Into<String>) -> Self {
        self.location = Some(Location::Element {
            element: element.into(),
        });
        self
    }

    pub fn at_pointer(mut self, pointer: impl Into<String>) -> Self {
        self.location = Some(Location::Pointer {
            pointer: pointer.into(),
        });
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    pub fn source_pos(&self) -> Option<SourcePos> {
        match self.location {
            Some(Location::Source(pos)) => Some(pos),
            _ => None,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {}", self.severity, self.code, self.message)?;
        match &self.location {
            Some(Location::Source(_)) | None => Ok(()),
            Some(loc) => write!(f, " (at {loc})"),
        }
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// A value accepted together with the warnings raised while checking it.
#[derive(Debug, Clone, PartialEq)]
pub struct Checked<T> {
    pub value: T,
    pub warnings: Vec<Diagnostic>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_serialize_to_catalogue_names() {
        for code in Code::ALL {
            let json = serde_json::to_string(&code).unwrap();
            assert_eq!(json, format!("\"{}\"", code.as_str()));
        }
    }

    #[test]
    fn display_includes_non_source_location() {
        let d = Diagnostic::warning(Code::Unreachable, "state `end` is unreachable")
            .on_element("state end");
        assert_eq!(
            d.to_string(),
            "warning[W_UNREACHABLE]: state `end` is unreachable (at state end)"
        );
    }
}
