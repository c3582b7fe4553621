use serde::{Deserialize, Serialize};

use crate::diagnostic::{has_errors, Code, Diagnostic};
use crate::syntax::{
    is_identifier, is_type_identifier, validate_ast, LabeledTarget, Loc, MethodSig, MethodTransition, NamedStateDef,
    OptionTarget, StateBody, StateRef, Target, TypestateAst,
};

use super::{read_document, write_document};

/// The JSON form of a protocol's syntax tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AstDocument {
    pub name: String,
    pub states: Vec<AstState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AstState {
    pub name: String,
    pub transitions: Vec<AstTransition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AstBody {
    pub transitions: Vec<AstTransition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AstTransition {
    pub return_type: String,
    pub method: String,
    pub params: Vec<String>,
    pub target: AstTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AstTarget {
    End,
    State { name: String },
    Inline { body: AstBody },
    Choice { options: Vec<AstOption> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AstOption {
    pub label: String,
    pub target: AstOptionTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AstOptionTarget {
    End,
    State { name: String },
    Inline { body: AstBody },
}

pub fn ast_to_document(ast: &TypestateAst) -> AstDocument {
    AstDocument {
        name: ast.name.clone(),
        states: ast
            .states
            .iter()
            .map(|s| AstState {
                name: s.name.clone(),
                transitions: transitions_doc(&s.body),
            })
            .collect(),
    }
}

fn transitions_doc(body: &StateBody) -> Vec<AstTransition> {
    body.transitions
        .iter()
        .map(|t| AstTransition {
            return_type: t.sig.return_type.clone(),
            method: t.sig.name.clone(),
            params: t.sig.params.clone(),
            target: match &t.target {
                Target::End => AstTarget::End,
                Target::Named(r) => AstTarget::State { name: r.name.clone() },
                Target::Inline(b) => AstTarget::Inline {
                    body: AstBody {
                        transitions: transitions_doc(b),
                    },
                },
                Target::Choice(options) => AstTarget::Choice {
                    options: options
                        .iter()
                        .map(|o| AstOption {
                            label: o.label.clone(),
                            target: match &o.target {
                                OptionTarget::End => AstOptionTarget::End,
                                OptionTarget::Named(r) => AstOptionTarget::State { name: r.name.clone() },
                                OptionTarget::Inline(b) => AstOptionTarget::Inline {
                                    body: AstBody {
                                        transitions: transitions_doc(b),
                                    },
                                },
                            },
                        })
                        .collect(),
                },
            },
        })
        .collect()
}

pub fn ast_to_json(ast: &TypestateAst) -> String {
    write_document(&ast_to_document(ast))
}

struct Reader {
    diags: Vec<Diagnostic>,
}

impl Reader {
    fn check(&mut self, ok: bool, what: &str, value: &str, at: String) {
        if !ok {
            self.diags.push(
                Diagnostic::error(Code::JsonSchema, format!("`{value}` is not a valid {what}")).at_pointer(at),
            );
        }
    }

    fn name(&mut self, value: &str, what: &str, at: String) -> String {
        self.check(is_identifier(value), what, value, at);
        value.to_owned()
    }

    fn body(&mut self, transitions: &[AstTransition], at: &str) -> StateBody {
        let transitions = transitions
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let at = format!("{at}/{i}");
                self.check(is_type_identifier(&t.return_type), "type", &t.return_type, format!("{at}/returnType"));
                let method = self.name(&t.method, "method name", format!("{at}/method"));
                for (j, p) in t.params.iter().enumerate() {
                    self.check(is_type_identifier(p), "type", p, format!("{at}/params/{j}"));
                }
                let target = match &t.target {
                    AstTarget::End => Target::End,
                    AstTarget::State { name } => {
                        Target::Named(StateRef::new(self.name(name, "state name", format!("{at}/target/name"))))
                    }
                    AstTarget::Inline { body } => {
                        Target::Inline(self.body(&body.transitions, &format!("{at}/target/body/transitions")))
                    }
                    AstTarget::Choice { options } => Target::Choice(
                        options
                            .iter()
                            .enumerate()
                            .map(|(j, o)| {
                                let at = format!("{at}/target/options/{j}");
                                let label = self.name(&o.label, "label", format!("{at}/label"));
                                let target = match &o.target {
                                    AstOptionTarget::End => OptionTarget::End,
                                    AstOptionTarget::State { name } => OptionTarget::Named(StateRef::new(
                                        self.name(name, "state name", format!("{at}/target/name")),
                                    )),
                                    AstOptionTarget::Inline { body } => OptionTarget::Inline(
                                        self.body(&body.transitions, &format!("{at}/target/body/transitions")),
                                    ),
                                };
                                LabeledTarget {
                                    label,
                                    target,
                                    loc: Loc::default(),
                                }
                            })
                            .collect(),
                    ),
                };
                MethodTransition {
                    sig: MethodSig::new(t.return_type.as_str(), method, t.params.iter().cloned()),
                    target,
                    loc: Loc::default(),
                }
            })
            .collect();
        StateBody { transitions }
    }
}

/// Reads a syntax-tree document and validates the protocol it describes.
pub fn ast_from_json(text: &str) -> Result<TypestateAst, Vec<Diagnostic>> {
    let doc: AstDocument = read_document(text).map_err(|d| vec![d])?;
    let mut reader = Reader { diags: Vec::new() };
    let name = reader.name(&doc.name, "protocol name", "/name".into());
    let states = doc
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            // `end` passes here so validation reports it as reserved
            if s.name != "end" {
                reader.name(&s.name, "state name", format!("/states/{i}/name"));
            }
            NamedStateDef {
                name: s.name.clone(),
                body: reader.body(&s.transitions, &format!("/states/{i}/transitions")),
                loc: Loc::default(),
            }
        })
        .collect();
    if !reader.diags.is_empty() {
        return Err(reader.diags);
    }
    let ast = TypestateAst { name, states };
    let diags = validate_ast(&ast);
    if has_errors(&diags) {
        return Err(diags);
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::syntax::parse;

    #[test]
    fn basic_document() {
        let doc = ast_to_document(&parse(corpus::BASIC).unwrap());
        assert_eq!(doc.states.len(), 1);
        assert_eq!(doc.states[0].transitions.len(), 1);
        assert_eq!(doc.states[0].transitions[0].target, AstTarget::End);
        let json: serde_json::Value = serde_json::from_str(&ast_to_json(&parse(corpus::BASIC).unwrap())).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "name": "basic",
                "states": [{
                    "name": "begin",
                    "transitions": [{"returnType": "void", "method": "terminate", "params": [], "target": {"kind": "end"}}]
                }]
            })
        );
    }

    #[test]
    fn round_trip() {
        let text = "typestate t { a = { void m(): { Boolean n(): <A: {void z(): end}, B: a, C: end> }, int k(java.lang.String): a } }";
        let ast = parse(text).unwrap();
        assert_eq!(ast_from_json(&ast_to_json(&ast)).unwrap(), ast);
    }

    #[test]
    fn duplicate_states() {
        let err = ast_from_json(r#"{"name": "x", "states": [{"name": "a", "transitions": []}, {"name": "a", "transitions": []}]}"#)
            .unwrap_err();
        assert_eq!(err.iter().map(|d| d.code).collect::<Vec<_>>(), vec![Code::DupState]);
    }

    #[test]
    fn empty_states() {
        let ast = ast_from_json(r#"{"name": "empty", "states": []}"#).unwrap();
        assert_eq!(ast, parse("typestate empty {}").unwrap());
    }

    #[test]
    fn nested_choice_is_a_schema_error() {
        let text = r#"{"name": "x", "states": [{"name": "a", "transitions": [
            {"returnType": "void", "method": "m", "params": [], "target": {"kind": "choice", "options": [
                {"label": "L", "target": {"kind": "choice", "options": []}}
            ]}}
        ]}]}"#;
        let err = ast_from_json(text).unwrap_err();
        assert_eq!(err[0].code, Code::JsonSchema);
        // tagged targets are buffered whole, so the pointer names the outermost one
        assert_eq!(err[0].location.as_ref().unwrap().to_string(), "/states/0/transitions/0/target");
        assert!(err[0].message.contains("choice"), "{}", err[0].message);
    }

    #[test]
    fn identifier_checks() {
        let text = r#"{"name": "x", "states": [{"name": "a", "transitions": [
            {"returnType": "void", "method": "bad name", "params": ["int[]"], "target": {"kind": "state", "name": "end"}}
        ]}]}"#;
        let err = ast_from_json(text).unwrap_err();
        let pointers: Vec<_> = err.iter().map(|d| d.location.clone().unwrap().to_string()).collect();
        assert_eq!(
            pointers,
            ["/states/0/transitions/0/method", "/states/0/transitions/0/params/0", "/states/0/transitions/0/target/name"]
        );
    }

    #[test]
    fn reserved_end_reported_by_validation() {
        let err = ast_from_json(r#"{"name": "x", "states": [{"name": "end", "transitions": []}]}"#).unwrap_err();
        assert_eq!(err[0].code, Code::ReservedEnd);
    }
}
