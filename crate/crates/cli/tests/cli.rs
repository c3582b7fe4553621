use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn typestate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_typestate"))
        .args(args)
        .env_remove("TYPESTATE_COLOR")
        .output()
        .unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const D_DOCUMENT: &str = r#"{
  "schemaVersion": "1",
  "states": [
    {"name": "begin", "kind": "external", "initial": true, "final": false},
    {"name": "end", "kind": "external", "initial": false, "final": true}
  ],
  "methods": [{"returnType": "void", "name": "terminate", "params": []}],
  "labels": [],
  "methodTransitions": [{"from": "begin", "method": 0, "to": "end"}],
  "resultTransitions": []
}"#;

const END_ONLY: &str = r#"{"schemaVersion": "1",
  "states": [{"name": "end", "kind": "external", "initial": true, "final": true}],
  "methods": [], "labels": [], "methodTransitions": [], "resultTransitions": []}"#;

#[test]
fn compile_to_dot() {
    let o = typestate(&["compile", arg(&fixture("drone2.protocol")), "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("shape=diamond").count(), 1);
    assert_eq!(dot.matches("shape=circle").count(), 3);
    assert_eq!(dot.matches("shape=doublecircle").count(), 1);
    assert_eq!(dot.matches("color=blue").count(), 8);
    assert_eq!(dot.matches("color=gray").count(), 1);
}

#[test]
fn compile_empty_to_end_only_document() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("empty.doa.json");
    let o = typestate(&["compile", arg(&fixture("empty.protocol")), "--format", "doa-json", "--out", arg(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc, serde_json::from_str::<serde_json::Value>(END_ONLY).unwrap());
}

#[test]
fn compile_reports_undefined_state_with_position() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.protocol");
    fs::write(&bad, "typestate bad {\n    a = { void m(): nowhere }\n}\n").unwrap();
    let o = typestate(&["compile", arg(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(
        err.contains(&format!("{}:2:21: error[E_UNDEFINED_STATE]", bad.display())),
        "{err}"
    );
    assert!(stdout(&o).is_empty());
}

#[test]
fn compile_ast_document() {
    let o = typestate(&["compile", arg(&fixture("basic.protocol")), "--ast"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""kind": "end""#));
}

#[test]
fn decompile_basic_automaton() {
    let dir = TempDir::new().unwrap();
    let doc = dir.path().join("d.doa.json");
    fs::write(&doc, D_DOCUMENT).unwrap();
    let o = typestate(&["decompile", arg(&doc), "--name", "basic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "typestate basic {\n    begin = { void terminate(): end }\n}\n");
}

#[test]
fn decompile_end_only_uses_file_stem() {
    let dir = TempDir::new().unwrap();
    let doc = dir.path().join("solo.doa.json");
    fs::write(&doc, END_ONLY).unwrap();
    let o = typestate(&["decompile", arg(&doc)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "typestate solo {}\n");
}

#[test]
fn decompile_choice_without_results() {
    let dir = TempDir::new().unwrap();
    let doc = dir.path().join("c.doa.json");
    fs::write(
        &doc,
        r#"{"schemaVersion": "1",
          "states": [{"name": "a", "kind": "external", "initial": true, "final": false},
                     {"name": "c", "kind": "internal", "initial": false, "final": false}],
          "methods": [{"returnType": "Boolean", "name": "m", "params": []}], "labels": [],
          "methodTransitions": [{"from": "a", "method": 0, "to": "c"}], "resultTransitions": []}"#,
    )
    .unwrap();
    let o = typestate(&["decompile", arg(&doc)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[E_CHOICE_NO_RESULTS]"), "{}", stderr(&o));
}

#[test]
fn check_variants() {
    let o = typestate(&["check", arg(&fixture("drone2.protocol"))]);
    assert_eq!(o.status.code(), Some(0));

    let dir = TempDir::new().unwrap();
    let reserved = dir.path().join("r.protocol");
    fs::write(&reserved, "typestate r { end = {} }").unwrap();
    let o = typestate(&["check", arg(&reserved)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[E_RESERVED_END]"));

    let doc = dir.path().join("drone2.doa.json");
    let o = typestate(&["compile", arg(&fixture("drone2.protocol")), "--out", arg(&doc)]);
    assert_eq!(o.status.code(), Some(0));
    let o = typestate(&["check", arg(&doc)]);
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    assert!(err.contains("warning[W_UNREACHABLE]") && err.contains("`end`"), "{err}");
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn equiv_verdicts() {
    let drone1 = fixture("drone1.protocol");
    let drone2 = fixture("drone2.protocol");
    let o = typestate(&["equiv", arg(&drone2), arg(&drone2)]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "equivalent\n"));

    let o = typestate(&["equiv", arg(&drone1), arg(&drone2)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let word = out.strip_prefix("distinguished by: ").unwrap().trim_end();
    assert_eq!(word.split('·').count(), 3, "{word}");
    assert!(word.starts_with("void takeOff()·void moveTo(double, double)·"), "{word}");
}

#[test]
fn pipeline_composes() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first.doa.json");
    let text = dir.path().join("DroneProtocol.protocol");
    let second = dir.path().join("second.doa.json");
    let src = fixture("drone_course.protocol");
    assert!(typestate(&["compile", arg(&src), "--out", arg(&first)]).status.success());
    assert!(typestate(&["decompile", arg(&first), "--name", "DroneProtocol", "--out", arg(&text)]).status.success());
    assert!(typestate(&["compile", arg(&text), "--out", arg(&second)]).status.success());
    let o = typestate(&["equiv", arg(&first), arg(&second)]);
    assert_eq!(stdout(&o), "equivalent\n");
    let o = typestate(&["equiv", arg(&src), arg(&text)]);
    assert_eq!(stdout(&o), "equivalent\n");
}

#[test]
fn repeated_runs_are_identical() {
    let src = fixture("drone_course.protocol");
    let a = typestate(&["compile", arg(&src)]);
    let b = typestate(&["compile", arg(&src)]);
    assert_eq!((a.status.code(), a.stdout, a.stderr), (b.status.code(), b.stdout, b.stderr));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(typestate(&["compile"]).status.code(), Some(2));
    assert_eq!(typestate(&["compile", "x.protocol", "--format", "png"]).status.code(), Some(2));
    assert_eq!(typestate(&["check", "/definitely/missing.protocol"]).status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let unknown = dir.path().join("thing.txt");
    fs::write(&unknown, "typestate t {}").unwrap();
    assert_eq!(typestate(&["check", arg(&unknown)]).status.code(), Some(2));
    assert_eq!(typestate(&["check", arg(&unknown), "--kind", "typestate"]).status.code(), Some(0));

    let broken = dir.path().join("broken.protocol");
    fs::write(&broken, "typestate {").unwrap();
    let o = typestate(&["equiv", arg(&broken), arg(&fixture("basic.protocol"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error[E_PARSE]"));
}

#[test]
fn color_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let reserved = dir.path().join("r.protocol");
    fs::write(&reserved, "typestate r { end = {} }").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_typestate"))
        .args(["check", arg(&reserved)])
        .env("TYPESTATE_COLOR", "1")
        .output()
        .unwrap();
    assert!(stderr(&o).contains("\x1b[31merror\x1b[0m"));
    assert!(!stderr(&typestate(&["check", arg(&reserved)])).contains('\x1b'));
}
