//! Reads generated DOT back with a small parser for the subset it uses.

use std::collections::HashMap;

use typestate_core::compile::compile;
use typestate_core::corpus;
use typestate_core::interchange::doa_to_dot;
use typestate_core::syntax::parse;

#[derive(Debug, Default)]
struct Graph {
    nodes: HashMap<String, HashMap<String, String>>,
    edges: Vec<(String, String, HashMap<String, String>)>,
}

fn id(s: &str) -> (String, &str) {
    let s = s.trim_start();
    if let Some(rest) = s.strip_prefix('"') {
        let mut out = String::new();
        let mut chars = rest.char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => out.push(chars.next().unwrap().1),
                '"' => return (out, &rest[i + 1..]),
                _ => out.push(c),
            }
        }
        panic!("unterminated string");
    }
    let end = s.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(s.len());
    assert!(end > 0, "expected an id at {s:?}");
    (s[..end].to_owned(), &s[end..])
}

fn attrs(s: &str) -> (HashMap<String, String>, &str) {
    let mut map = HashMap::new();
    let Some(mut s) = s.trim_start().strip_prefix('[') else {
        return (map, s);
    };
    loop {
        let (k, rest) = id(s);
        let rest = rest.trim_start().strip_prefix('=').expect("=");
        let (v, rest) = id(rest);
        map.insert(k, v);
        let rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            s = r;
        } else {
            return (map, rest.strip_prefix(']').expect("]"));
        }
    }
}

fn parse_dot(text: &str) -> Graph {
    let body = text.trim().strip_prefix("digraph").expect("digraph");
    let (_, body) = id(body);
    let body = body.trim().strip_prefix('{').unwrap().strip_suffix('}').unwrap();
    let mut g = Graph::default();
    for stmt in body.split(";\n").map(str::trim).filter(|s| !s.is_empty()) {
        let stmt = stmt.trim_end_matches(';');
        if stmt.starts_with("rankdir") {
            continue;
        }
        let (a, rest) = id(stmt);
        if let Some(rest) = rest.trim_start().strip_prefix("->") {
            let (b, rest) = id(rest);
            let (at, rest) = attrs(rest);
            assert!(rest.trim().is_empty(), "{rest:?}");
            g.edges.push((a, b, at));
        } else {
            let (at, rest) = attrs(rest);
            assert!(rest.trim().is_empty(), "{rest:?}");
            g.nodes.insert(a, at);
        }
    }
    g
}

#[test]
fn corpus_dot_describes_the_automaton() {
    for (name, text) in corpus::ALL {
        let doa = compile(&parse(text).unwrap()).unwrap();
        let dot = doa_to_dot(&doa);
        let g = parse_dot(&dot);
        assert_eq!(g.nodes.len(), doa.state_count() + 1, "{name}");
        for s in doa.states() {
            let shape = &g.nodes[s]["shape"];
            let expected = if doa.is_internal(s) {
                "diamond"
            } else if doa.is_final(s) {
                "doublecircle"
            } else {
                "circle"
            };
            assert_eq!(shape, expected, "{name}: {s}");
        }
        let start: Vec<_> = g.edges.iter().filter(|(_, _, at)| at["color"] == "gray").collect();
        assert_eq!(start.len(), 1);
        assert_eq!(start[0].1, doa.initial);
        assert_eq!(g.nodes[&start[0].0]["style"], "invis");

        let labelled: Vec<(String, String, String)> = g
            .edges
            .iter()
            .filter(|(_, _, at)| at["color"] == "blue")
            .map(|(a, b, at)| (a.clone(), at["label"].clone(), b.clone()))
            .collect();
        let expected: Vec<(String, String, String)> = doa
            .method_transitions
            .iter()
            .map(|e| (e.from.clone(), e.sig.to_string(), e.to.clone()))
            .chain(doa.result_transitions.iter().map(|e| (e.from.clone(), e.label.clone(), e.to.clone())))
            .collect();
        assert_eq!(labelled, expected, "{name}");
        assert_eq!(dot, doa_to_dot(&doa));
    }
}
