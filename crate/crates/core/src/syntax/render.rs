use std::fmt::Write;

use super::ast::*;

/// Canonical protocol text: one state per line, four-space indentation,
/// no trailing newline. A protocol without states is a single line.
pub fn render(ast: &TypestateAst) -> String {
    if ast.states.is_empty() {
        return format!("typestate {} {{}}", ast.name);
    }
    let mut out = format!("typestate {} {{\n", ast.name);
    for state in &ast.states {
        let _ = writeln!(out, "    {} = {}", state.name, body(&state.body));
    }
    out.push('}');
    out
}

fn body(body: &StateBody) -> String {
    if body.transitions.is_empty() {
        return "{}".into();
    }
    let items: Vec<_> = body
        .transitions
        .iter()
        .map(|t| format!("{}: {}", t.sig, target(&t.target)))
        .collect();
    format!("{{ {} }}", items.join(", "))
}

fn target(target: &Target) -> String {
    match target {
        Target::End => "end".into(),
        Target::Named(r) => r.name.clone(),
        Target::Inline(b) => body(b),
        Target::Choice(options) => {
            let items: Vec<_> = options
                .iter()
                .map(|o| {
                    let t = match &o.target {
                        OptionTarget::End => "end".into(),
                        OptionTarget::Named(r) => r.name.clone(),
                        OptionTarget::Inline(b) => body(b),
                    };
                    format!("{}: {t}", o.label)
                })
                .collect();
            format!("<{}>", items.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::syntax::parse;

    #[test]
    fn empty_protocol() {
        let ast = TypestateAst {
            name: "empty".into(),
            states: vec![],
        };
        assert_eq!(render(&ast), "typestate empty {}");
    }

    #[test]
    fn basic_canonical() {
        assert_eq!(
            render(&parse(corpus::BASIC).unwrap()),
            "typestate basic {\n    begin = { void terminate(): end }\n}"
        );
    }

    #[test]
    fn drone2_canonical() {
        let expected = "typestate DroneProtocol {
    Idle = { void takeOff(): Hovering }
    Hovering = { void land(): Idle, void moveTo(double, double): Flying }
    Flying = { void moveTo(double, double): Flying, void stop(): Hovering, Boolean hasArrived(): <True: Hovering, False: Flying> }
}";
        assert_eq!(render(&parse(corpus::DRONE_2).unwrap()), expected);
    }

    #[test]
    fn inline_and_empty_bodies() {
        let text = "typestate t { a = { void m(): { int n(): <Ok: {}, Err: end> }, void k(): {} } b = {} }";
        let rendered = render(&parse(text).unwrap());
        assert_eq!(
            rendered,
            "typestate t {\n    a = { void m(): { int n(): <Ok: {}, Err: end> }, void k(): {} }\n    b = {}\n}"
        );
        assert_eq!(parse(&rendered).unwrap(), parse(text).unwrap());
    }
}
