//! `typestate`: compile, decompile, check and compare protocols and
//! automata from the command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use typestate_core::automaton::{distinguishing_word, Observation};
use typestate_core::decompile::decompile;
use typestate_core::diagnostic::{Diagnostic, Location, Severity};
use typestate_core::interchange::{ast_to_json, doa_to_dot, doa_to_json};
use typestate_core::pipeline::{load, load_automaton, InputKind, Loaded};
use typestate_core::syntax::render;

#[derive(Parser)]
#[command(name = "typestate", version, about = "Translate between typestate protocols and object automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a protocol into an automaton (or its syntax tree with --ast).
    Compile {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::DoaJson)]
        format: Format,
        /// Write the syntax-tree document instead of the automaton.
        #[arg(long, conflicts_with = "format")]
        ast: bool,
        #[arg(long)]
        kind: Option<InputKind>,
    },
    /// Translate an automaton document into protocol text.
    Decompile {
        input: PathBuf,
        /// Protocol name; defaults to the input file stem.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        kind: Option<InputKind>,
    },
    /// Report every diagnostic for a protocol or document.
    Check {
        input: PathBuf,
        #[arg(long)]
        kind: Option<InputKind>,
    },
    /// Compare the languages of two inputs.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Compare accepted words only, ignoring which prefixes are allowed.
        #[arg(long)]
        accepting: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    DoaJson,
    Dot,
}

/// A failure that is not a diagnostic: unreadable files, unknown kinds.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

struct Input {
    path: PathBuf,
    kind: InputKind,
    text: String,
}

fn read_input(path: &Path, kind: Option<InputKind>) -> Result<Input, Usage> {
    let kind = kind
        .or_else(|| InputKind::from_path(path))
        .ok_or_else(|| anyhow!("cannot tell the kind of `{}` from its name; pass --kind", path.display()))?;
    let text = fs::read_to_string(path).with_context(|| format!("cannot read `{}`", path.display()))?;
    Ok(Input {
        path: path.to_owned(),
        kind,
        text,
    })
}

fn color_enabled() -> bool {
    std::env::var("TYPESTATE_COLOR").is_ok_and(|v| v == "1")
}

fn format_diagnostic(file: &Path, d: &Diagnostic, color: bool) -> String {
    let prefix = match &d.location {
        Some(Location::Source(pos)) => format!("{}:{}:{}", file.display(), pos.line, pos.column),
        _ => file.display().to_string(),
    };
    let severity = match (color, d.severity) {
        (true, Severity::Error) => "\x1b[31merror\x1b[0m".to_owned(),
        (true, Severity::Warning) => "\x1b[33mwarning\x1b[0m".to_owned(),
        (false, s) => s.to_string(),
    };
    let mut line = format!("{prefix}: {severity}[{}]: {}", d.code, d.message);
    match &d.location {
        Some(Location::Source(_)) | None => {}
        Some(loc) => line.push_str(&format!(" (at {loc})")),
    }
    line
}

fn report(file: &Path, diags: &[Diagnostic]) {
    let color = color_enabled();
    let mut err = io::stderr().lock();
    for d in diags {
        let _ = writeln!(err, "{}", format_diagnostic(file, d, color));
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Usage> {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write `{}`", path.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn file_stem(path: &Path) -> String {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("Protocol");
    [".doa.json", ".ast.json", ".protocol", ".json"]
        .iter()
        .find_map(|ext| name.strip_suffix(ext))
        .unwrap_or(name)
        .to_owned()
}

fn run(command: Command) -> Result<ExitCode, Usage> {
    match command {
        Command::Compile {
            input,
            out,
            format,
            ast,
            kind,
        } => {
            let input = read_input(&input, kind)?;
            if input.kind == InputKind::Doa {
                return Err(anyhow!("`compile` expects a protocol or syntax-tree document, not an automaton").into());
            }
            let text = if ast {
                match load(input.kind, &input.text) {
                    Ok(c) => {
                        report(&input.path, &c.warnings);
                        match c.value {
                            Loaded::Protocol(ast) => ast_to_json(&ast),
                            Loaded::Automaton(_) => unreachable!("kind checked above"),
                        }
                    }
                    Err(diags) => {
                        report(&input.path, &diags);
                        return Ok(ExitCode::from(1));
                    }
                }
            } else {
                match load_automaton(input.kind, &input.text) {
                    Ok(c) => {
                        report(&input.path, &c.warnings);
                        match format {
                            Format::DoaJson => doa_to_json(&c.value),
                            Format::Dot => doa_to_dot(&c.value),
                        }
                    }
                    Err(diags) => {
                        report(&input.path, &diags);
                        return Ok(ExitCode::from(1));
                    }
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompile { input, name, out, kind } => {
            let input = read_input(&input, kind)?;
            let name = name.unwrap_or_else(|| file_stem(&input.path));
            let result = load_automaton(input.kind, &input.text).and_then(|c| {
                report(&input.path, &c.warnings);
                decompile(&name, &c.value)
            });
            match result {
                Ok(ast) => {
                    emit(out.as_deref(), &render(&ast))?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(diags) => {
                    report(&input.path, &diags);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Check { input, kind } => {
            let input = read_input(&input, kind)?;
            match load(input.kind, &input.text) {
                Ok(c) => {
                    report(&input.path, &c.warnings);
                    println!("{}: ok", input.path.display());
                    Ok(ExitCode::SUCCESS)
                }
                Err(diags) => {
                    report(&input.path, &diags);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Equiv { a, b, accepting } => {
            let mut doas = Vec::new();
            for path in [&a, &b] {
                let input = read_input(path, None)?;
                match load_automaton(input.kind, &input.text) {
                    Ok(c) => doas.push(c.value),
                    Err(diags) => {
                        report(&input.path, &diags);
                        return Ok(ExitCode::from(2));
                    }
                }
            }
            let observation = if accepting { Observation::Accepting } else { Observation::Traces };
            match distinguishing_word(&doas[0], &doas[1], observation).map_err(|e| anyhow!("{e}"))? {
                None => {
                    println!("equivalent");
                    Ok(ExitCode::SUCCESS)
                }
                Some(word) => {
                    println!("distinguished by: {word}");
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Usage(e)) => {
            eprintln!("typestate: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use typestate_core::diagnostic::Code;
    use typestate_core::syntax::SourcePos;

    #[test]
    fn diagnostic_lines() {
        let d = Diagnostic::error(Code::UndefinedState, "state `x` is not defined").at(SourcePos {
            line: 3,
            column: 7,
            offset: 40,
        });
        assert_eq!(
            format_diagnostic(Path::new("a.protocol"), &d, false),
            "a.protocol:3:7: error[E_UNDEFINED_STATE]: state `x` is not defined"
        );
        let d = Diagnostic::warning(Code::Unreachable, "state `end` is unreachable").on_element("state end");
        assert_eq!(
            format_diagnostic(Path::new("f.doa.json"), &d, false),
            "f.doa.json: warning[W_UNREACHABLE]: state `end` is unreachable (at state end)"
        );
        assert!(format_diagnostic(Path::new("f"), &d, true).contains("\x1b[33mwarning\x1b[0m"));
    }

    #[test]
    fn stems() {
        assert_eq!(file_stem(Path::new("dir/basic.doa.json")), "basic");
        assert_eq!(file_stem(Path::new("drone.protocol")), "drone");
        assert_eq!(file_stem(Path::new("plain")), "plain");
    }
}
