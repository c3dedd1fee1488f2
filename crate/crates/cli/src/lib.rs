//! Library half of the `escape-ratio` binary; `run` is the whole program.

mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Common, Format, Model, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// A failed invocation with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn validation(subject: &str, message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: format!("{subject}: {message}"),
        }
    }

    pub fn budget(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_BUDGET,
            message: format!("budget exceeded: {message}"),
        }
    }

    pub fn runtime(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: message.to_string(),
        }
    }
}

/// Parses `argv`, runs one subcommand and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(doc) => match emit(&cli.common, &doc) {
            Ok(text) => {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            }
            Err(f) => report(err, f),
        },
        Err(f) => report(err, f),
    }
}

fn report(err: &mut dyn Write, f: Failure) -> i32 {
    let _ = writeln!(err, "error: {}", f.message);
    f.code
}

/// Renders the document and writes it to `--output` when given; the returned
/// text goes to standard output.
fn emit(common: &Common, doc: &commands::Document) -> Result<String, Failure> {
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&doc.json).expect("documents serialize") + "\n",
        Format::Text => doc.text.clone(),
    };
    match &common.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::validation("--output", format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
