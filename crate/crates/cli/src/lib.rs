//! Spec-file parser and command dispatch for the `mk` binary.
//!
//! Files declare named entities in a line-oriented grammar:
//!
//! ```text
//! algebra Z2 { size 2 op plus/2 = [0 1 1 0] }
//! cong C on Z2 { blocks: 0 1 }
//! ```
//!
//! Every table is checked against its declared size, and every structure
//! against its laws, when the document is loaded.

pub mod commands;
pub mod diag;
pub mod doc;
pub mod lexer;
pub mod load;
pub mod render;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::{Cli, RunError, Verb};
pub use diag::{Code, Diagnostic, Pos};
pub use load::{Entity, SpecDocument};

/// Everything one invocation writes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments, runs the verb and formats its output.
pub fn run_cli<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 64, stdout: String::new(), stderr: text },
            };
        }
    };
    if let Some(n) = cli.threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = match (&cli.verb, cli.golden) {
        (Verb::Counterexample, true) => {
            mk_core::counterexample::counterexample_harness().map(|r| render::counterexample(&r)).map_err(RunError::from)
        }
        _ => commands::run(&cli).map(|v| format_value(&cli, &v)),
    };
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => {
            let stderr = match &e {
                RunError::Usage(_) => format!("error: {e}\n\n{}\n", <Cli as clap::CommandFactory>::command().render_usage()),
                _ => format!("error: {e}\n"),
            };
            Outcome { code: e.exit_code(), stdout: String::new(), stderr }
        }
    }
}

fn format_value(cli: &Cli, value: &serde_json::Value) -> String {
    if !cli.golden {
        return render::json(value);
    }
    match (&cli.verb, value.get("canonical").and_then(|v| v.as_str())) {
        (Verb::Fmt(_), Some(text)) => text.to_string(),
        _ => render::golden(value),
    }
}
