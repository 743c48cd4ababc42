//! Command-line front door for the chaos-expansion engine.
//!
//! One binary, nine subcommands: probes (`probe-zero-divisor`, `ccr-check`),
//! stochastic demos (`solve-gbm`, `hs-demo`), analysis (`check-growth`,
//! `s-eval`, `t-eval`), and plumbing (`hermite`, `convert`). See `--help`
//! per subcommand for flags.
//!
//! Contract with callers:
//!
//! - Exit code 0 on success, 1 on a validation or check failure, 2 on a
//!   usage error (unknown flag, missing required argument).
//! - Validation and check failures print one line of structured JSON to
//!   standard error — `{"code", "message", "context"}` — never a stack
//!   trace. `code` is machine-readable and stable.
//! - All randomness is seeded explicitly via `--seed`; there is no
//!   wall-clock fallback. Given identical flags, output bytes are
//!   identical across runs and across `--threads` settings.

mod args;
mod render;
mod run;

use args::{Cli, Command};
use clap::Parser;
use run::{CliError, CmdOutput};
use serde::Serialize;
use std::process::ExitCode;

fn main() -> ExitCode {
    // A usage error makes clap print help text to standard error and exit
    // with code 2 before we get here.
    let cli = Cli::parse();
    let name = subcommand_name(&cli.command);
    if let Err(e) = configure_threads(cli.threads) {
        return fail(name, &e);
    }
    match dispatch(&cli.command) {
        Ok(CmdOutput {
            stdout,
            check_failure,
        }) => {
            if let Some(text) = stdout {
                if let Err(e) = print_stdout(&text) {
                    return fail(name, &e);
                }
            }
            match check_failure {
                None => ExitCode::SUCCESS,
                Some(message) => fail(name, &CliError::CheckFailed { message }),
            }
        }
        Err(e) => fail(name, &e),
    }
}

/// Print the document and one trailing newline. A closed pipe (the reader
/// ran `head` and left) is normal for a tool that emits tables; it ends
/// the run quietly. Any other write failure is reported.
fn print_stdout(text: &str) -> Result<(), CliError> {
    use std::io::{self, Write};
    let mut out = io::stdout().lock();
    let outcome = writeln!(out, "{text}").and_then(|()| out.flush());
    match outcome {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(CliError::Io {
            path: std::path::PathBuf::from("<stdout>"),
            message: format!("could not write to standard output: {e}"),
        }),
    }
}

fn dispatch(command: &Command) -> Result<CmdOutput, CliError> {
    match command {
        Command::ProbeZeroDivisor(a) => run::probe(a),
        Command::SolveGbm(a) => run::gbm(a),
        Command::CheckGrowth(a) => run::growth(a),
        Command::CcrCheck(a) => run::ccr(a),
        Command::SEval(a) => run::eval(a, run::Transform::S),
        Command::TEval(a) => run::eval(a, run::Transform::T),
        Command::Hermite(a) => run::hermite(a),
        Command::HsDemo(a) => run::hs_demo(a),
        Command::Convert(a) => run::convert(a),
    }
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::ProbeZeroDivisor(_) => "probe-zero-divisor",
        Command::SolveGbm(_) => "solve-gbm",
        Command::CheckGrowth(_) => "check-growth",
        Command::CcrCheck(_) => "ccr-check",
        Command::SEval(_) => "s-eval",
        Command::TEval(_) => "t-eval",
        Command::Hermite(_) => "hermite",
        Command::HsDemo(_) => "hs-demo",
        Command::Convert(_) => "convert",
    }
}

/// Pin the global worker pool before any parallel section runs. The pool
/// size never changes results, only wall-clock time.
fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Lib(hida::Error::InvalidConfig(
            "--threads must be at least 1".into(),
        )));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| {
            CliError::Lib(hida::Error::InvalidConfig(format!(
                "could not configure {n} worker threads: {e}"
            )))
        })
}

#[derive(Serialize)]
struct FailureContext<'a> {
    subcommand: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
}

#[derive(Serialize)]
struct FailureDoc<'a> {
    code: &'a str,
    message: String,
    context: FailureContext<'a>,
}

/// Print the structured error to standard error and return exit code 1.
fn fail(subcommand: &str, error: &CliError) -> ExitCode {
    let doc = FailureDoc {
        code: error.code(),
        message: error.message(),
        context: FailureContext {
            subcommand,
            path: error.path(),
        },
    };
    let text = render::canonical_json(&doc)
        .unwrap_or_else(|_| format!("{{\"code\":\"{}\"}}", error.code()));
    eprintln!("{text}");
    ExitCode::from(1)
}
