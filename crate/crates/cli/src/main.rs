//! `phasematch`: solve, plan, simulate and verify generalized Grover searches.
//!
//! Exit codes: 0 success, 1 bad input, 2 no solution or infeasible,
//! 3 verification failure.

mod args;
mod commands;
mod report;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Failure;
use report::Report;

fn emit(cli: &Cli, report: &Report) -> Result<(), String> {
    let text = report.render(cli.format).map_err(|e| format!("cannot format output: {e}"))?;
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (report, code) = match commands::run(&cli) {
        Ok(r) => (r, 0),
        Err(Failure::Verification(r, msg)) => {
            eprintln!("verification failed: {msg}");
            (*r, 3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(msg) = emit(&cli, &report) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
