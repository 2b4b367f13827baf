//! `swkb-lab`: batch front-end to the SWKB verification lab.
//!
//! Exit codes: 0 when every check passes, 1 when checks ran and failed,
//! 2 for invalid input. `SWKB_LAB_THREADS` caps the worker pool.

mod args;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::Outcome;
use crate::error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SWKB_LAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::invalid(format!("SWKB_LAB_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(CliError::io)
}

fn emit(outcome: &Outcome) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    if let Some(text) = &outcome.text {
        stdout.write_all(text.as_bytes()).map_err(CliError::io)?;
    }
    if let Some(report) = &outcome.report {
        let rendered = report.render(outcome.format)?;
        match &outcome.out {
            Some(path) => {
                std::fs::write(path, rendered).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
                writeln!(stdout, "{}", outcome.summary).map_err(CliError::io)?;
            }
            None => {
                stdout.write_all(rendered.as_bytes()).map_err(CliError::io)?;
                eprintln!("{}", outcome.summary);
            }
        }
    } else if !outcome.summary.is_empty() {
        writeln!(stdout, "{}", outcome.summary).map_err(CliError::io)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let result = configure_threads()
        .and_then(|()| commands::run(cli, &args, true))
        .and_then(|outcome| emit(&outcome).map(|()| outcome.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
