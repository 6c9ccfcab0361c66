//! `qbe`: runs one experiment, writes a JSON report and exits 0 iff every
//! check in it confirms.

mod args;
mod commands;
mod output;

use std::fs;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use args::Cli;

/// Exit status for a well-formed run whose verdict is a violation.
const EXIT_VIOLATES: u8 = 1;
/// Exit status for unusable input, matching clap's usage errors.
const EXIT_INVALID: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let json = output::to_json(&outcome);
    let written = match &cli.output {
        Some(path) => fs::write(path, &json).with_context(|| format!("writing {}", path.display())),
        None if !cli.table => {
            print!("{json}");
            Ok(())
        }
        None => Ok(()),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INVALID);
    }
    if cli.table {
        print!("{}", output::to_table(&outcome));
    }
    for r in &outcome.reports {
        eprintln!("{}", r.summary_line());
    }
    if outcome.verdict().confirms() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATES)
    }
}
