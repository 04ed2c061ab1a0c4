//! Command-line front end for the benchmark.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 backend failure.

pub mod args;
pub mod commands;
pub mod comparison;
pub mod config_file;
pub mod error;
pub mod scoring;
pub mod svg;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

fn dispatch(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Run(a) => commands::run(a),
        Command::Score(a) => commands::score(a),
        Command::Compare(a) => commands::compare(a),
        Command::Baseline(a) => commands::baseline(a),
        Command::Report(a) => commands::report(a),
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let merged = match config_file::merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(merged) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => CliError::Usage(String::new()).exit_code(),
            };
        }
    };
    match dispatch(&cli) {
        Ok(msg) => {
            println!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
