//! Command-line front end for `qso-core`.
//!
//! [`run`] parses arguments, dispatches to a subcommand and returns the
//! process exit status: 0 on success, 1 on a usage or validation error,
//! 2 when `verify` finds a failing clause.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
pub mod commands;
pub mod error;
pub mod sweep;

use args::{Cli, Command};

/// Exit status for usage and validation errors.
pub const VALIDATION_FAILURE: i32 = 1;

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    VALIDATION_FAILURE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a, out, err),
        Command::Classify(a) => commands::classify_cmd(a, out),
        Command::Cycle(a) => commands::cycle_cmd(a, out),
        Command::Verify(a) => commands::verify_cmd(a, out),
        Command::Sweep(a) => sweep::sweep_cmd(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            VALIDATION_FAILURE
        }
    }
}
