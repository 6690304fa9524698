//! Command-line driver for the list-decoding experiments.

pub mod bitio;
pub mod cli;
pub mod commands;
pub mod instance;
pub mod report;

use std::ffi::OsString;
use std::fmt;

use clap::Parser;

use cli::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

/// Bad flags, parameters or input files.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A requested `--assert-*` check did not hold.
#[derive(Debug)]
pub struct AssertionFailed(pub String);

impl fmt::Display for AssertionFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for AssertionFailed {}

pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        EXIT_USAGE
    } else if err.downcast_ref::<AssertionFailed>().is_some() {
        EXIT_ASSERTION
    } else {
        EXIT_RUNTIME
    }
}

pub fn execute(cli: &Cli) -> anyhow::Result<()> {
    let seed = cli.seed;
    match &cli.command {
        Command::Invert(a) => commands::invert(a, seed, cli.jobs),
        Command::Rate(a) => commands::rate(a, seed),
        Command::Fwht(a) => commands::fwht_file(a),
        Command::Extract(a) => commands::extract(a, seed),
        Command::Prg(a) => commands::prg(a, seed),
        Command::TestBits(a) => commands::test_bits(a, seed),
        Command::PairwiseCheck(a) => commands::pairwise(a, seed),
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
