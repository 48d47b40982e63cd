//! Command-line front end for `symseq-core`.
//!
//! Exit status: 0 on success, 2 when a result carries numerical flags,
//! 1 on input errors. A batch exits with the largest status of its jobs.

pub mod batch;
pub mod config;
pub mod error;
pub mod input;
pub mod output;
pub mod run;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use config::{Command, Format, RunConfig};
pub use error::{CliError, SpecError};
pub use run::{execute, Output, Record};
pub use spec::{parse_pair, parse_space};

pub(crate) fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::TriangleGrowth { .. } => Format::Csv,
        _ => Format::Json,
    }
}

/// Runs a parsed config and emits its artifact; returns the exit status.
pub fn run(cfg: &RunConfig) -> Result<u8, CliError> {
    let (text, exit) = match &cfg.command {
        Command::Batch { manifest } => {
            batch::check_format(cfg.format)?;
            let jobs = batch::read_manifest(manifest)?;
            let summary = batch::run_batch(&jobs);
            (output::to_json(&summary)?, summary.exit)
        }
        cmd => {
            let record = execute(cfg)?;
            let format = cfg.format.unwrap_or_else(|| default_format(cmd));
            (output::render(&record, format)?, record.exit)
        }
    };
    match &cfg.out {
        Some(path) => output::write_atomic(path, &text)?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
        }
    }
    Ok(exit)
}

/// Entry point shared by the binary and tests.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => run::EXIT_INPUT,
            };
        }
    };
    match run(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            run::EXIT_INPUT
        }
    }
}
