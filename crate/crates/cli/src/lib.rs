//! The `lmg` command-line tool.
//!
//! Subcommands map a `(J, γ)` grid through the pure functions of `lmg_core`
//! on a worker pool and collect results by grid index, so the emitted bytes
//! do not depend on the thread count.
//!
//! Exit status: 0 when every check passed and the data was written, 1 on a
//! verification failure, 2 on a usage or configuration error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
mod commands;
pub mod grid;
pub mod output;
pub mod plot;

use std::ffi::OsString;

use clap::Parser;
use lmg_core::LmgError;

use crate::args::Cli;

pub const THREADS_ENV: &str = "LMG_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags or a configuration the library rejects.
    Usage(String),
    /// A check ran and did not pass.
    Failure(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn failure(msg: impl Into<String>) -> Self {
        CliError::Failure(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<LmgError> for CliError {
    fn from(e: LmgError) -> Self {
        match e {
            LmgError::NotIntegerSpin { .. }
            | LmgError::InvalidParameter(_)
            | LmgError::DegenerateAnisotropy { .. }
            | LmgError::DimensionTooLarge { .. }
            | LmgError::MethodUnavailable(_)
            | LmgError::OverflowRisk { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

/// Worker count: `--threads`, then `LMG_THREADS`, then available parallelism.
pub fn thread_count(flag: Option<usize>, env: Option<&str>) -> Result<usize, CliError> {
    let n = match (flag, env) {
        (Some(n), _) => n,
        (None, Some(raw)) => raw.trim().parse::<usize>().map_err(|_| {
            CliError::usage(format!(
                "{THREADS_ENV} must be a positive integer, got {raw:?}"
            ))
        })?,
        (None, None) => return Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    if n == 0 {
        return Err(CliError::usage("thread count must be at least 1"));
    }
    Ok(n)
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    match commands::execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("lmg: error: {m}"),
                CliError::Failure(m) => eprintln!("lmg: check failed: {m}"),
            }
            e.exit_code()
        }
    }
}
