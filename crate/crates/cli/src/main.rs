//! `hyperfrac`: tabulate, check and solve from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure or failed check, 2 usage error,
//! 3 numerical non-convergence.

mod check;
mod config;
mod output;
mod solve;
mod tabulate;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;
use hyperfrac_core::Error;

use config::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    NotConverged(String),
    Numerical(Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::NotConverged(m) => write!(f, "not converged: {m}"),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence(_) | Error::Accuracy(_) | Error::Calibration { .. } | Error::Divergence(_) => {
                CliError::Numerical(e)
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NotConverged(_) | CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HYPERFRAC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "HYPERFRAC_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {threads} worker threads: {e}")))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Tabulate { kind, lambda, config } => tabulate::run(kind, lambda, &config).map(|_| true),
        Command::Check {
            suite,
            lambda_exp,
            seed,
            config,
        } => check::run(suite, lambda_exp, seed, &config),
        Command::Solve {
            allow_critical,
            max_iter,
            report,
            config,
        } => solve::run(&config, allow_critical, max_iter, report).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("hyperfrac: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("hyperfrac: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
