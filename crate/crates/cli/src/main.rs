mod args;
mod commands;
mod output;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] l1tv::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Usage(String),

    #[error("solver result matches no candidate: {0}")]
    Novel(String),

    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use l1tv::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::InvalidShape(_)
                | E::Inadmissible(_)
                | E::Infeasible(_)
                | E::NoValidCandidate => 2,
                E::MemoryBudget { .. } | E::ResolutionOverflow { .. } => 4,
                _ => 1,
            },
            CliError::Io { .. } | CliError::Usage(_) => 1,
            CliError::Novel(_) => 3,
            CliError::VerifyFailed { .. } => 5,
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("L1TV_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "L1TV_THREADS must be a positive integer, got '{value}'"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Energy(a) => commands::energy(&a),
        Command::Phase(a) => commands::phase(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Solve(a) => commands::solve(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
