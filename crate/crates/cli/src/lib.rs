//! Command-line driver: target generation, learning, verification,
//! distribution dumps and batch experiments.

pub mod args;
pub mod bench;
pub mod commands;
pub mod learn;
pub mod report;

use std::fmt;

pub use args::Cli;
pub use report::ExperimentReport;

/// Outcome of a failed command, mapped to an exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// Bad flags, unreadable files or guard violations; exit code 2.
    Usage(String),
    /// Learner or verification failure; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    use args::Command;
    match &cli.command {
        Command::GenTarget(a) => commands::gen_target(a),
        Command::Learn(a) => commands::learn(a),
        Command::Verify(a) => commands::verify(a),
        Command::Dist(a) => commands::dist(a),
        Command::Bench(a) => bench::bench(a),
    }
}
