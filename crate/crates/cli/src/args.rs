//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "stablearn", version, about = "Learn Clifford and T-depth-one circuits from simulated queries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random target circuit as JSON.
    GenTarget(GenTargetArgs),
    /// Learn a hypothesis for a target circuit.
    Learn(LearnArgs),
    /// Compare a hypothesis against a target with dense simulation.
    Verify(VerifyArgs),
    /// Print an exact outcome distribution as CSV.
    Dist(DistArgs),
    /// Run seeded batches of learning trials.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Clifford,
    Tdepth1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Frame,
    Dense,
}

impl From<BackendArg> for stablearn::Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Frame => stablearn::Backend::Frame,
            BackendArg::Dense => stablearn::Backend::Dense,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Basis,
    Unitary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistWhat {
    /// Bell outcomes on two copies of the output state.
    BellPsipsi,
    /// Bell outcomes on the conjugate state and the output state.
    BellConj,
    /// Probability of `+1` for one Pauli operator.
    Pauli,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Args)]
pub struct GenTargetArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: usize,
    /// Number of T gates.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, value_enum)]
    pub algo: Kind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Frame)]
    pub backend: BackendArg,
    /// Hypothesis output; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub hypothesis: PathBuf,
    #[arg(long, value_enum, default_value_t = VerifyMode::Basis)]
    pub mode: VerifyMode,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, value_enum)]
    pub what: DistWhat,
    /// Pauli operator for `--what pauli`, e.g. `-XZ`.
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Input bit string, character `j` is qubit `j`; all zeros if absent.
    #[arg(long)]
    pub input: Option<String>,
    /// Also compute the table by dense simulation and report the deviation.
    #[arg(long)]
    pub check_dense: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Kind,
    /// Inclusive qubit range such as `2..8`.
    #[arg(long, default_value = "2..6")]
    pub n_range: String,
    /// Largest T count for the tdepth1 suite.
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Frame)]
    pub backend: BackendArg,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Include wall-time percentiles, which makes reports differ between runs.
    #[arg(long)]
    pub timing: bool,
}

/// Parses `a..b`, `a..=b` or `a-b` as an inclusive range.
pub fn parse_range(s: &str) -> Option<(usize, usize)> {
    let (a, b) = if let Some((a, b)) = s.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = s.split_once('-') {
        (a, b)
    } else {
        (s, s)
    };
    let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (a <= b).then_some((a, b))
}
