use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed Pauli text: {0}")]
    ParsePauli(String),
    #[error("singular matrix")]
    Singular,
    #[error("linearly dependent generators")]
    Dependent,
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("qubit count {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("query budget exhausted after {used} queries (limit {limit})")]
    BudgetExceeded { used: u64, limit: u64 },
    #[error("state is outside the expanded-frame form: {0}")]
    NotRepresentable(String),
    #[error("oracle misuse: {0}")]
    Oracle(String),
    #[error("sampled words have rank {rank}, need at least {needed}")]
    RankDeficient { rank: usize, needed: usize },
    #[error("primary search failed: {0}")]
    SearchFailed(String),
    #[error("measurements are inconsistent with the target class: {0}")]
    InconsistentTarget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
