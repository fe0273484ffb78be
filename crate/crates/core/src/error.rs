use std::path::PathBuf;

use thiserror::Error;

use crate::instance::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("enumeration budget exceeded: {size} bits > {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance failed validation: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("{}: {msg}", path.display())]
    Parse { path: PathBuf, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("LP vertex classification failed: {0}")]
    VertexClassificationFailed(String),

    #[error("operation requires a non-integral LP solution")]
    IntegralSolution,

    #[error("unsupported K = {0} (presets exist for K = 4 and K = 6)")]
    UnsupportedK(usize),

    #[error("no certificate passed the checks on the grid")]
    NoCertificate,

    #[error("enumeration cap exceeded: 2^{blocks} candidates > cap {cap}")]
    CapExceeded { blocks: usize, cap: u64 },

    #[error("epsilon must have an integer reciprocal, got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), msg: msg.into() }
    }
}
