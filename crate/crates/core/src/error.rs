use std::fmt;
use std::io;

use thiserror::Error;

use crate::bus::BusError;

pub type Result<T> = std::result::Result<T, Error>;

/// Which kind of singularity aborted a factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularKind {
    /// The pivot column had no entries at all.
    Structural,
    /// Every pivot candidate was exactly zero.
    Numerical,
}

impl fmt::Display for SingularKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularKind::Structural => write!(f, "structural"),
            SingularKind::Numerical => write!(f, "numerical"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (Matrix Market files, corpus manifests).
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Malformed rule-base configuration.
    #[error("rules line {line}: {msg}")]
    RuleConfig { line: usize, msg: String },

    #[error("matrix must be square, got {n_rows}x{n_cols}")]
    NonSquare { n_rows: usize, n_cols: usize },

    #[error("pattern is not symmetric: entry ({row},{col}) has no mirror")]
    AsymmetricPattern { row: usize, col: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Factorization aborted; `column` is the original column index.
    #[error("{kind} singularity at column {column}")]
    Singular { column: usize, kind: SingularKind },

    #[error("{0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Bus(#[from] BusError),

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::Singular { .. })
    }
}
