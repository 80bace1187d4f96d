//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: operands have sizes {left} and {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("rank {rank} out of range for {what} (valid range 0..{count})")]
    RankOutOfRange {
        what: &'static str,
        rank: u64,
        count: u64,
    },

    #[error("budget `{name}` exceeded: limit {limit}, requested {requested}")]
    BudgetExceeded {
        name: &'static str,
        limit: u64,
        requested: u64,
    },

    #[error("invalid star center: {0}")]
    InvalidCenter(String),

    #[error("vertex {0} already lies inside the star")]
    VertexInStar(usize),

    #[error("operation requires a nonempty vertex set")]
    EmptySet,

    #[error("second-smallest eigenvalue unavailable; supply one or use a graph within the dense-spectrum budget")]
    SecondEigenvalueUnavailable,

    #[error("eigenvalue {0} is not within snapping tolerance of an integer")]
    NonIntegralSpectrum(f64),

    #[error("spectrum audit failed: {0}")]
    SpectrumAudit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
