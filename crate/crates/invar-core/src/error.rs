//! Error types shared across the toolkit.

use thiserror::Error;

/// Unified error type for all analytics operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// A malformed line in an input file. `line` is 1-based and counts the
    /// header line of CSV inputs.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("zero-variance series: {0}")]
    ZeroVariance(String),

    #[error("degenerate return series: variance is zero")]
    DegenerateReturns,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown firm: {0}")]
    UnknownFirm(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("eigen solver did not converge after {sweeps} sweeps (off-diagonal sum {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        match err.kind() {
            csv::ErrorKind::Io(_) => {
                Error::Io(std::io::Error::other(err))
            }
            _ => Error::Parse {
                line,
                message: err.to_string(),
            },
        }
    }
}
