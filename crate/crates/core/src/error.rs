use thiserror::Error;

/// Errors produced by the decoding workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} of {actual} exceeds the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("parity-check matrix is rank deficient (rank {rank} < {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },

    #[error("satisfier weight {weight} must exceed the total LLR magnitude {required}")]
    WeightTooSmall { weight: f64, required: f64 },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid bit vector: {0}")]
    InvalidBits(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input")]
    EmptyInput,

    #[error("frame has no preamble blocks")]
    NoPreamble,

    #[error("unsupported code family: {0}")]
    UnsupportedFamily(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}
