use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An arithmetic result escaped to a non-finite endpoint.
    #[error("interval blowup: non-finite endpoint")]
    IntervalBlowup,

    #[error("invalid interval: lo {lo} > hi {hi} or non-finite")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("division by an interval containing zero")]
    DivByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("model validation failed: {0}")]
    Validation(String),

    #[error("network format: {0}")]
    NetworkFormat(String),

    #[error("integrator cannot validate step (t = {t}, h = {h}): {msg}")]
    IntegratorStall { t: f64, h: f64, msg: String },

    #[error("reachability failed in cycle {cycle}: {source}")]
    Cycle {
        cycle: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("reachability failed for initial-set piece {piece}: {source}")]
    Piece {
        piece: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
