use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("form is not positive definite: leading principal minor of order {order} is {value}")]
    NotPositiveDefinite { order: usize, value: Rational },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank {rank} exceeds the configured limit {limit}")]
    RankLimit { rank: usize, limit: usize },
    #[error("orbit exceeds the configured cap of {0} points")]
    OrbitCap(usize),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("graph is not connected")]
    Disconnected,
}

impl Error {
    /// Whether this error stems from a configured cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::RankLimit { .. } | Error::OrbitCap(_) | Error::SizeLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
