use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("invalid ground metric: {0}")]
    InvalidMetric(String),

    #[error("edge ({0}, {1}) is part of the tree")]
    EdgeInTree(usize, usize),

    #[error("not a spanning tree: {0}")]
    InvalidTree(String),

    /// The request is outside the supported problem range (size, degree,
    /// arity). The message names the bound that was exceeded.
    #[error("unsupported: {0}")]
    Capability(String),

    #[error("{0}")]
    NumericInfeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
