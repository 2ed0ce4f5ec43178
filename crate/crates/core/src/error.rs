use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {m}: {reason}")]
    InvalidDimension { m: usize, reason: &'static str },

    #[error("coin dimension {coin} does not match state dimension {state}")]
    DimensionMismatch { coin: usize, state: usize },

    #[error("marked node {marked} out of range for {nodes} nodes")]
    MarkedOutOfRange { marked: usize, nodes: usize },

    #[error("norm drifted to {norm} after {step} steps")]
    NormDrift { norm: f64, step: usize },

    #[error("dense operator of size {size} exceeds the limit of {limit}")]
    DenseTooLarge { size: usize, limit: usize },

    #[error("empty probability curve")]
    EmptyCurve,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
