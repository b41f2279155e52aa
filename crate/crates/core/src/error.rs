use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: must be at least {min}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("cutoff {0} must be even and at least 2")]
    InvalidCutoff(usize),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("{pairs} pairs do not fit in dimension {dim}")]
    TooManyPairs { pairs: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("imaginary residual {0:e} exceeds 1e-10")]
    ImaginaryResidual(f64),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for failures of the numerics themselves rather than of the inputs.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::ImaginaryResidual(_) | Error::Inconsistent(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
