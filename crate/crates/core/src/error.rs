use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("sequence must have at least one entry")]
    Empty,
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("exponent {0} outside [1, inf]")]
    ExponentRange(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector of length {len} exceeds the weight sequence length {max}")]
    TooLong { len: usize, max: usize },
    #[error("invalid Orlicz function: {0}")]
    InvalidOrlicz(String),
    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),
    #[error("Luxemburg gauge bracket not established within {0} steps")]
    Bracket(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("factorization tolerance not met: norm product ratio {achieved} > {allowed}")]
    FactorizationTolerance { achieved: f64, allowed: f64 },
}

/// Rejects empty input and NaN/inf entries.
pub(crate) fn check_finite(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Empty);
    }
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}
