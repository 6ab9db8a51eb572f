use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("scale must be finite and > 0, got {0}")]
    InvalidScale(f64),
    #[error("location must be finite, got {0}")]
    InvalidLocation(f64),
    #[error("argument must be finite, got {0}")]
    NonFinite(f64),
    #[error("probability must lie in (0, 1), got {0}")]
    InvalidProbability(f64),
    #[error("sample count must be at least {min}, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("zero denominator: {0}")]
    ZeroDenominator(&'static str),
    #[error("index must be at least {min}, got {got}")]
    InvalidIndex { min: u64, got: u64 },
    #[error("{value} lies outside the open support ({lo}, {hi})")]
    OutsideSupport { value: f64, lo: f64, hi: f64 },
    #[error("samples contain NaN")]
    NanSample,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid integration interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("{0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
