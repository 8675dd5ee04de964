use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Errors produced by every numerical operation in the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integral does not converge: {0}")]
    DivergentIntegral(String),

    #[error("fit is underdetermined: {0}")]
    DegenerateInput(String),

    #[error("target mean {target} is not attainable for lambda in [{lo:e}, {hi:e}]")]
    NoBracket { target: f64, lo: f64, hi: f64 },

    #[error("target mean {target} lies outside [{min}, {max}]")]
    InfeasibleConstraint { target: f64, min: f64, max: f64 },

    #[error("unknown distribution '{0}'")]
    UnknownDistribution(String),

    #[error("parameter '{name}' = {value} is out of domain: {rule}")]
    ParameterOutOfDomain {
        name: String,
        value: f64,
        rule: String,
    },

    #[error("map is not monotone: {0}")]
    NonMonotoneMap(String),

    #[error("grid too narrow: characteristic function is {residual:e} at the dual boundary")]
    GridTooNarrow { residual: f64 },

    #[error("negative ringing {relative:e} of the peak exceeds tolerance")]
    RingingExceedsTolerance { relative: f64 },

    #[error("renormalization drift {0:e} exceeds tolerance")]
    RenormalizationDrift(f64),

    #[error("invalid process: {0}")]
    InvalidSpec(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_) => ErrorKind::DomainError,
            Error::DivergentIntegral(_) => ErrorKind::DivergentIntegral,
            Error::DegenerateInput(_) => ErrorKind::DegenerateInput,
            Error::NoBracket { .. } => ErrorKind::NoBracket,
            Error::InfeasibleConstraint { .. } => ErrorKind::InfeasibleConstraint,
            Error::UnknownDistribution(_) => ErrorKind::UnknownDistribution,
            Error::ParameterOutOfDomain { .. } => ErrorKind::ParameterOutOfDomain,
            Error::NonMonotoneMap(_) => ErrorKind::NonMonotoneMap,
            Error::GridTooNarrow { .. } => ErrorKind::GridTooNarrow,
            Error::RingingExceedsTolerance { .. } => ErrorKind::RingingExceedsTolerance,
            Error::RenormalizationDrift(_) => ErrorKind::RenormalizationDrift,
            Error::InvalidSpec(_) => ErrorKind::InvalidSpec,
            Error::UnknownScenario(_) => ErrorKind::UnknownScenario,
            Error::Malformed(_) => ErrorKind::Malformed,
            Error::Io(_) => ErrorKind::Io,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorKind {
    DomainError,
    DivergentIntegral,
    DegenerateInput,
    NoBracket,
    InfeasibleConstraint,
    UnknownDistribution,
    ParameterOutOfDomain,
    NonMonotoneMap,
    GridTooNarrow,
    RingingExceedsTolerance,
    RenormalizationDrift,
    InvalidSpec,
    UnknownScenario,
    Malformed,
    Io,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
