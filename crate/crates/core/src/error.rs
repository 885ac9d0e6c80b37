use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("bath frequencies are not uniformly spaced")]
    NonUniformBath,

    #[error("diagonal coefficient {0} is below the vacuum bound c = 1")]
    BelowVacuum(f64),

    #[error("mode {mode} sits at the zero-temperature boundary (c = {c}); 1/T diverges")]
    ZeroTemperatureBoundary { mode: usize, c: f64 },

    #[error("free energy is undefined at the zero-temperature boundary")]
    UndefinedFreeEnergy,

    #[error("dense oracle refuses N = {n}: cap is {cap}")]
    OracleCapExceeded { n: usize, cap: usize },

    #[error("eigensolver failed to converge for eigenvalue {index}")]
    EigenNonConvergence { index: usize },

    #[error("snapshot and baseline describe different models: {0}")]
    ModelMismatch(String),

    #[error("time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
