use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("enumeration budget exceeded: {needed} terms requested, budget is {budget}")]
    EnumerationBudget { needed: u64, budget: u64 },

    #[error("{0} is infinite for this configuration")]
    InfiniteMoment(&'static str),

    #[error("operation requires a discrete jump law on the non-negative integers")]
    NotDiscrete,

    #[error("operation is not supported for this jump law: {0}")]
    UnsupportedLaw(String),

    #[error("truncation tail mass {tail:.3e} exceeds threshold {threshold:.3e}")]
    Truncation { tail: f64, threshold: f64 },

    #[error("time {t} lies beyond the path horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    #[error("simulation budget exhausted: {0}")]
    Budget(String),

    #[error("missing input: {0}")]
    Missing(&'static str),

    #[error("replicate {index} failed: {source}")]
    Replicate { index: u64, source: Box<Error> },

    #[error("insufficient data: {0}")]
    Insufficient(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn ensure_finite_nonneg(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(invalid(name, format!("must be finite and non-negative, got {v}")));
    }
    Ok(())
}

pub(crate) fn ensure_positive(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(invalid(name, format!("must be finite and positive, got {v}")));
    }
    Ok(())
}
