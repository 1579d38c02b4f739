use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The characteristic-number series has a vanishing denominator at this order.
    #[error("Mathieu series is singular at m_eff = {m_eff} (use the matrix method)")]
    SeriesSingular { m_eff: f64 },

    #[error("Mathieu truncation failure: {0}")]
    Truncation(String),

    /// Radicand of λ is non-positive: the state is not a normalizable bound state.
    #[error("unbound angular state: radicand {radicand} <= 0 for m = {m}")]
    UnboundAngular { m: u32, radicand: f64 },

    #[error("accuracy target {target:e} not reached (achieved {achieved:e}): {what}")]
    Accuracy {
        what: String,
        achieved: f64,
        target: f64,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Non-fatal conditions attached to a computed value.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The Mathieu parameter lies outside the range where the truncated
    /// characteristic-number series is trusted.
    Validity { m_eff: f64, b: f64, limit: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::Validity { m_eff, b, limit } => write!(
                f,
                "b = {b} is outside the Mathieu series validity range b <= {limit} at m_eff = {m_eff}"
            ),
        }
    }
}
