use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("the zero polynomial is not admissible here")]
    ZeroPolynomial,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("work limit of {limit} steps exceeded in {what}")]
    WorkLimit { what: &'static str, limit: u64 },

    #[error("time budget of {0:?} exceeded")]
    TimeBudget(Duration),

    #[error("projected memory {projected} bytes exceeds budget {budget} bytes ({what})")]
    MemoryBudget {
        what: String,
        projected: u64,
        budget: u64,
    },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("cache mismatch for {fingerprint}: stored {stored}, computed {computed}")]
    CacheMismatch {
        fingerprint: String,
        stored: u64,
        computed: u64,
    },

    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for refusals caused by a resource budget rather than bad input.
    pub fn is_budget_refusal(&self) -> bool {
        matches!(
            self,
            Error::WorkLimit { .. } | Error::TimeBudget(_) | Error::MemoryBudget { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
