//! Command-line front end, verification suites, and result persistence.

pub mod cli;
pub mod fixtures;
pub mod results;
pub mod verify;

use crate::error::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_VERIFY_FAILED: u8 = 4;
pub const EXIT_INCONSISTENT: u8 = 5;

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Precondition(_) | Error::ZeroPolynomial => EXIT_USAGE,
        Error::Overflow(_)
        | Error::WorkLimit { .. }
        | Error::TimeBudget(_)
        | Error::MemoryBudget { .. } => EXIT_BUDGET,
        Error::Inconsistency(_) | Error::CacheMismatch { .. } => EXIT_INCONSISTENT,
        Error::Quadrature(_) | Error::Format { .. } | Error::Io(_) | Error::Json(_) => EXIT_RUNTIME,
    }
}

/// Short machine-readable name for an error's kind.
pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Precondition(_) | Error::ZeroPolynomial => "usage",
        Error::Overflow(_) => "overflow",
        Error::WorkLimit { .. } | Error::TimeBudget(_) | Error::MemoryBudget { .. } => "budget",
        Error::Inconsistency(_) => "inconsistency",
        Error::CacheMismatch { .. } => "cache-mismatch",
        Error::Quadrature(_) => "quadrature",
        Error::Format { .. } => "format",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}
