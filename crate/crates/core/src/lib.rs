//! Exact census of reducible integer polynomials of bounded height.

pub mod analytic;
pub mod budget;
pub mod census;
pub mod error;
pub mod harness;
pub mod irreducibility;
pub mod polyarith;

pub use error::{Error, Result};
pub use polyarith::{FactorPair, IntPolynomial, Rational};
