//! Reducibility over the rationals.
//!
//! The oracle works on the primitive part: a rational root gives a linear
//! factor directly; otherwise Kronecker's search runs for factor degrees
//! `2..=n/2`. Content never counts as a factor.

mod eisenstein;
mod kronecker;
mod roots;
mod shells;

pub use eisenstein::{eisenstein_family, f1_witness, passes_eisenstein_at_2, EisensteinFamily};
pub use kronecker::{kronecker_factor, kronecker_factor_with_budget, sample_points};
pub use roots::{positive_divisors, rational_roots};
pub use shells::{shell_count, shell_count_with_budget, shell_size, ShellClass, ShellCount};

use crate::budget::{Budget, DEFAULT_STEP_LIMIT};
use crate::error::{Error, Result};
use crate::polyarith::{FactorPair, IntPolynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducibilityVerdict {
    pub reducible: bool,
    /// Present iff `reducible`; `f * g` reproduces the input and both factors
    /// have positive degree. The content sits in `f`.
    pub witness: Option<FactorPair>,
}

impl ReducibilityVerdict {
    fn irreducible() -> Self {
        ReducibilityVerdict {
            reducible: false,
            witness: None,
        }
    }
}

/// Smallest-degree nontrivial factor of a primitive polynomial, if any.
/// A factor of minimal degree is irreducible.
fn smallest_factor(q: &IntPolynomial, budget: &Budget) -> Result<Option<IntPolynomial>> {
    let n = q.deg();
    if n < 2 {
        return Ok(None);
    }
    if let Some((u, v)) = roots::first_rational_root(q)? {
        return Ok(Some(IntPolynomial::linear(v, -u)));
    }
    for k in 2..=n / 2 {
        if let Some(g) = kronecker_factor_with_budget(q, k, budget)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

pub fn is_reducible_over_q(p: &IntPolynomial) -> Result<ReducibilityVerdict> {
    is_reducible_over_q_with_budget(p, &Budget::steps(DEFAULT_STEP_LIMIT))
}

pub fn is_reducible_over_q_with_budget(
    p: &IntPolynomial,
    budget: &Budget,
) -> Result<ReducibilityVerdict> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::precondition("reducibility needs degree >= 1")),
        _ => {}
    }
    let (content, q) = p.primitive_decompose()?;
    let Some(g) = smallest_factor(&q, budget)? else {
        return Ok(ReducibilityVerdict::irreducible());
    };
    let cofactor = q
        .try_divide_exact(&g)?
        .ok_or_else(|| Error::Inconsistency(format!("factor {g} does not divide {q}")))?;
    let f = cofactor.scale(content)?;
    Ok(ReducibilityVerdict {
        reducible: true,
        witness: Some(FactorPair {
            f_primitive: content == 1,
            g_irreducible: true,
            f,
            g,
        }),
    })
}

/// Irreducible factors of the primitive part of `p`, sorted by degree then
/// coefficients, each with positive leading coefficient. Content and sign are
/// dropped.
pub fn irreducible_factors(p: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let budget = Budget::steps(DEFAULT_STEP_LIMIT);
    let (_, mut q) = p.primitive_decompose()?;
    let mut out = Vec::new();
    while q.deg() >= 1 {
        match smallest_factor(&q, &budget)? {
            Some(g) => {
                let g = g.with_positive_lead();
                q = q.try_divide_exact(&g)?.ok_or_else(|| {
                    Error::Inconsistency(format!("factor {g} does not divide {q}"))
                })?;
                out.push(g);
            }
            None => {
                out.push(q.with_positive_lead());
                break;
            }
        }
    }
    out.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Degree-2 oracle: `a2 X^2 + a1 X + a0` (with `a2 != 0`) is reducible iff
/// its discriminant is a perfect square.
pub fn quadratic_is_reducible(a2: i64, a1: i64, a0: i64) -> bool {
    debug_assert!(a2 != 0);
    let disc = (a1 as i128) * (a1 as i128) - 4 * (a2 as i128) * (a0 as i128);
    if disc < 0 {
        return false;
    }
    let r = disc.isqrt();
    r * r == disc
}
