//! Kronecker's factor search.
//!
//! A factor `g` of degree at most `k` is determined by its values at `k + 1`
//! distinct integers, and each value `g(x_i)` divides `p(x_i)`. Trying every
//! divisor tuple and interpolating is therefore a complete search.

use num_rational::Ratio;

use super::roots::positive_divisors;
use crate::budget::{Budget, WorkMeter, DEFAULT_STEP_LIMIT};
use crate::error::{Error, Result};
use crate::polyarith::IntPolynomial;

type Q128 = Ratio<i128>;

/// Sample points in the order 0, 1, -1, 2, -2, ...
pub fn sample_points(count: usize) -> Vec<i64> {
    (0..count as i64)
        .map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
        .collect()
}

/// Searches for a factor of `p` with degree between 1 and `k`, using the
/// default step budget.
pub fn kronecker_factor(p: &IntPolynomial, k: usize) -> Result<Option<IntPolynomial>> {
    kronecker_factor_with_budget(p, k, &Budget::steps(DEFAULT_STEP_LIMIT))
}

pub fn kronecker_factor_with_budget(
    p: &IntPolynomial,
    k: usize,
    budget: &Budget,
) -> Result<Option<IntPolynomial>> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if k == 0 || k >= n {
        return Err(Error::precondition(format!(
            "kronecker_factor needs 1 <= k <= deg p - 1 (k = {k}, deg = {n})"
        )));
    }
    if !p.is_primitive() {
        return Err(Error::precondition(
            "kronecker_factor needs a primitive polynomial",
        ));
    }
    let meter = WorkMeter::new("kronecker_factor", budget);

    let xs = sample_points(k + 1);
    let mut values = Vec::with_capacity(k + 1);
    for &x in &xs {
        let v = p.evaluate(x)?;
        if v == 0 {
            return Ok(Some(IntPolynomial::linear(1, -x)));
        }
        values.push(v);
    }

    // |g(x)| <= H(g) (k+1) max(1,|x|)^k and H(g) <= e^n H(p).
    let height_cap = (n as f64).exp() * p.height() as f64;
    let candidates: Vec<Vec<i64>> = xs
        .iter()
        .zip(&values)
        .enumerate()
        .map(|(i, (&x, &v))| {
            let reach = (k as f64 + 1.0) * (x.unsigned_abs().max(1) as f64).powi(k as i32);
            let cap = height_cap * reach;
            let mut ds = Vec::new();
            for d in positive_divisors(v) {
                if d as f64 > cap {
                    break;
                }
                ds.push(d);
                // g and -g are interchangeable, so fix g(x_0) > 0.
                if i > 0 {
                    ds.push(-d);
                }
            }
            ds
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }

    let mut idx = vec![0usize; k + 1];
    let mut ys = vec![0i64; k + 1];
    loop {
        meter.charge(1)?;
        for (i, &j) in idx.iter().enumerate() {
            ys[i] = candidates[i][j];
        }
        if let Some(g) = interpolate_integer(&xs, &ys)? {
            if g.degree().is_some_and(|d| d >= 1) && p.try_divide_exact(&g)?.is_some() {
                return Ok(Some(g.with_positive_lead()));
            }
        }
        // odometer, last sample point fastest
        let mut pos = k + 1;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < candidates[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Interpolates through `(xs[i], ys[i])` and returns the polynomial when all
/// of its coefficients are integers.
pub(crate) fn interpolate_integer(xs: &[i64], ys: &[i64]) -> Result<Option<IntPolynomial>> {
    let m = xs.len();
    // Newton divided differences.
    let mut dd: Vec<Q128> = ys.iter().map(|&y| Q128::from_integer(y as i128)).collect();
    for level in 1..m {
        for i in (level..m).rev() {
            let num = dd[i] - dd[i - 1];
            let den = (xs[i] - xs[i - level]) as i128;
            dd[i] = num / Q128::from_integer(den);
        }
    }
    // Expand the Newton form into monomial coefficients.
    let mut coeffs: Vec<Q128> = vec![Q128::from_integer(0); m];
    for i in (0..m).rev() {
        // coeffs = coeffs * (X - xs[i]) + dd[i]
        let shift = Q128::from_integer(xs[i] as i128);
        let mut next = vec![Q128::from_integer(0); m];
        for j in 0..m {
            if j + 1 < m {
                next[j + 1] += coeffs[j];
            }
            next[j] -= coeffs[j] * shift;
        }
        next[0] += dd[i];
        coeffs = next;
    }
    let mut out = Vec::with_capacity(m);
    for c in coeffs {
        if !c.is_integer() {
            return Ok(None);
        }
        let v = c.to_integer();
        out.push(i64::try_from(v).map_err(|_| Error::Overflow("interpolation"))?);
    }
    Ok(Some(IntPolynomial::new(out)))
}
