use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::polyarith::{IntPolynomial, Rational};

/// Positive divisors of `|m|` in increasing order. `m` must be nonzero.
pub fn positive_divisors(m: i64) -> Vec<i64> {
    let m = m.unsigned_abs();
    debug_assert!(m != 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d as i64);
            if d * d != m {
                large.push((m / d) as i64);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `v^m * p(u/v)` for `p` of degree `m`, evaluated exactly.
fn homogeneous_eval(coeffs: &[i64], u: i64, v: i64) -> Result<i128> {
    let (u, v) = (u as i128, v as i128);
    let mut acc: i128 = 0;
    let mut vpow: i128 = 1;
    // acc accumulates a_i u^i v^(m-i) from the top down via Horner in u,
    // multiplying each lower coefficient by the matching power of v.
    for (k, &a) in coeffs.iter().rev().enumerate() {
        if k > 0 {
            vpow = vpow.checked_mul(v).ok_or(Error::Overflow("root test"))?;
        }
        acc = acc
            .checked_mul(u)
            .and_then(|x| x.checked_add((a as i128).checked_mul(vpow)?))
            .ok_or(Error::Overflow("root test"))?;
    }
    Ok(acc)
}

/// Calls `visit(u, v)` for each rational root `u/v` (lowest terms, `v > 0`)
/// of `p` until it returns `false`. Zero is reported first when present.
fn for_each_root(p: &IntPolynomial, mut visit: impl FnMut(i64, i64) -> bool) -> Result<()> {
    let coeffs = p.coeffs();
    let low = coeffs
        .iter()
        .position(|&c| c != 0)
        .ok_or(Error::ZeroPolynomial)?;
    if low > 0 && !visit(0, 1) {
        return Ok(());
    }
    let q = &coeffs[low..];
    if q.len() < 2 {
        return Ok(());
    }
    let lead = *q.last().unwrap();
    let constant = q[0];
    // Cheap necessary conditions: (v - u) | q(1) and (v + u) | q(-1).
    let at_one = p_at(q, 1);
    let at_minus_one = p_at(q, -1);
    let vs = positive_divisors(lead);
    let us = positive_divisors(constant);
    for &v in &vs {
        for &u_abs in &us {
            if u_abs.gcd(&v) != 1 {
                continue;
            }
            for u in [u_abs, -u_abs] {
                if let (Some(one), Some(minus)) = (at_one, at_minus_one) {
                    let a = v - u;
                    let b = v + u;
                    if (a != 0 && one % a as i128 != 0) || (b != 0 && minus % b as i128 != 0) {
                        continue;
                    }
                }
                if homogeneous_eval(q, u, v)? == 0 && !visit(u, v) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn p_at(coeffs: &[i64], x: i128) -> Option<i128> {
    coeffs
        .iter()
        .rev()
        .try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c as i128))
}

/// All rational roots of `p`, each in lowest terms.
pub fn rational_roots(p: &IntPolynomial) -> Result<BTreeSet<Rational>> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::precondition("rational_roots needs degree >= 1")),
        _ => {}
    }
    let mut roots = BTreeSet::new();
    for_each_root(p, |u, v| {
        roots.insert(Rational::new(u, v));
        true
    })?;
    Ok(roots)
}

/// The first rational root found, as `(u, v)` with `v > 0`.
pub(crate) fn first_rational_root(p: &IntPolynomial) -> Result<Option<(i64, i64)>> {
    let mut found = None;
    for_each_root(p, |u, v| {
        found = Some((u, v));
        false
    })?;
    Ok(found)
}
