//! Integrals of monomials over the hyperbolic regions
//! `D(T) = {x, y >= 1, xy <= T}` and `D_n(T) = {x_i >= 1, prod x_i <= T}`.

use crate::error::{Error, Result};

use super::quadrature::{integrate, Tolerance};

/// Exponent gap below which the equal-exponent closed form is used.
pub const EQUAL_EXPONENT_TOLERANCE: f64 = 1e-9;

/// Largest dimension accepted by [`integral_in`].
pub const MAX_DIMENSION: usize = 8;

const CHEBYSHEV_NODES: usize = 128;

/// `int int_(D(T)) x^a y^b`, by closed form.
///
/// For `a != b` this is `1/((a+1)(b+1)) + (T^(a+1)/(a+1) - T^(b+1)/(b+1))/(a-b)`,
/// evaluated as `T^(b+1)/(b+1) * (T^(a-b) - 1)/(a-b) - (T^(a+1) - 1)/((a+1)(b+1))`
/// with `expm1`, which is the same expression free of cancellation. When
/// `|a - b|` is below [`EQUAL_EXPONENT_TOLERANCE`] the equal-exponent form
/// `T^(c+1) log T/(c+1) - (T^(c+1) - 1)/(c+1)^2` at `c = (a+b)/2` is used;
/// the two agree to first order in `a - b`.
pub fn integral_i(t: f64, a: f64, b: f64) -> Result<f64> {
    if !(t >= 1.0 && a >= 0.0 && b >= 0.0) || !(t.is_finite() && a.is_finite() && b.is_finite()) {
        return Err(Error::precondition(format!(
            "integral needs T >= 1 and a, b >= 0, got T={t}, a={a}, b={b}"
        )));
    }
    let log_t = t.ln();
    if (a - b).abs() < EQUAL_EXPONENT_TOLERANCE {
        let c1 = 0.5 * (a + b) + 1.0;
        return Ok(t.powf(c1) * log_t / c1 - (c1 * log_t).exp_m1() / (c1 * c1));
    }
    let (a1, b1) = (a + 1.0, b + 1.0);
    let ratio = ((a - b) * log_t).exp_m1() / (a - b);
    Ok(t.powf(b1) / b1 * ratio - (a1 * log_t).exp_m1() / (a1 * b1))
}

/// `int_(D_n(T)) x_1 ... x_n`, by the recursion
/// `I_1(T) = (T^2 - 1)/2`, `I_n(T) = int_1^T x I_(n-1)(T/x) dx`.
///
/// In logarithmic coordinates `I_m(e^L) = e^(2L) h_m(L)` where
/// `h_1(L) = (1 - e^(-2L))/2` and the recursion becomes
/// `h_m(L) = int_0^L h_(m-1)(s) ds`. Each intermediate `h_m` is tabulated at
/// Chebyshev points of `[0, log T]` by adaptive quadrature of the previous
/// level; the last level is integrated directly.
pub fn integral_in(n: usize, t: f64) -> Result<f64> {
    if n == 0 || n > MAX_DIMENSION || !(t >= 1.0) || !t.is_finite() {
        return Err(Error::precondition(format!(
            "I_n(T) needs 1 <= n <= {MAX_DIMENSION} and finite T >= 1, got n={n}, T={t}"
        )));
    }
    if n == 1 {
        return Ok(0.5 * (t * t - 1.0));
    }
    let big_l = t.ln();
    if big_l == 0.0 {
        return Ok(0.0);
    }
    let mut level = Chebyshev::sample(big_l, |s| Ok(-0.5 * (-2.0 * s).exp_m1()))?;
    for _ in 2..n {
        let prev = level;
        // interpolation noise is absolute, so near 0 only an absolute target is reachable
        let tol = Tolerance {
            relative: 1e-12,
            absolute: 1e-15 * prev.magnitude() * big_l,
        };
        level = Chebyshev::sample(big_l, |x| integrate(|s| prev.eval(s), 0.0, x, tol))?;
    }
    let top = integrate(|s| level.eval(s), 0.0, big_l, Tolerance::relative(1e-11))?;
    Ok(t * t * top)
}

/// Barycentric interpolant through Chebyshev points of the second kind.
struct Chebyshev {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl Chebyshev {
    fn sample(len: f64, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let m = CHEBYSHEV_NODES;
        let nodes: Vec<f64> = (0..=m)
            .map(|j| 0.5 * len * (1.0 - (std::f64::consts::PI * j as f64 / m as f64).cos()))
            .collect();
        let values = nodes.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        let weights = (0..=m)
            .map(|j| {
                let w = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == m {
                    0.5 * w
                } else {
                    w
                }
            })
            .collect();
        Ok(Chebyshev {
            nodes,
            values,
            weights,
        })
    }

    fn magnitude(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn eval(&self, x: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for ((&xj, &fj), &wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = x - xj;
            if d == 0.0 {
                return fj;
            }
            let c = wj / d;
            num += c * fj;
            den += c;
        }
        num / den
    }
}

/// Both sides of
/// `int_1^T (log(T/u))^(n-2) (2 log(T/u) + n - 1) u^(-1) du = (2/n)(log T)^n + (log T)^(n-1)`;
/// the left side by quadrature, the right in closed form.
pub fn section5_identity_check(n: usize, t: f64) -> Result<(f64, f64)> {
    if !(2..=MAX_DIMENSION).contains(&n) || !(t >= 1.0) || !t.is_finite() {
        return Err(Error::precondition(format!(
            "identity check needs 2 <= n <= {MAX_DIMENSION} and finite T >= 1, got n={n}, T={t}"
        )));
    }
    let nf = n as f64;
    let lhs = integrate(
        |u| {
            let l = (t / u).ln().max(0.0);
            l.powi(n as i32 - 2) * (2.0 * l + nf - 1.0) / u
        },
        1.0,
        t,
        Tolerance {
            relative: 1e-12,
            absolute: 1e-300,
        },
    )?;
    let log_t = t.ln();
    let rhs = 2.0 / nf * log_t.powi(n as i32) + log_t.powi(n as i32 - 1);
    Ok((lhs, rhs))
}
