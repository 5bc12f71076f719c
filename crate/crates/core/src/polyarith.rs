//! Dense univariate polynomials with `i64` coefficients.
//!
//! Every operation is exact: intermediate results use checked arithmetic and
//! overflow surfaces as [`Error::Overflow`] instead of wrapping.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rational numbers in lowest terms with a positive denominator.
pub type Rational = num_rational::Rational64;

/// An integer polynomial stored in ascending order: `coeffs[i]` multiplies `X^i`.
///
/// The last stored coefficient is never zero. The zero polynomial is the
/// distinguished empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_slice(coeffs: &[i64]) -> Self {
        Self::new(coeffs.to_vec())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// `X^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        IntPolynomial { coeffs }
    }

    /// `a X + b`
    pub fn linear(a: i64, b: i64) -> Self {
        Self::new(vec![b, a])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a polynomial already known to be nonzero.
    pub(crate) fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Maximum absolute coefficient.
    pub fn height(&self) -> i64 {
        height_of(&self.coeffs)
    }

    pub(crate) fn require_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(())
        }
    }

    pub fn multiply(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        self.require_nonzero()?;
        other.require_nonzero()?;
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(Error::Overflow("multiply"))?;
                out[i + j] = out[i + j]
                    .checked_add(term)
                    .ok_or(Error::Overflow("multiply"))?;
            }
        }
        Ok(IntPolynomial { coeffs: out })
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate(&self, x: i64) -> Result<i64> {
        self.require_nonzero()?;
        let mut acc: i64 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(c))
                .ok_or(Error::Overflow("evaluate"))?;
        }
        Ok(acc)
    }

    /// Positive gcd of the coefficients.
    pub fn content(&self) -> Result<i64> {
        self.require_nonzero()?;
        Ok(self.coeffs.iter().fold(0i64, |g, &c| g.gcd(&c)))
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1
    }

    /// Splits `p` into `(content, primitive part)`; the sign stays with the
    /// primitive part.
    pub fn primitive_decompose(&self) -> Result<(i64, IntPolynomial)> {
        let content = self.content()?;
        let coeffs = self.coeffs.iter().map(|&c| c / content).collect();
        Ok((content, IntPolynomial { coeffs }))
    }

    /// Exact division by `divisor`, returning `None` unless the quotient exists
    /// and has integer coefficients.
    ///
    /// Long division runs from the top coefficient and stops at the first step
    /// whose leading term is not divisible.
    pub fn try_divide_exact(&self, divisor: &IntPolynomial) -> Result<Option<IntPolynomial>> {
        self.require_nonzero()?;
        divisor.require_nonzero()?;
        let (n, d) = (self.deg(), divisor.deg());
        if d > n {
            return Ok(None);
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; n - d + 1];
        for k in (0..=n - d).rev() {
            let top = rem[k + d];
            if top % lead != 0 {
                return Ok(None);
            }
            let q = top / lead;
            quot[k] = q;
            if q == 0 {
                continue;
            }
            for (j, &g) in divisor.coeffs.iter().enumerate() {
                let sub = q.checked_mul(g).ok_or(Error::Overflow("divide"))?;
                rem[k + j] = rem[k + j]
                    .checked_sub(sub)
                    .ok_or(Error::Overflow("divide"))?;
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return Ok(None);
        }
        Ok(Some(IntPolynomial::new(quot)))
    }

    pub fn negate(&self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    /// `p(-X)`
    pub fn reflect(&self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
                .collect(),
        }
    }

    /// Returns `(-p, p(-X))`.
    pub fn canonical_maps(&self) -> Result<(IntPolynomial, IntPolynomial)> {
        self.require_nonzero()?;
        Ok((self.negate(), self.reflect()))
    }

    pub fn scale(&self, c: i64) -> Result<IntPolynomial> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| a.checked_mul(c).ok_or(Error::Overflow("scale")))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPolynomial::new(coeffs))
    }

    /// Normalizes the sign so the leading coefficient is positive.
    pub fn with_positive_lead(&self) -> IntPolynomial {
        if self.leading() < 0 {
            self.negate()
        } else {
            self.clone()
        }
    }
}

pub(crate) fn height_of(coeffs: &[i64]) -> i64 {
    coeffs.iter().map(|c| c.abs()).max().unwrap_or(0)
}

pub(crate) fn gcd_of(coeffs: &[i64]) -> i64 {
    coeffs.iter().fold(0i64, |g, &c| g.gcd(&c))
}

impl TryFrom<Vec<i64>> for IntPolynomial {
    type Error = String;

    fn try_from(coeffs: Vec<i64>) -> std::result::Result<Self, Self::Error> {
        if coeffs.last() == Some(&0) {
            return Err("trailing zero coefficient".into());
        }
        Ok(IntPolynomial { coeffs })
    }
}

impl From<IntPolynomial> for Vec<i64> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "X")?,
                (1, m) => write!(f, "{m}X")?,
                (k, 1) => write!(f, "X^{k}")?,
                (k, m) => write!(f, "{m}X^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// An ordered pair `(f, g)` with `f * g` equal to the polynomial under study.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorPair {
    pub f: IntPolynomial,
    pub g: IntPolynomial,
    pub f_primitive: bool,
    pub g_irreducible: bool,
}

impl FactorPair {
    pub fn product(&self) -> Result<IntPolynomial> {
        self.f.multiply(&self.g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_slice(c)
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(p(&[1, 1]).multiply(&p(&[-1, 1])).unwrap(), p(&[-1, 0, 1]));
        let prod = p(&[3, 2]).multiply(&p(&[-1, 1])).unwrap();
        assert_eq!(prod, p(&[-3, 1, 2]));
        // Gelfond window for the same example, n = 2.
        let (hp, hq, hpq) = (3.0, 1.0, prod.height() as f64);
        assert!((-2.0f64).exp() * hp * hq <= hpq && hpq <= 2.0 * hp * hq);
    }

    #[test]
    fn multiply_overflow_is_reported() {
        let big = p(&[i64::MAX / 2, 3]);
        assert!(matches!(big.multiply(&big), Err(Error::Overflow(_))));
        assert!(matches!(
            IntPolynomial::zero().multiply(&p(&[1])),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p(&[-1, 0, 1]).evaluate(1).unwrap(), 0);
        assert_eq!(p(&[2, -3, -3, 2]).evaluate(2).unwrap(), 0);
        assert_eq!(p(&[1, 0, 1]).evaluate(0).unwrap(), 1);
        assert!(p(&[0, 0, 0, 1]).evaluate(i64::MAX / 4).is_err());
    }

    #[test]
    fn primitive_decompose_examples() {
        assert_eq!(
            p(&[2, 4, 6]).primitive_decompose().unwrap(),
            (2, p(&[1, 2, 3]))
        );
        assert_eq!(p(&[0, -2]).primitive_decompose().unwrap(), (2, p(&[0, -1])));
        assert_eq!(
            p(&[0, -1, 0, 1]).primitive_decompose().unwrap(),
            (1, p(&[0, -1, 0, 1]))
        );
    }

    #[test]
    fn divide_examples() {
        assert_eq!(
            p(&[-1, 0, 1]).try_divide_exact(&p(&[-1, 1])).unwrap(),
            Some(p(&[1, 1]))
        );
        assert_eq!(p(&[1, 0, 1]).try_divide_exact(&p(&[-1, 1])).unwrap(), None);
        assert_eq!(
            p(&[-3, 1, 2]).try_divide_exact(&p(&[3, 2])).unwrap(),
            Some(p(&[-1, 1]))
        );
        // rational but non-integer quotient
        assert_eq!(p(&[1, 1]).try_divide_exact(&p(&[2, 2])).unwrap(), None);
    }

    #[test]
    fn canonical_map_examples() {
        assert_eq!(
            p(&[0, 1, 1]).canonical_maps().unwrap(),
            (p(&[0, -1, -1]), p(&[0, -1, 1]))
        );
        assert_eq!(
            p(&[0, 0, 0, 1]).canonical_maps().unwrap(),
            (p(&[0, 0, 0, -1]), p(&[0, 0, 0, -1]))
        );
        let q = p(&[2, -5, 3]);
        assert_eq!(q.reflect().height(), 5);
        assert_eq!(q.height(), 5);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-3, 1, 2]).to_string(), "2X^2 + X - 3");
        assert_eq!(p(&[0, -1]).to_string(), "-X");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn multiply_commutative_associative_small() {
        let range = -1..=1i64;
        let mut polys = Vec::new();
        for a in range.clone() {
            for b in range.clone() {
                if b != 0 {
                    polys.push(p(&[a, b]));
                }
            }
        }
        for x in &polys {
            for y in &polys {
                assert_eq!(x.multiply(y).unwrap(), y.multiply(x).unwrap());
                for z in &polys {
                    let l = x.multiply(y).unwrap().multiply(z).unwrap();
                    let r = x.multiply(&y.multiply(z).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    fn nonzero_poly(max_deg: usize, max_h: i64) -> impl Strategy<Value = IntPolynomial> {
        (1..=max_deg)
            .prop_flat_map(move |d| {
                (
                    proptest::collection::vec(-max_h..=max_h, d),
                    (1..=max_h, any::<bool>()),
                )
            })
            .prop_map(|(mut c, (lead, neg))| {
                c.push(if neg { -lead } else { lead });
                IntPolynomial::new(c)
            })
    }

    proptest! {
        #[test]
        fn gelfond_both_sides(a in nonzero_poly(4, 40), b in nonzero_poly(4, 40)) {
            let prod = a.multiply(&b).unwrap();
            let n = (a.deg() + b.deg()) as i32;
            let hh = (a.height() * b.height()) as f64;
            prop_assert!((-(n as f64)).exp() * hh <= prod.height() as f64);
            prop_assert!(prod.height() as f64 <= n as f64 * hh);
        }

        #[test]
        fn divide_round_trip(a in nonzero_poly(5, 30), b in nonzero_poly(4, 30)) {
            let prod = a.multiply(&b).unwrap();
            prop_assert_eq!(prod.try_divide_exact(&b).unwrap(), Some(a));
        }

        #[test]
        fn primitive_round_trip(a in nonzero_poly(6, 50), c in 1i64..20) {
            let scaled = a.scale(c).unwrap();
            let (content, prim) = scaled.primitive_decompose().unwrap();
            prop_assert_eq!(prim.scale(content).unwrap(), scaled);
            prop_assert_eq!(prim.content().unwrap(), 1);
            prop_assert_eq!(content % c, 0);
        }

        #[test]
        fn canonical_maps_preserve_shape(a in nonzero_poly(7, 50)) {
            let (neg, refl) = a.canonical_maps().unwrap();
            prop_assert_eq!(neg.degree(), a.degree());
            prop_assert_eq!(refl.degree(), a.degree());
            prop_assert_eq!(neg.height(), a.height());
            prop_assert_eq!(refl.height(), a.height());
        }
    }
}
