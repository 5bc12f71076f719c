//! The factor-pair enumerator shared by the sieve counters.
//!
//! A degree split `n = d + m` is searched as follows. The *outer* factor of
//! degree `d` is enumerated over the Gelfond window `H(outer) * H(inner) <=
//! floor(e^n t)`, with its leading and lowest nonzero coefficients bounded by
//! `t` (both divide the matching coefficients of the product). The *inner*
//! factor of degree `m` is then fixed from its top coefficient down: product
//! coefficient `p_(n-j)` depends on `inner_(m-j)` only through
//! `inner_(m-j) * outer_d`, so each step admits a single interval of values
//! keeping `|p_(n-j)| <= t`. The low product coefficients are checked once
//! the inner factor is complete.

use num_integer::Integer;

use super::oracle_cache::OracleCache;
use crate::budget::{Budget, WorkMeter};
use crate::error::{Error, Result};
use crate::polyarith::{gcd_of, height_of, FactorPair, IntPolynomial};

pub const MAX_DEGREE: usize = 8;
const MAX_COEFFS: usize = MAX_DEGREE + 1;
const CHARGE_EVERY: u64 = 1 << 16;

/// `floor(e^n * t)`, the Gelfond window for a product of degree `n`.
pub fn lemma1_window(n: usize, t: i64) -> i64 {
    ((n as f64).exp() * t as f64).floor() as i64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FactorConstraint {
    pub primitive: bool,
    pub positive_lead: bool,
    pub irreducible: bool,
}

impl FactorConstraint {
    pub const NONE: FactorConstraint = FactorConstraint {
        primitive: false,
        positive_lead: false,
        irreducible: false,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairSpec {
    pub n: usize,
    pub t: i64,
    pub outer_degree: usize,
    pub outer: FactorConstraint,
    pub inner: FactorConstraint,
    /// Whether the outer factor is reported as `g` (otherwise as `f`).
    pub outer_is_g: bool,
}

/// A slice of the outer search space: fixed leading and constant coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkUnit {
    pub lead: i64,
    pub constant: i64,
}

impl PairSpec {
    pub fn inner_degree(&self) -> usize {
        self.n - self.outer_degree
    }

    pub fn window(&self) -> i64 {
        lemma1_window(self.n, self.t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t < 1 {
            return Err(Error::precondition("height bound t must be >= 1"));
        }
        if self.n > MAX_DEGREE {
            return Err(Error::precondition(format!(
                "degree {} exceeds {MAX_DEGREE}",
                self.n
            )));
        }
        if self.outer_degree == 0 || self.outer_degree >= self.n {
            return Err(Error::precondition(format!(
                "degree split {} + {} is not a split into positive degrees",
                self.outer_degree,
                self.n.saturating_sub(self.outer_degree)
            )));
        }
        // every convolution sum stays below (n + 1) W^2
        let w = self.window() as i128;
        if (self.n as i128 + 1) * w * w > (i64::MAX / 4) as i128 {
            return Err(Error::Overflow("pair enumeration window"));
        }
        Ok(())
    }

    pub fn work_units(&self) -> Vec<WorkUnit> {
        let top = self.t.min(self.window());
        let leads: Vec<i64> = if self.outer.positive_lead {
            (1..=top).collect()
        } else {
            (-top..=-1).chain(1..=top).collect()
        };
        leads
            .into_iter()
            .flat_map(|lead| (-self.t..=self.t).map(move |constant| WorkUnit { lead, constant }))
            .collect()
    }

    /// Runs one work unit, calling `emit(outer, inner, product)` for every
    /// admissible pair in deterministic order.
    pub fn run_unit<E>(
        &self,
        unit: WorkUnit,
        oracle: &OracleCache,
        meter: &WorkMeter,
        mut emit: E,
    ) -> Result<()>
    where
        E: FnMut(&[i64], &[i64], &[i64]) -> Result<()>,
    {
        let d = self.outer_degree;
        let w = self.window();
        let mut g = [0i64; MAX_COEFFS];
        g[0] = unit.constant;
        g[d] = unit.lead;
        let mut steps = 0u64;
        // odometer over the middle coefficients g_1..g_(d-1) in [-w, w]
        for c in g.iter_mut().take(d).skip(1) {
            *c = -w;
        }
        loop {
            steps += 1;
            if steps >= CHARGE_EVERY {
                meter.charge(steps)?;
                steps = 0;
            }
            let outer = &g[..=d];
            if self.outer_admissible(outer, oracle)? {
                let cap = w / height_of(outer);
                if cap >= 1 {
                    let mut search = InnerSearch {
                        outer,
                        d,
                        m: self.inner_degree(),
                        t: self.t,
                        cap,
                        constraint: self.inner,
                        oracle,
                        meter,
                        steps: 0,
                        emit: &mut emit,
                    };
                    let mut f = [0i64; MAX_COEFFS];
                    search.descend(&mut f, 0)?;
                    steps += search.steps;
                }
            }
            let mut i = 1;
            loop {
                if i >= d {
                    meter.charge(steps)?;
                    return Ok(());
                }
                if g[i] < w {
                    g[i] += 1;
                    break;
                }
                g[i] = -w;
                i += 1;
            }
        }
    }

    fn outer_admissible(&self, outer: &[i64], oracle: &OracleCache) -> Result<bool> {
        let lowest = outer.iter().find(|&&c| c != 0).copied().unwrap_or(0);
        if lowest.abs() > self.t {
            return Ok(false);
        }
        if self.outer.primitive && gcd_of(outer) != 1 {
            return Ok(false);
        }
        if self.outer.irreducible && !oracle.is_irreducible(outer)? {
            return Ok(false);
        }
        Ok(true)
    }

    /// Every pair of this split as [`FactorPair`]s, in stream order.
    pub fn factor_pair_stream(
        &self,
        budget: &Budget,
        oracle: &OracleCache,
    ) -> Result<Vec<FactorPair>> {
        self.validate()?;
        let meter = WorkMeter::new("factor_pair_stream", budget);
        let mut out = Vec::new();
        for unit in self.work_units() {
            self.run_unit(unit, oracle, &meter, |outer, inner, _| {
                let (f, g) = if self.outer_is_g {
                    (inner, outer)
                } else {
                    (outer, inner)
                };
                let (fc, gc) = if self.outer_is_g {
                    (self.inner, self.outer)
                } else {
                    (self.outer, self.inner)
                };
                out.push(FactorPair {
                    f: IntPolynomial::from_slice(f),
                    g: IntPolynomial::from_slice(g),
                    f_primitive: fc.primitive,
                    g_irreducible: gc.irreducible,
                });
                Ok(())
            })?;
        }
        Ok(out)
    }
}

struct InnerSearch<'a, E> {
    outer: &'a [i64],
    d: usize,
    m: usize,
    t: i64,
    cap: i64,
    constraint: FactorConstraint,
    oracle: &'a OracleCache,
    meter: &'a WorkMeter,
    steps: u64,
    emit: &'a mut E,
}

impl<E> InnerSearch<'_, E>
where
    E: FnMut(&[i64], &[i64], &[i64]) -> Result<()>,
{
    /// Fixes `f[m - j]`, the coefficient pinned by product coefficient `n - j`.
    fn descend(&mut self, f: &mut [i64; MAX_COEFFS], j: usize) -> Result<()> {
        let (d, m) = (self.d, self.m);
        let lead = self.outer[d];
        let mut partial = 0i64;
        for i in j.saturating_sub(d)..j {
            partial += f[m - i] * self.outer[d + i - j];
        }
        // values x with -t <= partial + x * lead <= t
        let (a, b) = (-self.t - partial, self.t - partial);
        let (mut lo, mut hi) = if lead > 0 {
            (Integer::div_ceil(&a, &lead), Integer::div_floor(&b, &lead))
        } else {
            (Integer::div_ceil(&b, &lead), Integer::div_floor(&a, &lead))
        };
        lo = lo.max(-self.cap);
        hi = hi.min(self.cap);
        if j == 0 && self.constraint.positive_lead {
            lo = lo.max(1);
        }
        for x in lo..=hi {
            if j == 0 && x == 0 {
                continue;
            }
            f[m - j] = x;
            self.steps += 1;
            if self.steps >= CHARGE_EVERY {
                self.meter.charge(self.steps)?;
                self.steps = 0;
            }
            if j == m {
                self.finish(&f[..=m])?;
            } else {
                self.descend(f, j + 1)?;
            }
        }
        Ok(())
    }

    fn finish(&mut self, f: &[i64]) -> Result<()> {
        let n = self.d + self.m;
        let mut p = [0i64; MAX_COEFFS];
        for (i, &a) in f.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, &b) in self.outer.iter().enumerate() {
                p[i + k] += a * b;
            }
        }
        let p = &p[..=n];
        if p.iter().any(|c| c.abs() > self.t) {
            return Ok(());
        }
        if self.constraint.primitive && gcd_of(f) != 1 {
            return Ok(());
        }
        if self.constraint.irreducible && !self.oracle.is_irreducible(f)? {
            return Ok(());
        }
        (self.emit)(self.outer, f, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn reducible_split(n: usize, t: i64, d: usize) -> PairSpec {
        PairSpec {
            n,
            t,
            outer_degree: d,
            outer: FactorConstraint {
                primitive: true,
                positive_lead: true,
                irreducible: false,
            },
            inner: FactorConstraint::NONE,
            outer_is_g: true,
        }
    }

    #[test]
    fn window_values() {
        assert_eq!(lemma1_window(2, 1), 7);
        assert_eq!(lemma1_window(3, 32), 642);
        assert_eq!(lemma1_window(4, 12), 655);
    }

    #[test]
    fn quadratic_stream_examples() {
        let oracle = OracleCache::new();
        let pairs = reducible_split(2, 1, 1)
            .factor_pair_stream(&Budget::unlimited(), &oracle)
            .unwrap();
        let x_minus_1 = IntPolynomial::from_slice(&[-1, 1]);
        let x_plus_1 = IntPolynomial::from_slice(&[1, 1]);
        assert!(pairs.iter().any(|p| p.f == x_plus_1 && p.g == x_minus_1));
        let products: BTreeSet<_> = pairs.iter().map(|p| p.product().unwrap()).collect();
        assert_eq!(products.len(), 8);
        for p in &pairs {
            assert!(p.f.height() * p.g.height() <= 7);
            assert!(p.product().unwrap().height() <= 1);
            assert!(p.g.is_primitive() && p.g.leading() > 0);
        }
        // every pair exactly once
        let distinct: BTreeSet<_> = pairs.iter().map(|p| (p.f.clone(), p.g.clone())).collect();
        assert_eq!(distinct.len(), pairs.len());
    }

    #[test]
    fn stream_matches_brute_force_pairs() {
        // all (f, g) with g primitive, positive lead, deg g = 1, deg f = 2,
        // H(f) H(g) <= e^3 * 2, H(fg) <= 2, enumerated blindly
        let (n, t) = (3, 2);
        let w = lemma1_window(n, t);
        let oracle = OracleCache::new();
        let got: BTreeSet<_> = reducible_split(n, t, 1)
            .factor_pair_stream(&Budget::unlimited(), &oracle)
            .unwrap()
            .into_iter()
            .map(|p| (p.f, p.g))
            .collect();
        let mut expected = BTreeSet::new();
        for a in 1..=w {
            for b in -w..=w {
                let g = IntPolynomial::from_slice(&[b, a]);
                if !g.is_primitive() || g.height() > w {
                    continue;
                }
                let cap = w / g.height();
                let r = cap.min(t);
                for f2 in -r..=r {
                    if f2 == 0 {
                        continue;
                    }
                    for f1 in -cap..=cap {
                        for f0 in -cap..=cap {
                            let f = IntPolynomial::from_slice(&[f0, f1, f2]);
                            if f.height() * g.height() > w {
                                continue;
                            }
                            if f.multiply(&g).unwrap().height() <= t {
                                expected.insert((f, g.clone()));
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn invalid_splits() {
        assert!(reducible_split(3, 1, 0).validate().is_err());
        assert!(reducible_split(3, 1, 3).validate().is_err());
        assert!(reducible_split(9, 1, 1).validate().is_err());
        assert!(reducible_split(3, 0, 1).validate().is_err());
    }
}
