//! Exact weighted sums over the lattice points `G_n(T)` of
//! `D_n(T) = {x_i >= 1, prod x_i <= T}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::totient::totient_table;

/// Largest `floor(T)` accepted in one or two dimensions.
pub const MAX_PLANAR_BOUND: u64 = 1_000_000;
/// Largest `floor(T)` accepted in three or more dimensions.
pub const MAX_SPATIAL_BOUND: u64 = 1_000;

/// Weight `phi(x)^[totient] * x^power` of one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateWeight {
    pub totient: bool,
    pub power: u32,
}

impl CoordinateWeight {
    pub const ONE: CoordinateWeight = CoordinateWeight {
        totient: false,
        power: 0,
    };

    pub fn monomial(power: u32) -> Self {
        CoordinateWeight {
            totient: false,
            power,
        }
    }

    pub fn totient() -> Self {
        CoordinateWeight {
            totient: true,
            power: 0,
        }
    }

    pub fn totient_times(power: u32) -> Self {
        CoordinateWeight {
            totient: true,
            power,
        }
    }
}

impl fmt::Display for CoordinateWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.totient, self.power) {
            (false, 0) => write!(f, "1"),
            (true, 0) => write!(f, "phi"),
            (false, 1) => write!(f, "x"),
            (true, 1) => write!(f, "phi*x"),
            (false, e) => write!(f, "x^{e}"),
            (true, e) => write!(f, "phi*x^{e}"),
        }
    }
}

/// Parses `1`, `phi`, `x`, `x^e`, `phi*x` or `phi*x^e`.
impl FromStr for CoordinateWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::precondition(format!(
                "bad coordinate weight {s:?}; expected 1, phi, x^e or phi*x^e"
            ))
        };
        let s = s.trim();
        let (totient, rest) = match s.strip_prefix("phi") {
            Some("") => return Ok(CoordinateWeight::totient()),
            Some(rest) => (true, rest.strip_prefix('*').ok_or_else(bad)?),
            None if s == "1" => return Ok(CoordinateWeight::ONE),
            None => (false, s),
        };
        let power = match rest.strip_prefix('x').ok_or_else(bad)? {
            "" => 1,
            exp => exp
                .strip_prefix('^')
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?,
        };
        Ok(CoordinateWeight { totient, power })
    }
}

/// A lattice sum over `G_n(T)`; the dimension is the number of weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSumSpec {
    pub bound: f64,
    pub weights: Vec<CoordinateWeight>,
}

impl LatticeSumSpec {
    pub fn new(bound: f64, weights: Vec<CoordinateWeight>) -> Self {
        LatticeSumSpec { bound, weights }
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }
}

/// `sum_(x in G_n(T)) prod w_i(x_i)`, exactly. Iterates the leading
/// coordinates and reads the last one from a prefix-sum table.
pub fn lattice_sum(spec: &LatticeSumSpec) -> Result<u128> {
    let dim = spec.dimension();
    if dim == 0 {
        return Err(Error::precondition(
            "lattice sum needs at least one coordinate",
        ));
    }
    if !(spec.bound >= 1.0) || !spec.bound.is_finite() {
        return Err(Error::precondition(format!(
            "lattice bound must be finite and >= 1, got {}",
            spec.bound
        )));
    }
    let cap = if dim <= 2 {
        MAX_PLANAR_BOUND
    } else {
        MAX_SPATIAL_BOUND
    };
    let n = spec.bound.floor() as u64;
    if n > cap {
        return Err(Error::WorkLimit {
            what: "lattice sum bound",
            limit: cap,
        });
    }
    let phi = if spec.weights.iter().any(|w| w.totient) {
        Some(totient_table(n)?)
    } else {
        None
    };
    let weight_tables: Vec<Vec<u128>> = spec
        .weights
        .iter()
        .map(|w| {
            (0..=n)
                .map(|x| {
                    if x == 0 {
                        return Ok(0);
                    }
                    let base = match (&phi, w.totient) {
                        (Some(table), true) => table.phi(x) as u128,
                        _ => 1,
                    };
                    (x as u128)
                        .checked_pow(w.power)
                        .and_then(|p| p.checked_mul(base))
                        .ok_or(Error::Overflow("lattice weight"))
                })
                .collect::<Result<Vec<u128>>>()
        })
        .collect::<Result<_>>()?;
    let last = weight_tables.last().expect("dimension >= 1");
    let mut prefix = Vec::with_capacity(last.len());
    let mut acc = 0u128;
    for &w in last {
        acc = acc
            .checked_add(w)
            .ok_or(Error::Overflow("lattice prefix sum"))?;
        prefix.push(acc);
    }
    sum_from(&weight_tables[..dim - 1], &prefix, n)
}

fn sum_from(leading: &[Vec<u128>], prefix: &[u128], bound: u64) -> Result<u128> {
    let Some((first, rest)) = leading.split_first() else {
        return Ok(prefix[bound as usize]);
    };
    let mut total = 0u128;
    for x in 1..=bound {
        let inner = sum_from(rest, prefix, bound / x)?;
        let term = first[x as usize]
            .checked_mul(inner)
            .ok_or(Error::Overflow("lattice sum"))?;
        total = total
            .checked_add(term)
            .ok_or(Error::Overflow("lattice sum"))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::integral_i;
    use crate::analytic::totient::totient_table;

    fn brute(spec: &LatticeSumSpec) -> u128 {
        let n = spec.bound.floor() as u64;
        let phi = totient_table(n.max(1)).unwrap();
        let dim = spec.dimension();
        let mut total = 0u128;
        let mut x = vec![1u64; dim];
        'outer: loop {
            if x.iter().product::<u64>() <= n {
                total += spec
                    .weights
                    .iter()
                    .zip(&x)
                    .map(|(w, &xi)| {
                        let b = if w.totient { phi.phi(xi) as u128 } else { 1 };
                        b * (xi as u128).pow(w.power)
                    })
                    .product::<u128>();
            }
            for i in 0..dim {
                if x[i] < n {
                    x[i] += 1;
                    continue 'outer;
                }
                x[i] = 1;
            }
            break;
        }
        total
    }

    #[test]
    fn weight_text_round_trip() {
        for text in ["1", "phi", "x", "x^3", "phi*x", "phi*x^2"] {
            let w: CoordinateWeight = text.parse().unwrap();
            assert_eq!(w.to_string(), text);
        }
        assert_eq!(
            "x^0".parse::<CoordinateWeight>().unwrap(),
            CoordinateWeight::ONE
        );
        for bad in ["", "psi", "phi*", "phix", "y^2", "x^-1"] {
            assert!(bad.parse::<CoordinateWeight>().is_err(), "{bad}");
        }
    }

    #[test]
    fn small_examples() {
        let one = LatticeSumSpec::new(4.0, vec![CoordinateWeight::ONE; 2]);
        assert_eq!(lattice_sum(&one).unwrap(), 8);
        let mono = LatticeSumSpec::new(4.0, vec![CoordinateWeight::monomial(1); 2]);
        assert_eq!(lattice_sum(&mono).unwrap(), 23);
        let phi2 = LatticeSumSpec::new(4.0, vec![CoordinateWeight::totient(); 2]);
        assert_eq!(lattice_sum(&phi2).unwrap(), 12);
    }

    #[test]
    fn below_two_only_the_unit_point_remains() {
        for dim in 1..=5 {
            let spec = LatticeSumSpec::new(1.9, vec![CoordinateWeight::totient_times(3); dim]);
            assert_eq!(lattice_sum(&spec).unwrap(), 1);
        }
    }

    #[test]
    fn matches_brute_force() {
        let weights = [
            CoordinateWeight::ONE,
            CoordinateWeight::monomial(2),
            CoordinateWeight::totient(),
            CoordinateWeight::totient_times(1),
        ];
        for dim in 1..=4 {
            for &w in &weights {
                for bound in [1.0, 5.5, 12.0, 30.0] {
                    let mut ws = vec![w; dim];
                    ws[0] = CoordinateWeight::monomial(1);
                    let spec = LatticeSumSpec::new(bound, ws);
                    assert_eq!(lattice_sum(&spec).unwrap(), brute(&spec), "{spec:?}");
                }
            }
        }
    }

    #[test]
    fn totient_square_growth_band() {
        // sum phi(x) phi(y) over G(T) against T^2 log T
        for t in [1e2f64, 1e3, 1e4] {
            let s = lattice_sum(&LatticeSumSpec::new(
                t,
                vec![CoordinateWeight::totient(); 2],
            ))
            .unwrap() as f64;
            let ratio = s / (t * t * t.ln());
            assert!(ratio > 0.15 && ratio < 0.6, "T={t}: {ratio}");
        }
    }

    #[test]
    fn monomial_sums_track_the_integral() {
        for (k, m) in [(1u32, 1u32), (1, 2), (2, 1), (2, 2)] {
            for t in [1e2f64, 1e3] {
                let spec = LatticeSumSpec::new(
                    t,
                    vec![CoordinateWeight::monomial(k), CoordinateWeight::monomial(m)],
                );
                let ratio =
                    lattice_sum(&spec).unwrap() as f64 / integral_i(t, k as f64, m as f64).unwrap();
                assert!(ratio > 0.5 && ratio < 2.0, "k={k} m={m} T={t}: {ratio}");
            }
        }
    }

    #[test]
    fn refusals() {
        let big = LatticeSumSpec::new(2e6, vec![CoordinateWeight::ONE; 2]);
        assert!(lattice_sum(&big).unwrap_err().is_budget_refusal());
        let big3 = LatticeSumSpec::new(2e3, vec![CoordinateWeight::ONE; 3]);
        assert!(lattice_sum(&big3).unwrap_err().is_budget_refusal());
        assert!(lattice_sum(&LatticeSumSpec::new(0.5, vec![CoordinateWeight::ONE])).is_err());
        let huge = LatticeSumSpec::new(1e6, vec![CoordinateWeight::monomial(7); 2]);
        assert!(matches!(lattice_sum(&huge), Err(Error::Overflow(_))));
    }
}
