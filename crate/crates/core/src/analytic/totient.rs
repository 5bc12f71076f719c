//! Euler's totient by linear sieve, its partial sums, and weighted power sums.

use crate::error::{Error, Result};

/// Largest sieve limit accepted.
pub const MAX_TOTIENT_LIMIT: u64 = 100_000_000;

/// Largest range accepted by [`totient_power_sum`].
pub const MAX_POWER_SUM_LIMIT: u64 = 10_000_000;

/// `phi(1), ..., phi(N)`, immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotientTable {
    values: Vec<u32>,
}

impl TotientTable {
    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// `phi(m)` for `1 <= m <= limit`.
    pub fn phi(&self, m: u64) -> u64 {
        assert!(
            m >= 1 && m <= self.limit(),
            "phi({m}) outside table of limit {}",
            self.limit()
        );
        self.values[m as usize] as u64
    }

    /// `phi(1), ..., phi(N)` as a slice indexed from 1 (index 0 holds 0).
    pub fn as_slice(&self) -> &[u32] {
        &self.values
    }
}

pub fn totient_table(limit: u64) -> Result<TotientTable> {
    if limit > MAX_TOTIENT_LIMIT {
        return Err(Error::WorkLimit {
            what: "totient sieve",
            limit: MAX_TOTIENT_LIMIT,
        });
    }
    let n = limit as usize;
    let mut values = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    if n >= 1 {
        values[1] = 1;
    }
    for i in 2..=n {
        if values[i] == 0 {
            values[i] = i as u32 - 1;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if ip > n {
                break;
            }
            if i % p as usize == 0 {
                values[ip] = values[i] * p;
                break;
            }
            values[ip] = values[i] * (p - 1);
        }
    }
    Ok(TotientTable { values })
}

/// `sum_(m <= t) phi(m)`, exactly.
pub fn totient_sum(t: u64) -> Result<u64> {
    let table = totient_table(t)?;
    Ok(table.values.iter().map(|&v| v as u64).sum())
}

/// `sum_(m <= t) phi(m) m^alpha` with Neumaier-compensated summation.
pub fn totient_power_sum(t: u64, alpha: f64) -> Result<f64> {
    if t > MAX_POWER_SUM_LIMIT {
        return Err(Error::WorkLimit {
            what: "totient power sum",
            limit: MAX_POWER_SUM_LIMIT,
        });
    }
    if !alpha.is_finite() {
        return Err(Error::precondition(format!(
            "exponent must be finite, got {alpha}"
        )));
    }
    let table = totient_table(t)?;
    let mut sum = CompensatedSum::default();
    for m in 1..=t {
        sum.add(table.phi(m) as f64 * (m as f64).powf(alpha));
    }
    Ok(sum.value())
}

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
