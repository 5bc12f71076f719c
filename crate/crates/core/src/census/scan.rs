//! Brute-force scans of the whole universe of degree-`n` polynomials with
//! height at most `t`, classifying each member with the oracle.

use rayon::prelude::*;

use super::keys::KeyCodec;
use crate::budget::WorkMeter;
use crate::error::Result;

/// `2t (2t+1)^n`, the number of degree-`n` polynomials of height `<= t`.
pub fn universe_size(n: usize, t: i64) -> Option<u128> {
    (2 * t as u128).checked_mul((2 * t as u128 + 1).checked_pow(n as u32)?)
}

/// Keys (sorted) of all members accepted by `pred`.
pub fn scan_universe<P>(
    n: usize,
    t: i64,
    codec: &KeyCodec,
    meter: &WorkMeter,
    pred: P,
) -> Result<Vec<u64>>
where
    P: Fn(&[i64]) -> Result<bool> + Sync,
{
    let leads: Vec<i64> = (-t..=-1).chain(1..=t).collect();
    let per_lead: Vec<Vec<u64>> = leads
        .par_iter()
        .map(|&lead| {
            let mut coeffs = vec![-t; n + 1];
            coeffs[n] = lead;
            let mut out = Vec::new();
            let mut steps = 0u64;
            loop {
                if pred(&coeffs)? {
                    out.push(codec.pack(&coeffs));
                }
                steps += 1;
                if steps == 1 << 14 {
                    meter.charge(steps)?;
                    steps = 0;
                }
                let mut i = 0;
                loop {
                    if i == n {
                        meter.charge(steps)?;
                        return Ok(out);
                    }
                    if coeffs[i] < t {
                        coeffs[i] += 1;
                        break;
                    }
                    coeffs[i] = -t;
                    i += 1;
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut keys: Vec<u64> = per_lead.into_iter().flatten().collect();
    keys.sort_unstable();
    Ok(keys)
}
