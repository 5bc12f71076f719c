use serde::{Deserialize, Serialize};

use super::is_reducible_over_q;
use crate::budget::{Budget, WorkMeter, DEFAULT_STEP_LIMIT};
use crate::error::{Error, Result};
use crate::polyarith::{gcd_of, IntPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShellClass {
    Irreducible,
    Primitive,
    All,
}

/// Number of degree-`k` polynomials of height exactly `h` in a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellCount {
    pub degree: usize,
    pub height: i64,
    pub class: ShellClass,
    pub count: u64,
}

/// Size of the full shell: `2h(2h+1)^d - 2(h-1)(2h-1)^d`.
pub fn shell_size(degree: usize, h: i64) -> Result<u128> {
    if h < 1 {
        return Err(Error::precondition("shell height must be >= 1"));
    }
    let d = degree as u32;
    let h = h as u128;
    let upto = |m: u128| -> Option<u128> { (2 * m).checked_mul((2 * m + 1).checked_pow(d)?) };
    let outer = upto(h).ok_or(Error::Overflow("shell size"))?;
    let inner = upto(h - 1).ok_or(Error::Overflow("shell size"))?;
    Ok(outer - inner)
}

pub fn shell_count(k: usize, h: i64, class: ShellClass) -> Result<ShellCount> {
    shell_count_with_budget(k, h, class, &Budget::steps(DEFAULT_STEP_LIMIT))
}

/// Exhaustive count over the shell. Refuses up front when the shell is
/// larger than the step budget.
pub fn shell_count_with_budget(
    k: usize,
    h: i64,
    class: ShellClass,
    budget: &Budget,
) -> Result<ShellCount> {
    if k == 0 || h < 1 {
        return Err(Error::precondition("shell_count needs k >= 1 and h >= 1"));
    }
    let projected = (k as u128 + 1).saturating_mul(
        (2 * h as u128 + 1)
            .checked_pow(k as u32 + 1)
            .unwrap_or(u128::MAX),
    );
    if let Some(limit) = budget.max_steps {
        if projected > limit as u128 {
            return Err(Error::WorkLimit {
                what: "shell_count",
                limit,
            });
        }
    }
    let meter = WorkMeter::new("shell_count", budget);
    let mut coeffs = vec![-h; k + 1];
    let mut count = 0u64;
    loop {
        let lead = coeffs[k];
        if lead != 0 && coeffs.iter().any(|c| c.abs() == h) {
            let member = match class {
                ShellClass::All => true,
                ShellClass::Primitive => gcd_of(&coeffs) == 1,
                ShellClass::Irreducible => {
                    let p = IntPolynomial::from_slice(&coeffs);
                    !is_reducible_over_q(&p)?.reducible
                }
            };
            if member {
                count += 1;
            }
        }
        meter.charge(1)?;
        let mut i = 0;
        loop {
            if i > k {
                return Ok(ShellCount {
                    degree: k,
                    height: h,
                    class,
                    count,
                });
            }
            if coeffs[i] < h {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -h;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irreducibility::eisenstein_family;
    use num_integer::Integer;

    fn totient(m: i64) -> i64 {
        (1..=m).filter(|j| j.gcd(&m) == 1).count() as i64
    }

    #[test]
    fn examples() {
        assert_eq!(shell_count(1, 1, ShellClass::Primitive).unwrap().count, 6);
        assert_eq!(shell_count(1, 2, ShellClass::Primitive).unwrap().count, 8);
        assert_eq!(
            shell_count(2, 1, ShellClass::Irreducible).unwrap().count,
            10
        );
    }

    #[test]
    fn full_shell_matches_formula() {
        for d in 1..=3 {
            for h in 1..=5 {
                let c = shell_count(d, h, ShellClass::All).unwrap().count;
                assert_eq!(c as u128, shell_size(d, h).unwrap(), "d={d} h={h}");
            }
        }
        assert_eq!(shell_size(1, 3).unwrap(), 22);
    }

    #[test]
    fn primitive_linear_shells() {
        for h in 1..=50 {
            let c = shell_count(1, h, ShellClass::Primitive).unwrap().count as i64;
            let expected = if h == 1 { 6 } else { 8 * totient(h) };
            assert_eq!(c, expected, "h={h}");
        }
    }

    #[test]
    fn irreducible_sandwich() {
        for k in 2..=3usize {
            for h in 1..=6i64 {
                let c = shell_count(k, h, ShellClass::Irreducible).unwrap().count as f64;
                let hk = (h as f64).powi(k as i32);
                assert!(9f64.powi(-(k as i32)) * hk <= c, "k={k} h={h}");
                assert!(c <= 2.0 * (k as f64 + 1.0) * 3f64.powi(k as i32) * hk);
            }
        }
    }

    #[test]
    fn primitive_sandwich() {
        for m in 1..=2usize {
            for h in 1..=12i64 {
                let c = shell_count(m, h, ShellClass::Primitive).unwrap().count as f64;
                let lower =
                    2f64.powi(m as i32 + 1) * totient(h) as f64 * (h as f64).powi(m as i32 - 1);
                let upper =
                    2.0 * (m as f64 + 1.0) * 3f64.powi(m as i32) * (h as f64).powi(m as i32);
                assert!(lower <= c && c <= upper, "m={m} h={h} c={c}");
            }
        }
    }

    #[test]
    fn eisenstein_family_within_irreducible_shell() {
        for h in [9i64, 10, 11] {
            let irr = shell_count(2, h, ShellClass::Irreducible).unwrap().count;
            assert!(eisenstein_family(2, h).size() <= irr);
        }
    }

    #[test]
    fn work_limit_refuses() {
        let err =
            shell_count_with_budget(3, 50, ShellClass::All, &Budget::steps(1000)).unwrap_err();
        assert!(err.is_budget_refusal());
    }
}
