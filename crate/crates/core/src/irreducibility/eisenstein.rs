//! Explicit irreducible families: the witness `X^k - hX^(k-1) - ... - 1` and
//! the Eisenstein-at-2 families whose sizes bound irreducible shells from
//! below.

use crate::polyarith::IntPolynomial;

/// `X^k - h X^(k-1) - X^(k-2) - ... - X - 1`, irreducible of height `h`.
pub fn f1_witness(k: usize, h: i64) -> IntPolynomial {
    assert!(k >= 2 && h >= 1, "f1_witness needs k >= 2, h >= 1");
    let mut coeffs = vec![-1; k + 1];
    coeffs[k - 1] = -h;
    coeffs[k] = 1;
    IntPolynomial::new(coeffs)
}

/// Eisenstein's test at the prime 2: odd leading coefficient, every other
/// coefficient even, constant term not divisible by 4.
pub fn passes_eisenstein_at_2(p: &IntPolynomial) -> bool {
    let c = p.coeffs();
    match c.split_last() {
        Some((&lead, rest)) if !rest.is_empty() => {
            lead % 2 != 0 && rest.iter().all(|a| a % 2 == 0) && c[0] % 4 != 0
        }
        _ => false,
    }
}

/// The family of degree-`k`, height-`h` polynomials built to satisfy
/// Eisenstein's criterion at 2.
///
/// For odd `h`: `h X^k + 2a_(k-1) X^(k-1) + ... + 2a_1 X + 2(2l - 1)` with
/// `2|a_i| < h` and `4|l| < h - 2`.
///
/// For even `h`: `(2l - 1) X^k + h X^(k-1) + 2a_(k-2) X^(k-2) + ... + 2a_1 X + 2(2l' - 1)`
/// with `2|a_i| <= h`, `2|l| < h` and `4|l'| <= h - 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinFamily {
    pub k: usize,
    pub h: i64,
}

/// One coordinate of the family's parameter box.
#[derive(Clone, Copy, Debug)]
struct Axis {
    lo: i64,
    hi: i64,
}

impl Axis {
    fn symmetric(r: i64) -> Option<Axis> {
        (r >= 0).then_some(Axis { lo: -r, hi: r })
    }

    fn len(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }
}

impl EisensteinFamily {
    pub fn new(k: usize, h: i64) -> Self {
        assert!(k >= 2 && h >= 1, "eisenstein_family needs k >= 2, h >= 1");
        EisensteinFamily { k, h }
    }

    /// Closed-form lower bound on the family size:
    /// `h^(k-1)(h-3)/2` for odd `h`, `(h+1)^(k-2)(h-1)(h-2)/2` for even `h`.
    /// May be zero or negative for tiny `h`.
    pub fn lower_bound(&self) -> i64 {
        let (k, h) = (self.k as u32, self.h);
        if h % 2 == 1 {
            h.pow(k - 1) * (h - 3) / 2
        } else {
            (h + 1).pow(k - 2) * (h - 1) * (h - 2) / 2
        }
    }

    /// Parameter ranges in coefficient order `[constant, a_1, ..., lead]`;
    /// `None` when some range is empty.
    fn axes(&self) -> Option<Vec<Axis>> {
        let h = self.h;
        if h % 2 == 1 {
            // 4|l| < h - 2  <=>  |l| <= floor((h - 3) / 4)
            if h < 3 {
                return None;
            }
            let l = Axis::symmetric((h - 3) / 4)?;
            let a = Axis::symmetric((h - 1) / 2)?;
            let mut axes = vec![l];
            axes.extend(std::iter::repeat_n(a, self.k - 1));
            Some(axes)
        } else {
            let lp = Axis::symmetric((h - 2) / 4)?;
            let a = Axis::symmetric(h / 2)?;
            let lead = Axis::symmetric(h / 2 - 1)?;
            let mut axes = vec![lp];
            axes.extend(std::iter::repeat_n(a, self.k - 2));
            axes.push(lead);
            Some(axes)
        }
    }

    /// Exact number of members. Equals [`Self::lower_bound`] when
    /// `h ≡ 1 (mod 4)` or `h ≡ 0 (mod 4)` and exceeds it otherwise.
    pub fn size(&self) -> u64 {
        self.axes()
            .map(|axes| axes.iter().map(Axis::len).product())
            .unwrap_or(0)
    }

    fn build(&self, params: &[i64]) -> IntPolynomial {
        let (k, h) = (self.k, self.h);
        let mut c = vec![0i64; k + 1];
        c[0] = 2 * (2 * params[0] - 1);
        if h % 2 == 1 {
            for i in 1..k {
                c[i] = 2 * params[i];
            }
            c[k] = h;
        } else {
            for i in 1..k - 1 {
                c[i] = 2 * params[i];
            }
            c[k - 1] = h;
            c[k] = 2 * params[k - 1] - 1;
        }
        IntPolynomial::new(c)
    }

    /// Every member, in lexicographic parameter order.
    pub fn members(&self) -> impl Iterator<Item = IntPolynomial> + '_ {
        let axes = self.axes().unwrap_or_default();
        let mut state: Option<Vec<i64>> = if axes.is_empty() {
            None
        } else {
            Some(axes.iter().map(|a| a.lo).collect())
        };
        std::iter::from_fn(move || {
            let params = state.as_mut()?;
            let out = self.build(params);
            let mut i = 0;
            loop {
                if i == params.len() {
                    state = None;
                    break;
                }
                if params[i] < axes[i].hi {
                    params[i] += 1;
                    break;
                }
                params[i] = axes[i].lo;
                i += 1;
            }
            Some(out)
        })
    }
}

pub fn eisenstein_family(k: usize, h: i64) -> EisensteinFamily {
    EisensteinFamily::new(k, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irreducibility::is_reducible_over_q;
    use std::collections::HashSet;

    #[test]
    fn f1_examples() {
        assert_eq!(f1_witness(3, 2).coeffs(), &[-1, -1, -2, 1]);
        assert_eq!(f1_witness(2, 1).coeffs(), &[-1, -1, 1]);
        let w = f1_witness(2, 5);
        assert_eq!(w.coeffs(), &[-1, -5, 1]);
        assert_eq!(w.height(), 5);
    }

    #[test]
    fn f1_witnesses_irreducible() {
        for k in 2..=4 {
            for h in 1..=8 {
                let w = f1_witness(k, h);
                assert_eq!(w.degree(), Some(k));
                assert_eq!(w.height(), h);
                assert!(!is_reducible_over_q(&w).unwrap().reducible, "{w}");
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        let fam = eisenstein_family(2, 11);
        assert_eq!(fam.lower_bound(), 44);
        assert!(fam.lower_bound() as f64 > 121.0 / 3.0);
        assert!(eisenstein_family(2, 1).lower_bound() <= 0);
        assert_eq!(eisenstein_family(2, 1).members().count(), 0);
        // boundary case: the bound only reaches h^k/3 at h = 9
        assert_eq!(eisenstein_family(2, 9).lower_bound(), 27);
    }

    #[test]
    fn members_are_distinct_eisenstein_shell_members() {
        for k in 2..=4 {
            for h in 1..=12 {
                let fam = eisenstein_family(k, h);
                let members: Vec<_> = fam.members().collect();
                assert_eq!(members.len() as u64, fam.size(), "k={k} h={h}");
                assert!(fam.size() as i64 >= fam.lower_bound());
                let residue_exact = (h % 2 == 1 && h % 4 == 1) || (h % 2 == 0 && h % 4 == 0);
                if residue_exact && h >= 3 {
                    assert_eq!(fam.size() as i64, fam.lower_bound(), "k={k} h={h}");
                }
                let distinct: HashSet<_> = members.iter().collect();
                assert_eq!(distinct.len(), members.len());
                for m in &members {
                    assert_eq!(m.degree(), Some(k));
                    assert_eq!(m.height(), h);
                    assert!(passes_eisenstein_at_2(m), "{m}");
                }
            }
        }
    }

    #[test]
    fn sampled_members_irreducible() {
        let fam = eisenstein_family(3, 9);
        for m in fam.members().step_by(7) {
            assert!(!is_reducible_over_q(&m).unwrap().reducible, "{m}");
        }
    }

    #[test]
    fn eisenstein_test() {
        assert!(passes_eisenstein_at_2(&IntPolynomial::from_slice(&[
            2, 0, 1
        ])));
        assert!(!passes_eisenstein_at_2(&IntPolynomial::from_slice(&[
            4, 0, 1
        ])));
        assert!(!passes_eisenstein_at_2(&IntPolynomial::from_slice(&[
            2, 1, 1
        ])));
        assert!(!passes_eisenstein_at_2(&IntPolynomial::from_slice(&[
            2, 0, 2
        ])));
    }
}
