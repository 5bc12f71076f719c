//! Enumeration of completely split polynomials `c * l_1 * ... * l_n`.
//!
//! Each `l_i = a_i X + b_i` is primitive with `a_i > 0`, and the factors are
//! taken in nondecreasing `(a, b)` order, so by unique factorization every
//! split polynomial has exactly one representation. Searches are pruned by
//! the exact divisibility facts `prod a_i | lead(p)` and
//! `prod_(b_i != 0) b_i | lowest(p)`, and constrained to the iterated
//! Gelfond window `prod H(l_i) <= e^(n(n+1)/2 - 1) t`.

use num_integer::Integer;

use crate::budget::WorkMeter;
use crate::error::Result;

use super::pairs::{lemma1_window, MAX_DEGREE};

/// Exponent `n + (n-1) + ... + 2` collected by applying the two-factor
/// window once per split-off linear factor.
pub fn split_window_exponent(n: usize) -> usize {
    (n * (n + 1) / 2).saturating_sub(1)
}

pub fn split_window(n: usize, t: i64) -> i64 {
    ((split_window_exponent(n) as f64).exp() * t as f64).floor() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Linear {
    pub a: i64,
    pub b: i64,
}

impl Linear {
    fn height(&self) -> i64 {
        self.a.max(self.b.abs())
    }
}

/// Primitive `aX + b` with `1 <= a <= t`, `|b| <= t`, height within `cap`,
/// sorted by `(a, b)`.
pub fn primitive_linears(t: i64, cap: i64) -> Vec<Linear> {
    let mut out = Vec::new();
    for a in 1..=t {
        for b in -t..=t {
            let l = Linear { a, b };
            if a.gcd(&b) == 1 && l.height() <= cap {
                out.push(l);
            }
        }
    }
    out
}

pub(crate) struct SplitSearch<'a> {
    pub n: usize,
    pub t: i64,
    pub linears: &'a [Linear],
    pub meter: &'a WorkMeter,
}

struct Frame {
    q: [i64; MAX_DEGREE + 1],
    prod_a: i64,
    prod_b: i64,
    prod_h: i64,
}

impl SplitSearch<'_> {
    /// Explores every tuple whose first factor is `linears[first]`, calling
    /// `emit(p)` for each product `c * l_1 ... l_n` of height `<= t`.
    pub fn run_from<E: FnMut(&[i64])>(&self, first: usize, emit: &mut E) -> Result<u64> {
        let hwin = lemma1_window(self.n, self.t);
        let wsplit = split_window(self.n, self.t);
        let mut steps = 0u64;
        let l = self.linears[first];
        let mut frame = Frame {
            q: [0; MAX_DEGREE + 1],
            prod_a: l.a,
            prod_b: l.b.abs().max(1),
            prod_h: l.height(),
        };
        frame.q[0] = l.b;
        frame.q[1] = l.a;
        if frame.prod_a <= self.t && frame.prod_b <= self.t && frame.prod_h <= wsplit {
            self.descend(&frame, 1, first, hwin, wsplit, &mut steps, emit)?;
        }
        self.meter.charge(steps)?;
        Ok(steps)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<E: FnMut(&[i64])>(
        &self,
        frame: &Frame,
        depth: usize,
        start: usize,
        hwin: i64,
        wsplit: i64,
        steps: &mut u64,
        emit: &mut E,
    ) -> Result<()> {
        *steps += 1;
        if *steps >= 1 << 16 {
            self.meter.charge(*steps)?;
            *steps = 0;
        }
        if depth == self.n {
            let q = &frame.q[..=self.n];
            let h = q.iter().map(|c| c.abs()).max().unwrap_or(0);
            let mut p = [0i64; MAX_DEGREE + 1];
            for c in 1..=self.t / h {
                for sign in [1, -1] {
                    for (dst, &src) in p.iter_mut().zip(q) {
                        *dst = sign * c * src;
                    }
                    emit(&p[..=self.n]);
                }
            }
            return Ok(());
        }
        for (offset, &l) in self.linears[start..].iter().enumerate() {
            let prod_a = frame.prod_a * l.a;
            if prod_a > self.t {
                break;
            }
            let prod_b = frame.prod_b * l.b.abs().max(1);
            let prod_h = frame.prod_h * l.height();
            if prod_b > self.t || prod_h > wsplit {
                continue;
            }
            let mut next = Frame {
                q: [0; MAX_DEGREE + 1],
                prod_a,
                prod_b,
                prod_h,
            };
            for i in 0..=depth {
                next.q[i] += frame.q[i] * l.b;
                next.q[i + 1] += frame.q[i] * l.a;
            }
            // a partial product divides p, so its height is inside the window
            if next.q[..=depth + 1].iter().any(|c| c.abs() > hwin) {
                continue;
            }
            self.descend(&next, depth + 1, start + offset, hwin, wsplit, steps, emit)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::IntPolynomial;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    #[test]
    fn window_exponent_matches_iterated_gelfond() {
        // Peeling one linear factor off a degree-j product costs e^j.
        for n in 1..=8usize {
            let iterated: usize = (2..=n).sum();
            assert_eq!(split_window_exponent(n), iterated, "n={n}");
        }
    }

    #[test]
    fn window_holds_on_random_products() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..2000 {
            let n = rng.gen_range(1..=5usize);
            let mut p = IntPolynomial::constant(1);
            let mut prod_h = 1f64;
            for _ in 0..n {
                let a = rng.gen_range(1..=9i64);
                let b = rng.gen_range(-9..=9i64);
                let l = IntPolynomial::linear(a, b);
                prod_h *= l.height() as f64;
                p = p.multiply(&l).unwrap();
            }
            let bound = (split_window_exponent(n) as f64).exp() * p.height() as f64;
            assert!(prod_h <= bound, "n={n} {p}");
        }
    }

    #[test]
    fn linear_list_is_sorted_and_primitive() {
        let ls = primitive_linears(3, 100);
        assert!(ls.windows(2).all(|w| w[0] < w[1]));
        assert!(ls.contains(&Linear { a: 1, b: 0 }));
        assert!(!ls.contains(&Linear { a: 2, b: 0 }));
        assert!(!ls.contains(&Linear { a: 2, b: -2 }));
    }
}
