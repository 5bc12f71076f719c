//! Class counters: sieves over factor pairs and split tuples, the oracle
//! scan, and the shell-formula count of the pair set.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::keys::{KeyCodec, ShardedSet};
use super::pairs::{lemma1_window, FactorConstraint, PairSpec, WorkUnit};
use super::scan::{scan_universe, universe_size};
use super::split::{primitive_linears, split_window, Linear, SplitSearch};
use super::{CensusClass, CensusConfig, CensusQuery, CensusResult, Method, WorkStats};
use crate::budget::WorkMeter;
use crate::error::{Error, Result};
use crate::irreducibility::{
    irreducible_factors, is_reducible_over_q, quadratic_is_reducible, shell_size,
};
use crate::polyarith::IntPolynomial;

/// Estimated resident bytes per deduplicated key, hash-table overhead included.
const BYTES_PER_KEY: u64 = 24;

pub fn count_reducible(n: usize, t: i64, cfg: &CensusConfig) -> Result<CensusResult> {
    run(&CensusQuery::new(n, t, CensusClass::Reducible), cfg, false).map(|(r, _)| r)
}

pub fn count_split(n: usize, t: i64, cfg: &CensusConfig) -> Result<CensusResult> {
    run(
        &CensusQuery::new(n, t, CensusClass::SplitCompletely),
        cfg,
        false,
    )
    .map(|(r, _)| r)
}

pub fn count_k_factor(k: usize, n: usize, t: i64, cfg: &CensusConfig) -> Result<CensusResult> {
    run(&CensusQuery::new(n, t, CensusClass::KFactor(k)), cfg, false).map(|(r, _)| r)
}

pub fn count_no_large_factor(n: usize, t: i64, cfg: &CensusConfig) -> Result<CensusResult> {
    run(
        &CensusQuery::new(n, t, CensusClass::NoLargeFactor),
        cfg,
        false,
    )
    .map(|(r, _)| r)
}

pub fn count_pair_set(n: usize, t: i64, cfg: &CensusConfig) -> Result<CensusResult> {
    run(
        &CensusQuery::new(n, t, CensusClass::PairSetPnStar),
        cfg,
        false,
    )
    .map(|(r, _)| r)
}

pub fn count_q_split_primitive(t: i64, cfg: &CensusConfig) -> Result<CensusResult> {
    run(
        &CensusQuery::new(2, t, CensusClass::QSplitPrimitive),
        cfg,
        false,
    )
    .map(|(r, _)| r)
}

/// Ordered pairs `(f, g)` of primitive linear polynomials (either sign) with
/// `H(fg) <= t`.
pub fn primitive_linear_pair_count(t: i64) -> Result<u64> {
    if t < 1 {
        return Err(Error::precondition("height bound must be >= 1"));
    }
    let lin = primitive_linears(t, t);
    let positive: u64 = lin
        .iter()
        .map(|f| {
            lin.iter()
                .take_while(|g| f.a * g.a <= t)
                .filter(|g| height_of_product(f, g) <= t)
                .count() as u64
        })
        .sum();
    // each factor may be negated independently without changing the height
    Ok(4 * positive)
}

fn product_of(f: &Linear, g: &Linear) -> [i64; 3] {
    [f.b * g.b, f.a * g.b + f.b * g.a, f.a * g.a]
}

fn height_of_product(f: &Linear, g: &Linear) -> i64 {
    product_of(f, g).iter().map(|c| c.abs()).max().unwrap_or(0)
}

struct Sieved {
    keys: Vec<u64>,
    candidates: u64,
    pair_count: Option<u64>,
}

pub(super) fn run(
    query: &CensusQuery,
    cfg: &CensusConfig,
    want_members: bool,
) -> Result<(CensusResult, Option<Vec<IntPolynomial>>)> {
    query.validate()?;
    let started = Instant::now();
    let (n, t) = (query.degree, query.height_bound);
    if query.class == CensusClass::PairSetPnStar {
        let count = pair_set_size(n, t)?;
        let result = CensusResult {
            query: *query,
            count,
            shell_breakdown: None,
            method: Method::ShellFormula,
            work: WorkStats {
                elapsed: started.elapsed(),
                ..WorkStats::default()
            },
        };
        return Ok((result, None));
    }
    if cfg.method == Method::ShellFormula {
        return Err(Error::precondition(format!(
            "the shell formula counts pair sets only, not class {}",
            query.class
        )));
    }
    check_projection(query, cfg)?;
    let codec = KeyCodec::new(n, t)?;
    let meter = WorkMeter::new("census", &cfg.budget);
    let sieved = cfg.install(|| match cfg.method {
        Method::OracleScan => oracle_scan(query, &codec, &meter),
        _ => sieve(query, cfg, &codec, &meter),
    })?;
    let shell_breakdown = cfg.shell_breakdown.then(|| {
        let mut shells = BTreeMap::new();
        for &key in &sieved.keys {
            *shells.entry(codec.height(key)).or_insert(0u64) += 1;
        }
        shells
    });
    let count = sieved.keys.len() as u64;
    let result = CensusResult {
        query: *query,
        count,
        shell_breakdown,
        method: cfg.method,
        work: WorkStats {
            candidates: sieved.candidates,
            dedupe_size: count,
            steps: meter.steps(),
            pair_count: sieved.pair_count,
            elapsed: started.elapsed(),
        },
    };
    let members = want_members.then(|| sieved.keys.iter().map(|&k| codec.poly(k)).collect());
    Ok((result, members))
}

/// Up-front refusal for classes whose member set can approach the whole
/// universe; the split classes are policed as their sets grow.
fn check_projection(query: &CensusQuery, cfg: &CensusConfig) -> Result<()> {
    let dense = matches!(
        query.class,
        CensusClass::Reducible | CensusClass::KFactor(_) | CensusClass::NoLargeFactor
    ) || cfg.method == Method::OracleScan;
    if !dense {
        return Ok(());
    }
    let universe = universe_size(query.degree, query.height_bound).unwrap_or(u128::MAX);
    let projected = universe
        .saturating_mul(BYTES_PER_KEY as u128)
        .min(u64::MAX as u128) as u64;
    cfg.budget
        .check_memory(format!("dedupe set for {}", query.fingerprint()), projected)
}

fn check_set_memory(set: &ShardedSet, cfg: &CensusConfig) -> Result<()> {
    cfg.budget
        .check_memory("dedupe set", set.len() as u64 * BYTES_PER_KEY)
}

fn sieve(
    query: &CensusQuery,
    cfg: &CensusConfig,
    codec: &KeyCodec,
    meter: &WorkMeter,
) -> Result<Sieved> {
    let (n, t) = (query.degree, query.height_bound);
    match query.class {
        CensusClass::Reducible => {
            let specs = reducible_specs(n, t, 1..=n / 2);
            sieve_pairs(&specs, cfg, codec, meter)
        }
        CensusClass::SplitCompletely => sieve_split(n, t, cfg, codec, meter),
        CensusClass::KFactor(k) => {
            let spec = PairSpec {
                n,
                t,
                outer_degree: n - k,
                outer: FactorConstraint {
                    primitive: true,
                    ..FactorConstraint::NONE
                },
                inner: FactorConstraint {
                    positive_lead: true,
                    irreducible: true,
                    ..FactorConstraint::NONE
                },
                outer_is_g: false,
            };
            let mut sieved = sieve_pairs(&[spec], cfg, codec, meter)?;
            // each member has exactly one (primitive f, irreducible g with
            // positive lead) decomposition, so pairs and products agree
            if sieved.candidates != sieved.keys.len() as u64 {
                return Err(Error::Inconsistency(format!(
                    "{}: {} canonical pairs but {} distinct products",
                    query.fingerprint(),
                    sieved.candidates,
                    sieved.keys.len()
                )));
            }
            sieved.pair_count = Some(sieved.candidates);
            Ok(sieved)
        }
        CensusClass::NoLargeFactor => {
            // a member has a sub-product of degree in [2, n/2] once n >= 4
            let lowest = if n >= 4 { 2 } else { 1 };
            let specs = reducible_specs(n, t, lowest..=n / 2);
            let mut sieved = sieve_pairs(&specs, cfg, codec, meter)?;
            let keep: Vec<bool> = sieved
                .keys
                .par_iter()
                .map(|&key| Ok(max_factor_degree(&codec.unpack(key))? <= n / 2))
                .collect::<Result<_>>()?;
            let mut flags = keep.into_iter();
            sieved.keys.retain(|_| flags.next().unwrap_or(false));
            Ok(sieved)
        }
        CensusClass::QSplitPrimitive => sieve_q_split(t, cfg, codec, meter),
        CensusClass::PairSetPnStar => unreachable!("pair sets are counted by shell formula"),
    }
}

/// Splits with a primitive, positive-lead factor `g` of each degree in
/// `degrees` and an unconstrained cofactor.
fn reducible_specs(n: usize, t: i64, degrees: std::ops::RangeInclusive<usize>) -> Vec<PairSpec> {
    degrees
        .map(|d| PairSpec {
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
        })
        .collect()
}

fn sieve_pairs(
    specs: &[PairSpec],
    cfg: &CensusConfig,
    codec: &KeyCodec,
    meter: &WorkMeter,
) -> Result<Sieved> {
    for spec in specs {
        spec.validate()?;
    }
    let units: Vec<(usize, WorkUnit)> = specs
        .iter()
        .enumerate()
        .flat_map(|(i, spec)| spec.work_units().into_iter().map(move |u| (i, u)))
        .collect();
    let set = ShardedSet::new();
    let per_unit: Vec<u64> = units
        .par_iter()
        .map(|&(i, unit)| {
            let mut buf = set.buffer();
            let mut emitted = 0u64;
            specs[i].run_unit(unit, &cfg.oracle, meter, |_, _, p| {
                buf.insert(codec.pack(p));
                emitted += 1;
                Ok(())
            })?;
            buf.flush();
            check_set_memory(&set, cfg)?;
            Ok(emitted)
        })
        .collect::<Result<_>>()?;
    Ok(Sieved {
        keys: set.into_sorted_keys(),
        candidates: per_unit.iter().sum(),
        pair_count: None,
    })
}

fn sieve_split(
    n: usize,
    t: i64,
    cfg: &CensusConfig,
    codec: &KeyCodec,
    meter: &WorkMeter,
) -> Result<Sieved> {
    let cap = lemma1_window(n, t).min(split_window(n, t));
    let linears = primitive_linears(t, cap);
    let search = SplitSearch {
        n,
        t,
        linears: &linears,
        meter,
    };
    let set = ShardedSet::new();
    let per_first: Vec<u64> = (0..linears.len())
        .into_par_iter()
        .map(|first| {
            let mut buf = set.buffer();
            let mut emitted = 0u64;
            search.run_from(first, &mut |p: &[i64]| {
                buf.insert(codec.pack(p));
                emitted += 1;
            })?;
            buf.flush();
            check_set_memory(&set, cfg)?;
            Ok(emitted)
        })
        .collect::<Result<_>>()?;
    let candidates: u64 = per_first.iter().sum();
    let keys = set.into_sorted_keys();
    // sorted tuples times a signed content are unique factorizations
    if candidates != keys.len() as u64 {
        return Err(Error::Inconsistency(format!(
            "split n={n} t={t}: {candidates} tuples but {} distinct products",
            keys.len()
        )));
    }
    Ok(Sieved {
        keys,
        candidates,
        pair_count: None,
    })
}

fn sieve_q_split(
    t: i64,
    cfg: &CensusConfig,
    codec: &KeyCodec,
    meter: &WorkMeter,
) -> Result<Sieved> {
    let lin = primitive_linears(t, t);
    let set = ShardedSet::new();
    let per_f: Vec<u64> = lin
        .par_iter()
        .map(|f| {
            let mut buf = set.buffer();
            let mut emitted = 0u64;
            let mut steps = 0u64;
            for g in lin.iter().take_while(|g| f.a * g.a <= t) {
                steps += 1;
                let q = product_of(f, g);
                let h = q.iter().map(|c| c.abs()).max().unwrap_or(0);
                if h > t {
                    continue;
                }
                for c in 1..=t / h {
                    for sign in [1, -1] {
                        buf.insert(codec.pack(&q.map(|x| sign * c * x)));
                        emitted += 1;
                    }
                }
            }
            meter.charge(steps)?;
            buf.flush();
            check_set_memory(&set, cfg)?;
            Ok(emitted)
        })
        .collect::<Result<_>>()?;
    Ok(Sieved {
        keys: set.into_sorted_keys(),
        candidates: per_f.iter().sum(),
        pair_count: None,
    })
}

fn factor_degrees(coeffs: &[i64]) -> Result<Vec<usize>> {
    Ok(irreducible_factors(&IntPolynomial::from_slice(coeffs))?
        .iter()
        .map(|f| f.deg())
        .collect())
}

fn max_factor_degree(coeffs: &[i64]) -> Result<usize> {
    Ok(factor_degrees(coeffs)?.into_iter().max().unwrap_or(0))
}

fn reducible(coeffs: &[i64]) -> Result<bool> {
    match coeffs {
        [a0, a1, a2] => Ok(quadratic_is_reducible(*a2, *a1, *a0)),
        _ => Ok(is_reducible_over_q(&IntPolynomial::from_slice(coeffs))?.reducible),
    }
}

/// Classifies every polynomial of the universe independently of the sieve.
fn oracle_scan(query: &CensusQuery, codec: &KeyCodec, meter: &WorkMeter) -> Result<Sieved> {
    let (n, t) = (query.degree, query.height_bound);
    let class = query.class;
    let keys = scan_universe(n, t, codec, meter, |c| {
        Ok(match class {
            CensusClass::Reducible | CensusClass::QSplitPrimitive => reducible(c)?,
            CensusClass::SplitCompletely => {
                n == 1 || (reducible(c)? && factor_degrees(c)?.iter().all(|&d| d == 1))
            }
            CensusClass::KFactor(k) => reducible(c)? && factor_degrees(c)?.contains(&k),
            CensusClass::NoLargeFactor => reducible(c)? && max_factor_degree(c)? <= n / 2,
            CensusClass::PairSetPnStar => unreachable!("pair sets are counted by shell formula"),
        })
    })?;
    let candidates = universe_size(n, t)
        .unwrap_or(u128::MAX)
        .min(u64::MAX as u128) as u64;
    Ok(Sieved {
        keys,
        candidates,
        pair_count: None,
    })
}

/// Ordered pairs of nonconstant polynomials with degree sum `n` and
/// `H(f) H(g) <= floor(e^n t)`, summed over height shells.
fn pair_set_size(n: usize, t: i64) -> Result<u64> {
    let w = lemma1_window(n, t);
    let shells = |d: usize| -> Result<Vec<u128>> { (1..=w).map(|h| shell_size(d, h)).collect() };
    let by_degree: Vec<Vec<u128>> = (1..n).map(shells).collect::<Result<_>>()?;
    let mut total = 0u128;
    for d in 1..n {
        let (sf, sg) = (&by_degree[d - 1], &by_degree[n - d - 1]);
        for hf in 1..=w {
            for hg in 1..=w / hf {
                let term = sf[hf as usize - 1]
                    .checked_mul(sg[hg as usize - 1])
                    .ok_or(Error::Overflow("pair set size"))?;
                total = total
                    .checked_add(term)
                    .ok_or(Error::Overflow("pair set size"))?;
            }
        }
    }
    u64::try_from(total).map_err(|_| Error::Overflow("pair set size"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::census::census_members;
    use std::collections::BTreeSet;

    fn cfg() -> CensusConfig {
        CensusConfig::unlimited()
    }

    fn scan_cfg() -> CensusConfig {
        CensusConfig {
            method: Method::OracleScan,
            ..CensusConfig::unlimited()
        }
    }

    fn members(class: CensusClass, n: usize, t: i64, cfg: &CensusConfig) -> BTreeSet<Vec<i64>> {
        let (_, ms) = census_members(&CensusQuery::new(n, t, class), cfg).unwrap();
        ms.into_iter().map(|p| p.into_coeffs()).collect()
    }

    #[test]
    fn pinned_counts() {
        let c = cfg();
        assert_eq!(count_reducible(2, 1, &c).unwrap().count, 8);
        assert_eq!(count_reducible(3, 1, &c).unwrap().count, 30);
        assert_eq!(count_reducible(2, 2, &c).unwrap().count, 36);
        assert_eq!(count_reducible(3, 2, &c).unwrap().count, 204);
        assert_eq!(count_reducible(4, 1, &c).unwrap().count, 94);
        assert_eq!(count_split(1, 1, &c).unwrap().count, 6);
        assert_eq!(count_split(3, 1, &c).unwrap().count, 12);
        assert_eq!(count_k_factor(2, 3, 1, &c).unwrap().count, 18);
        assert_eq!(count_pair_set(2, 1, &c).unwrap().count, 3296);
        assert_eq!(count_q_split_primitive(1, &c).unwrap().count, 8);
    }

    #[test]
    fn reducible_quadratics_match_independent_counts() {
        let expected = [(8, 812), (16, 3892)];
        for (t, count) in expected {
            assert_eq!(count_reducible(2, t, &cfg()).unwrap().count, count, "t={t}");
        }
    }

    #[test]
    fn sieve_equals_oracle_scan_as_sets() {
        for n in 2..=4 {
            for t in 1..=3 {
                for class in [
                    CensusClass::Reducible,
                    CensusClass::SplitCompletely,
                    CensusClass::NoLargeFactor,
                ] {
                    let sieve = members(class, n, t, &cfg());
                    let scan = members(class, n, t, &scan_cfg());
                    assert_eq!(sieve, scan, "{class} n={n} t={t}");
                }
                for k in (n / 2 + 1)..n {
                    let class = CensusClass::KFactor(k);
                    assert_eq!(
                        members(class, n, t, &cfg()),
                        members(class, n, t, &scan_cfg()),
                        "{class} n={n} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn split_equals_reducible_for_quadratics() {
        for t in 1..=10 {
            let r = count_reducible(2, t, &cfg()).unwrap().count;
            assert_eq!(count_split(2, t, &cfg()).unwrap().count, r, "t={t}");
            assert_eq!(
                count_q_split_primitive(t, &cfg()).unwrap().count,
                r,
                "t={t}"
            );
        }
    }

    #[test]
    fn primitive_pair_counts() {
        let expected = [28, 100, 276, 500, 868, 1172, 1812, 2340];
        for (t, &want) in (1..=8).zip(&expected) {
            let pairs = primitive_linear_pair_count(t).unwrap();
            assert_eq!(pairs, want, "t={t}");
            let q = count_q_split_primitive(t, &cfg()).unwrap().count;
            assert!(4 * q >= pairs, "t={t}");
        }
    }

    #[test]
    fn cubic_reducibles_split_or_carry_a_quadratic() {
        for t in 1..=2 {
            let red = members(CensusClass::Reducible, 3, t, &cfg());
            let k2 = members(CensusClass::KFactor(2), 3, t, &cfg());
            let split = members(CensusClass::SplitCompletely, 3, t, &cfg());
            let diff: BTreeSet<_> = red.difference(&k2).cloned().collect();
            assert_eq!(diff, split, "t={t}");
        }
    }

    #[test]
    fn large_factor_classes_are_disjoint() {
        let k3 = members(CensusClass::KFactor(3), 5, 1, &cfg());
        let k4 = members(CensusClass::KFactor(4), 5, 1, &cfg());
        assert!(!k3.is_empty() && !k4.is_empty());
        assert!(k3.is_disjoint(&k4));
    }

    #[test]
    fn quartic_reducibles_are_covered_by_smaller_classes() {
        let red = members(CensusClass::Reducible, 4, 2, &cfg());
        let k3 = members(CensusClass::KFactor(3), 4, 2, &cfg());
        let small = members(CensusClass::NoLargeFactor, 4, 2, &cfg());
        for p in red.difference(&k3) {
            assert!(small.contains(p), "{p:?}");
        }
        assert!(small.contains(&vec![0, 0, 0, -1, 1]));
        let sophie = members(CensusClass::NoLargeFactor, 4, 4, &cfg());
        assert!(sophie.contains(&vec![4, 0, 0, 0, 1]));
    }

    #[test]
    fn classes_are_closed_under_sign_and_reflection() {
        for class in [
            CensusClass::Reducible,
            CensusClass::SplitCompletely,
            CensusClass::KFactor(3),
            CensusClass::NoLargeFactor,
        ] {
            let set = members(class, 4, 2, &cfg());
            assert_eq!(set.len() % 2, 0);
            for p in &set {
                let neg: Vec<i64> = p.iter().map(|c| -c).collect();
                let refl: Vec<i64> = p
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if i % 2 == 1 { -c } else { *c })
                    .collect();
                assert!(set.contains(&neg) && set.contains(&refl), "{class} {p:?}");
            }
        }
    }

    #[test]
    fn counts_are_monotone_and_above_trivial_bound() {
        for n in 2..=4usize {
            let mut prev = 0;
            for t in 1..=3i64 {
                let r = count_reducible(n, t, &cfg()).unwrap().count;
                let trivial = 2 * t as u64 * (2 * t as u64 + 1).pow(n as u32 - 1);
                assert!(r >= trivial && r >= prev, "n={n} t={t}");
                assert!(count_pair_set(n, t, &cfg()).unwrap().count >= r);
                prev = r;
            }
        }
    }

    #[test]
    fn k_factor_pairs_match_products() {
        let r = count_k_factor(3, 4, 3, &cfg()).unwrap();
        assert_eq!(r.work.pair_count, Some(r.count));
    }

    #[test]
    fn shell_breakdown_sums_to_count() {
        let c = CensusConfig {
            shell_breakdown: true,
            ..cfg()
        };
        let r = count_reducible(3, 3, &c).unwrap();
        let shells = r.shell_breakdown.unwrap();
        assert_eq!(shells.values().sum::<u64>(), r.count);
        assert_eq!(shells[&1], 30);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let q = CensusQuery::new(3, 4, CensusClass::Reducible);
        let base = members(q.class, 3, 4, &CensusConfig::with_threads(1));
        for threads in [2, 8] {
            assert_eq!(
                members(q.class, 3, 4, &CensusConfig::with_threads(threads)),
                base
            );
        }
    }

    #[test]
    fn refusals() {
        assert!(count_reducible(2, 0, &cfg()).is_err());
        assert!(count_k_factor(2, 4, 1, &cfg()).is_err());
        let tiny = CensusConfig {
            budget: Budget {
                memory_bytes: 1000,
                ..Budget::unlimited()
            },
            ..cfg()
        };
        assert!(matches!(
            count_reducible(3, 4, &tiny),
            Err(Error::MemoryBudget { .. })
        ));
        assert!(matches!(
            count_split(3, 4, &tiny),
            Err(Error::MemoryBudget { .. })
        ));
        let few = CensusConfig {
            budget: Budget::steps(1000),
            ..cfg()
        };
        assert!(count_reducible(4, 3, &few).unwrap_err().is_budget_refusal());
    }
}
