//! Growth-order suites: exact counts along a geometric grid, normalized by
//! each theorem's order of growth, plus the exact inequalities available at
//! every grid point.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{lattice_sum, CoordinateWeight, LatticeSumSpec};
use crate::census::{census_members, run_census, CensusClass, CensusConfig, CensusQuery, Method};
use crate::error::{Error, Result};

use super::fixtures::{Band, Fixtures};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// `|R_n(t)|` against `t^n`.
    T1,
    /// `|R_2(t)|` against `t^2 log t`.
    T2,
    /// `R_n^s(t)` against `t^2 (log t)^(n-1)`.
    T3,
    /// `|R_(k,n)(t)|` against `t^(k+1)`.
    T4,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(Theorem::T1),
            "T2" => Ok(Theorem::T2),
            "T3" => Ok(Theorem::T3),
            "T4" => Ok(Theorem::T4),
            _ => Err(Error::precondition(format!(
                "unknown suite {s:?}; expected T1, T2, T3 or T4"
            ))),
        }
    }
}

impl Theorem {
    pub fn default_degree(self) -> usize {
        match self {
            Theorem::T2 => 2,
            Theorem::T1 | Theorem::T3 => 3,
            Theorem::T4 => 4,
        }
    }

    pub fn default_grid(self) -> Vec<i64> {
        match self {
            Theorem::T1 => vec![4, 8, 16, 32],
            Theorem::T2 => vec![16, 32, 64, 128],
            Theorem::T3 => vec![8, 16, 32, 64],
            Theorem::T4 => vec![3, 6, 12],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyParams {
    pub theorem: Theorem,
    pub n: usize,
    /// Factor degree for the k-factor suite; ignored elsewhere.
    pub k: usize,
    pub grid: Vec<i64>,
}

impl VerifyParams {
    pub fn new(theorem: Theorem) -> Self {
        let n = theorem.default_degree();
        VerifyParams {
            theorem,
            n,
            k: n - 1,
            grid: theorem.default_grid(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (n, k) = (self.n, self.k);
        match self.theorem {
            Theorem::T1 if n < 3 => return Err(Error::precondition("T1 needs n >= 3")),
            Theorem::T2 if n != 2 => {
                return Err(Error::precondition("T2 is the degree-2 suite; n must be 2"))
            }
            Theorem::T3 if n < 2 => return Err(Error::precondition("T3 needs n >= 2")),
            Theorem::T4 if !(2 * k > n && k < n) => {
                return Err(Error::precondition(format!(
                    "T4 needs n/2 < k < n, got n={n}, k={k}"
                )))
            }
            _ => {}
        }
        let g = &self.grid;
        if g.len() < 3 {
            return Err(Error::precondition("grid needs at least 3 values"));
        }
        if g[0] < 2 || g.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::precondition(
                "grid values must be increasing and >= 2",
            ));
        }
        if g.windows(3)
            .any(|w| w[1] as i128 * w[1] as i128 != w[0] as i128 * w[2] as i128)
        {
            return Err(Error::precondition(
                "grid must be geometric (constant ratio)",
            ));
        }
        Ok(())
    }

    fn class(&self) -> CensusClass {
        match self.theorem {
            Theorem::T1 | Theorem::T2 => CensusClass::Reducible,
            Theorem::T3 => CensusClass::SplitCompletely,
            Theorem::T4 => CensusClass::KFactor(self.k),
        }
    }

    pub fn normalizer(&self, t: i64) -> f64 {
        let (tf, n) = (t as f64, self.n as i32);
        match self.theorem {
            Theorem::T1 => tf.powi(n),
            Theorem::T2 => tf * tf * tf.ln(),
            Theorem::T3 => tf * tf * tf.ln().powi(n - 1),
            Theorem::T4 => tf.powi(self.k as i32 + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub t: i64,
    pub count: u64,
    pub normalizer: f64,
    pub ratio: f64,
    /// Canonical decomposition count (k-factor suite only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_count: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSummary {
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Smallest and largest ratio between adjacent normalized counts.
    pub min_drift: f64,
    pub max_drift: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem: Theorem,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub grid: Vec<i64>,
    pub rows: Vec<Row>,
    pub band: BandSummary,
    pub allowed_drift: Band,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Exact counts and normalized ratios along the grid.
pub fn compute_rows(params: &VerifyParams, cfg: &CensusConfig) -> Result<Vec<Row>> {
    params.validate()?;
    let class = params.class();
    let method = match params.theorem {
        // the degree-2 suite counts by discriminant over the whole universe
        Theorem::T2 => Method::OracleScan,
        _ => Method::Sieve,
    };
    let cfg = CensusConfig {
        method,
        shell_breakdown: false,
        ..cfg.clone()
    };
    params
        .grid
        .iter()
        .map(|&t| {
            let result = run_census(&CensusQuery::new(params.n, t, class), &cfg)?;
            let normalizer = params.normalizer(t);
            Ok(Row {
                t,
                count: result.count,
                normalizer,
                ratio: result.count as f64 / normalizer,
                pair_count: result.work.pair_count,
            })
        })
        .collect()
}

pub fn run_verify(
    params: &VerifyParams,
    fixtures: &Fixtures,
    cfg: &CensusConfig,
) -> Result<VerifyReport> {
    let bands = fixtures.bands(params.theorem)?;
    let rows = compute_rows(params, cfg)?;
    let mut checks = Vec::new();
    let n = params.n;
    for row in &rows {
        let t = row.t;
        match params.theorem {
            Theorem::T1 => {
                let power = (t as u128).pow(n as u32);
                checks.push(inequality(
                    format!("t^{n} <= |R_{n}(t)| at t={t}"),
                    power,
                    row.count,
                ));
                // polynomials with zero constant term, X times anything of degree n-1
                let family = 2 * t as u128 * (2 * t as u128 + 1).pow(n as u32 - 1);
                checks.push(inequality(
                    format!("2t(2t+1)^{} <= |R_{n}(t)| at t={t}", n - 1),
                    family,
                    row.count,
                ));
            }
            Theorem::T2 => {
                let lattice = lattice_sum(&LatticeSumSpec::new(
                    (t / 2) as f64,
                    vec![CoordinateWeight::totient(); 2],
                ))?;
                checks.push(inequality(
                    format!("18 * sum phi(x)phi(y) over G(floor(t/2)) <= |R_2(t)| at t={t}"),
                    18 * lattice,
                    row.count,
                ));
            }
            Theorem::T3 => {
                let bound = t as f64 / (n as f64).powi(n as i32 - 1);
                let lattice = if bound >= 1.0 {
                    lattice_sum(&LatticeSumSpec::new(
                        bound,
                        vec![CoordinateWeight::totient(); n],
                    ))?
                } else {
                    0
                };
                let factorial: u128 = (1..=n as u128).product();
                checks.push(inequality(
                    format!("6^{n} * sum prod phi(x_i) over G_{n}(t/{n}^{}) <= {n}! * R_{n}^s(t) at t={t}", n - 1),
                    6u128.pow(n as u32) * lattice,
                    factorial * row.count as u128,
                ));
            }
            Theorem::T4 => {
                let pairs = row.pair_count.unwrap_or(u64::MAX);
                checks.push(Check {
                    name: format!("canonical pairs = distinct products at t={t}"),
                    passed: pairs == row.count,
                    detail: format!("{pairs} pairs, {} products", row.count),
                });
                if params.k == n - 1 && n >= 4 {
                    if let Some(band) = bands.complement {
                        let reducible =
                            run_census(&CensusQuery::new(n, t, CensusClass::Reducible), cfg)?.count;
                        let rest = reducible - row.count;
                        let ratio = rest as f64 / (t as f64).powi(n as i32 - 1);
                        checks.push(Check {
                            name: format!(
                                "|R_{n}(t) \\ R_({},{n})(t)| / t^{} in band at t={t}",
                                n - 1,
                                n - 1
                            ),
                            passed: band.contains(ratio),
                            detail: format!(
                                "{rest} / {} = {ratio:.6} vs [{}, {}]",
                                t.pow(n as u32 - 1),
                                band.0,
                                band.1
                            ),
                        });
                    }
                }
            }
        }
    }
    if params.theorem == Theorem::T4 {
        checks.push(large_factor_cover(n, 2, cfg)?);
    }
    let drifts: Vec<f64> = rows.windows(2).map(|w| w[1].ratio / w[0].ratio).collect();
    for (w, &d) in rows.windows(2).zip(&drifts) {
        checks.push(Check {
            name: format!("normalized drift t={} -> t={}", w[0].t, w[1].t),
            passed: bands.drift.contains(d),
            detail: format!("{d:.6} vs [{}, {}]", bands.drift.0, bands.drift.1),
        });
    }
    let fold = |it: &mut dyn Iterator<Item = f64>| {
        it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
    };
    let (min_ratio, max_ratio) = fold(&mut rows.iter().map(|r| r.ratio));
    let (min_drift, max_drift) = fold(&mut drifts.iter().copied());
    let verdict = if checks.iter().all(|c| c.passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(VerifyReport {
        theorem: params.theorem,
        n,
        k: (params.theorem == Theorem::T4).then_some(params.k),
        grid: params.grid.clone(),
        rows,
        band: BandSummary {
            min_ratio,
            max_ratio,
            min_drift,
            max_drift,
        },
        allowed_drift: bands.drift,
        checks,
        verdict,
    })
}

fn inequality(name: String, lower: u128, count: impl Into<u128>) -> Check {
    let count = count.into();
    Check {
        name,
        passed: lower <= count,
        detail: format!("{lower} <= {count}"),
    }
}

/// Every reducible polynomial outside `R_(n-1,n)` has no irreducible factor
/// above `n/2` or one of degree `n/2 < k <= n-2`; checked member by member.
pub fn large_factor_cover(n: usize, t: i64, cfg: &CensusConfig) -> Result<Check> {
    let cfg = CensusConfig {
        method: Method::Sieve,
        ..cfg.clone()
    };
    let set = |class| -> Result<BTreeSet<Vec<i64>>> {
        let (_, members) = census_members(&CensusQuery::new(n, t, class), &cfg)?;
        Ok(members.into_iter().map(|p| p.into_coeffs()).collect())
    };
    let reducible = set(CensusClass::Reducible)?;
    let top = set(CensusClass::KFactor(n - 1))?;
    let mut cover = set(CensusClass::NoLargeFactor)?;
    for k in (n / 2 + 1)..=n.saturating_sub(2) {
        cover.extend(set(CensusClass::KFactor(k))?);
    }
    let rest: Vec<&Vec<i64>> = reducible.difference(&top).collect();
    let missing: Vec<&&Vec<i64>> = rest.iter().filter(|p| !cover.contains(**p)).collect();
    Ok(Check {
        name: format!(
            "R_{n}(t) \\ R_({},{n})(t) covered by smaller factor classes at t={t}",
            n - 1
        ),
        passed: missing.is_empty(),
        detail: match missing.first() {
            None => format!("all {} members covered", rest.len()),
            Some(p) => format!("{} uncovered, first {p:?}", missing.len()),
        },
    })
}

/// Plot rows as CSV with header `t,count,normalizer,ratio`.
pub fn plotdata_csv(rows: &[Row]) -> String {
    let mut out = String::from("t,count,normalizer,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.t, r.count, r.normalizer, r.ratio
        ));
    }
    out
}
