//! Exact counts of the bounded-height polynomial classes.
//!
//! Sieve counters build every member as a product of factors found by the
//! pair enumerator ([`pairs`]) or the split enumerator ([`split`]), then
//! deduplicate products in a [`ShardedSet`]. The oracle scan classifies the
//! whole universe directly and serves as an independent route.

mod counters;
mod keys;
mod oracle_cache;
pub mod pairs;
mod scan;
pub mod split;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::polyarith::IntPolynomial;

pub use counters::{
    count_k_factor, count_no_large_factor, count_pair_set, count_q_split_primitive,
    count_reducible, count_split, primitive_linear_pair_count,
};
pub use keys::{KeyCodec, ShardedSet};
pub use oracle_cache::{OracleCache, ORACLE_CACHE_SCHEMA, ORACLE_CACHE_VERSION};
pub use pairs::{lemma1_window, FactorConstraint, PairSpec, WorkUnit};
pub use scan::universe_size;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum CensusClass {
    /// `R_n(t)`: reducible over the rationals.
    Reducible,
    /// `R_n^s(t)`: product of `n` linear factors.
    SplitCompletely,
    /// `R_(k,n)(t)`: has an irreducible factor of degree `k`, `n/2 < k < n`.
    KFactor(usize),
    /// `R_n^*(t)`: reducible with every irreducible factor of degree `<= n/2`.
    NoLargeFactor,
    /// `P_n^*(t)`: ordered pairs in the Gelfond window (not a polynomial set).
    PairSetPnStar,
    /// `Q(t)`: quadratics divisible by a product of two primitive linears.
    QSplitPrimitive,
}

impl fmt::Display for CensusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusClass::Reducible => write!(f, "reducible"),
            CensusClass::SplitCompletely => write!(f, "split"),
            CensusClass::KFactor(k) => write!(f, "kfactor:{k}"),
            CensusClass::NoLargeFactor => write!(f, "nolarge"),
            CensusClass::PairSetPnStar => write!(f, "pairset"),
            CensusClass::QSplitPrimitive => write!(f, "qsplit"),
        }
    }
}

impl From<CensusClass> for String {
    fn from(c: CensusClass) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for CensusClass {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for CensusClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "reducible" => CensusClass::Reducible,
            "split" => CensusClass::SplitCompletely,
            "nolarge" => CensusClass::NoLargeFactor,
            "pairset" => CensusClass::PairSetPnStar,
            "qsplit" => CensusClass::QSplitPrimitive,
            other => {
                match other.strip_prefix("kfactor:") {
                    Some(k) => CensusClass::KFactor(k.parse().map_err(|_| {
                        Error::precondition(format!("bad factor degree in {other:?}"))
                    })?),
                    None => {
                        return Err(Error::precondition(format!(
                            "unknown census class {other:?}"
                        )))
                    }
                }
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CensusQuery {
    pub degree: usize,
    pub height_bound: i64,
    pub class: CensusClass,
}

impl CensusQuery {
    pub fn new(degree: usize, height_bound: i64, class: CensusClass) -> Self {
        CensusQuery {
            degree,
            height_bound,
            class,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (n, t) = (self.degree, self.height_bound);
        if t < 1 {
            return Err(Error::precondition(format!(
                "height bound must be a positive integer, got {t}"
            )));
        }
        if n > pairs::MAX_DEGREE {
            return Err(Error::precondition(format!(
                "degree {n} exceeds {}",
                pairs::MAX_DEGREE
            )));
        }
        let min_degree = match self.class {
            CensusClass::SplitCompletely => 1,
            _ => 2,
        };
        if n < min_degree {
            return Err(Error::precondition(format!(
                "class {} needs degree >= {min_degree}",
                self.class
            )));
        }
        match self.class {
            CensusClass::KFactor(k) if !(2 * k > n && k < n) => Err(Error::precondition(format!(
                "factor degree k = {k} must satisfy n/2 < k < n for n = {n}"
            ))),
            CensusClass::QSplitPrimitive if n != 2 => {
                Err(Error::precondition("qsplit is defined for degree 2 only"))
            }
            _ => Ok(()),
        }
    }

    /// Canonical text identifying the query; equal fingerprints must give
    /// equal counts.
    pub fn fingerprint(&self) -> String {
        format!(
            "census/{}/n={}/t={}",
            self.class, self.degree, self.height_bound
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Sieve,
    OracleScan,
    ShellFormula,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sieve => "sieve",
            Method::OracleScan => "oracle-scan",
            Method::ShellFormula => "shell-formula",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkStats {
    pub candidates: u64,
    pub dedupe_size: u64,
    pub steps: u64,
    /// Pair count from the unique-decomposition bijection (k-factor only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_count: Option<u64>,
    #[serde(with = "duration_ms")]
    pub elapsed: Duration,
}

mod duration_ms {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        u64::deserialize(d).map(Duration::from_millis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub query: CensusQuery,
    pub count: u64,
    /// Members of height exactly `h`, keyed by `h`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shell_breakdown: Option<BTreeMap<i64, u64>>,
    pub method: Method,
    pub work: WorkStats,
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
    pub budget: Budget,
    pub method: Method,
    pub shell_breakdown: bool,
    pub oracle: Arc<OracleCache>,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            threads: 0,
            budget: Budget::default(),
            method: Method::Sieve,
            shell_breakdown: false,
            oracle: Arc::new(OracleCache::new()),
        }
    }
}

impl CensusConfig {
    pub fn with_threads(threads: usize) -> Self {
        CensusConfig {
            threads,
            ..Default::default()
        }
    }

    pub fn unlimited() -> Self {
        CensusConfig {
            budget: Budget::unlimited(),
            ..Default::default()
        }
    }

    pub(crate) fn install<T: Send>(&self, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        if self.threads == 0 {
            return job();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::Inconsistency(format!("worker pool: {e}")))?;
        pool.install(job)
    }
}

/// Runs a census query with the configured method.
pub fn run_census(query: &CensusQuery, cfg: &CensusConfig) -> Result<CensusResult> {
    counters::run(query, cfg, false).map(|(result, _)| result)
}

/// Runs a query and also returns its members, sorted.
pub fn census_members(
    query: &CensusQuery,
    cfg: &CensusConfig,
) -> Result<(CensusResult, Vec<IntPolynomial>)> {
    let (result, members) = counters::run(query, cfg, true)?;
    let members = members
        .ok_or_else(|| Error::precondition(format!("class {} has no member set", query.class)))?;
    Ok((result, members))
}
