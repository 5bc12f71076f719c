//! Persistent log of census results. Each fingerprint is recorded once;
//! later runs of the same query must reproduce the stored count.

use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::census::{CensusQuery, CensusResult, Method, WorkStats};
use crate::error::{Error, Result};

pub const RESULTS_SCHEMA: &str = "redpoly.results";
pub const RESULTS_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    schema: String,
    version: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub fingerprint: String,
    pub query: CensusQuery,
    pub count: u64,
    pub method: Method,
    pub work: WorkStats,
    pub engine_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl ResultRecord {
    pub fn from_result(result: &CensusResult) -> Self {
        ResultRecord {
            fingerprint: result.query.fingerprint(),
            query: result.query,
            count: result.count,
            method: result.method,
            work: result.work.clone(),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    /// First record of this fingerprint; appended.
    New,
    /// Fingerprint already present with the same count.
    Reproduced,
}

/// Records `record` in the cache at `path` under an exclusive lock.
/// A stored count that differs is an error and leaves the file untouched.
pub fn record_result(path: &Path, record: &ResultRecord) -> Result<CacheStatus> {
    let mut file = OpenOptions::new()
        .read(true)
        .append(true)
        .create(true)
        .open(path)?;
    file.lock()?;
    let status = record_locked(&mut file, record);
    file.unlock()?;
    status
}

fn record_locked(file: &mut File, record: &ResultRecord) -> Result<CacheStatus> {
    let mut text = String::new();
    file.read_to_string(&mut text)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        None => {
            let header = Header {
                schema: RESULTS_SCHEMA.into(),
                version: RESULTS_VERSION,
            };
            writeln!(file, "{}", serde_json::to_string(&header)?)?;
        }
        Some(line) => {
            let header: Header = serde_json::from_str(line)?;
            if header.schema != RESULTS_SCHEMA || header.version != RESULTS_VERSION {
                return Err(Error::Format {
                    what: "results cache header",
                    detail: format!("{} v{}", header.schema, header.version),
                });
            }
            for line in lines {
                let stored: ResultRecord = serde_json::from_str(line)?;
                if stored.fingerprint == record.fingerprint {
                    if stored.count != record.count {
                        return Err(Error::CacheMismatch {
                            fingerprint: record.fingerprint.clone(),
                            stored: stored.count,
                            computed: record.count,
                        });
                    }
                    return Ok(CacheStatus::Reproduced);
                }
            }
        }
    }
    writeln!(file, "{}", serde_json::to_string(record)?)?;
    file.flush()?;
    Ok(CacheStatus::New)
}

/// All records in the cache at `path`, in file order.
pub fn load_results(path: &Path) -> Result<Vec<ResultRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let Some(first) = lines.next() else {
        return Ok(Vec::new());
    };
    let header: Header = serde_json::from_str(first)?;
    if header.schema != RESULTS_SCHEMA || header.version != RESULTS_VERSION {
        return Err(Error::Format {
            what: "results cache header",
            detail: format!("{} v{}", header.schema, header.version),
        });
    }
    lines.map(|l| Ok(serde_json::from_str(l)?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{run_census, CensusClass, CensusConfig};

    fn record(t: i64) -> ResultRecord {
        let q = CensusQuery::new(2, t, CensusClass::Reducible);
        ResultRecord::from_result(&run_census(&q, &CensusConfig::default()).unwrap())
    }

    #[test]
    fn new_then_reproduced() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        assert_eq!(record_result(&path, &record(1)).unwrap(), CacheStatus::New);
        assert_eq!(record_result(&path, &record(2)).unwrap(), CacheStatus::New);
        assert_eq!(
            record_result(&path, &record(1)).unwrap(),
            CacheStatus::Reproduced
        );
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            r#"{"schema":"redpoly.results","version":1}"#
        );
        let stored = load_results(&path).unwrap();
        assert_eq!(stored.len(), 2);
        assert_eq!(stored[0].count, 8);
        assert_eq!(stored[1].count, 36);
    }

    #[test]
    fn mismatch_is_loud_and_not_persisted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        record_result(&path, &record(1)).unwrap();
        let before = std::fs::read_to_string(&path).unwrap();
        let mut wrong = record(1);
        wrong.count = 9;
        let err = record_result(&path, &wrong).unwrap_err();
        assert!(matches!(
            err,
            Error::CacheMismatch {
                stored: 8,
                computed: 9,
                ..
            }
        ));
        assert_eq!(std::fs::read_to_string(&path).unwrap(), before);
    }
}
