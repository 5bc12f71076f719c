//! Content-addressed cache of reducibility verdicts.
//!
//! Keys are canonical coefficient tuples: the primitive part with a positive
//! leading coefficient, so `p`, `-p` and `c * p` share one entry. The on-disk
//! form is JSON lines behind a versioned header; see `docs/INTERFACES.md`.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use rustc_hash::{FxHashMap, FxHasher};
use serde::{Deserialize, Serialize};
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::irreducibility::is_reducible_over_q;
use crate::polyarith::{gcd_of, IntPolynomial};

pub const ORACLE_CACHE_SCHEMA: &str = "redpoly.oracle-cache";
pub const ORACLE_CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    schema: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct Record {
    degree: usize,
    coeffs: Vec<i64>,
    reducible: bool,
}

const SHARDS: usize = 32;

#[derive(Debug)]
pub struct OracleCache {
    shards: Vec<RwLock<FxHashMap<Box<[i64]>, bool>>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Default for OracleCache {
    fn default() -> Self {
        Self::new()
    }
}

fn canonical(coeffs: &[i64]) -> Box<[i64]> {
    let g = gcd_of(coeffs);
    let sign = if coeffs.last().copied().unwrap_or(0) < 0 {
        -1
    } else {
        1
    };
    coeffs.iter().map(|&c| sign * c / g).collect()
}

fn shard_of(key: &[i64]) -> usize {
    let mut h = FxHasher::default();
    key.hash(&mut h);
    (h.finish() >> 32) as usize % SHARDS
}

impl OracleCache {
    pub fn new() -> Self {
        OracleCache {
            shards: (0..SHARDS).map(|_| RwLock::default()).collect(),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    /// Reducibility of the polynomial with the given (trimmed, degree >= 1)
    /// coefficients, computed once per canonical form.
    pub fn is_reducible(&self, coeffs: &[i64]) -> Result<bool> {
        let key = canonical(coeffs);
        let shard = &self.shards[shard_of(&key)];
        if let Some(&v) = shard.read().expect("cache lock poisoned").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let verdict = is_reducible_over_q(&IntPolynomial::from_slice(&key))?.reducible;
        shard
            .write()
            .expect("cache lock poisoned")
            .insert(key, verdict);
        Ok(verdict)
    }

    pub fn is_irreducible(&self, coeffs: &[i64]) -> Result<bool> {
        self.is_reducible(coeffs).map(|r| !r)
    }

    pub fn len(&self) -> usize {
        self.shards
            .iter()
            .map(|s| s.read().expect("cache lock poisoned").len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    /// Loads a cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        let cache = OracleCache::new();
        let file = match fs::File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        let mut lines = BufReader::new(file).lines();
        let header: Header = match lines.next() {
            Some(line) => serde_json::from_str(&line?)?,
            None => return Ok(cache),
        };
        if header.schema != ORACLE_CACHE_SCHEMA || header.version != ORACLE_CACHE_VERSION {
            return Err(Error::Format {
                what: "oracle cache header",
                detail: format!("{} v{}", header.schema, header.version),
            });
        }
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)?;
            if rec.coeffs.len() != rec.degree + 1 || rec.coeffs.last() == Some(&0) {
                return Err(Error::Format {
                    what: "oracle cache record",
                    detail: line,
                });
            }
            let key = canonical(&rec.coeffs);
            cache.shards[shard_of(&key)]
                .write()
                .expect("cache lock poisoned")
                .insert(key, rec.reducible);
        }
        Ok(cache)
    }

    /// Writes every entry, sorted, replacing `path` atomically.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut entries: Vec<(Box<[i64]>, bool)> = self
            .shards
            .iter()
            .flat_map(|s| {
                s.read()
                    .expect("cache lock poisoned")
                    .iter()
                    .map(|(k, &v)| (k.clone(), v))
                    .collect::<Vec<_>>()
            })
            .collect();
        entries.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let tmp = path.with_extension("tmp");
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            let header = Header {
                schema: ORACLE_CACHE_SCHEMA.into(),
                version: ORACLE_CACHE_VERSION,
            };
            writeln!(w, "{}", serde_json::to_string(&header)?)?;
            for (k, v) in entries {
                let rec = Record {
                    degree: k.len() - 1,
                    coeffs: k.into_vec(),
                    reducible: v,
                };
                writeln!(w, "{}", serde_json::to_string(&rec)?)?;
            }
            w.flush()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_share_entries() {
        let cache = OracleCache::new();
        assert!(cache.is_reducible(&[-1, 0, 1]).unwrap());
        assert!(cache.is_reducible(&[3, 0, -3]).unwrap());
        assert!(!cache.is_reducible(&[1, 0, 1]).unwrap());
        assert_eq!(cache.len(), 2);
        assert_eq!(cache.hits(), 1);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("oracle.jsonl");
        let cache = OracleCache::new();
        for c in [[1i64, 0, 1], [-1, 0, 1], [2, 3, 1]] {
            cache.is_reducible(&c).unwrap();
        }
        cache.is_reducible(&[4, 0, 0, 0, 1]).unwrap();
        cache.save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(first, r#"{"schema":"redpoly.oracle-cache","version":1}"#);
        let loaded = OracleCache::load(&path).unwrap();
        assert_eq!(loaded.len(), 4);
        assert!(loaded.is_reducible(&[4, 0, 0, 0, 1]).unwrap());
        assert_eq!(loaded.misses(), 0);
    }

    #[test]
    fn bad_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("oracle.jsonl");
        std::fs::write(&path, "{\"schema\":\"other\",\"version\":1}\n").unwrap();
        assert!(OracleCache::load(&path).is_err());
        assert!(OracleCache::load(&dir.path().join("missing"))
            .unwrap()
            .is_empty());
    }
}
