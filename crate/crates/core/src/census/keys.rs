//! Packing of bounded-height coefficient tuples into `u64` keys and the
//! sharded set that deduplicates them.

use std::sync::Mutex;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::polyarith::IntPolynomial;

/// Mixed-radix packing of `degree + 1` coefficients in `[-t, t]`.
#[derive(Clone, Copy, Debug)]
pub struct KeyCodec {
    degree: usize,
    t: i64,
    radix: u64,
}

impl KeyCodec {
    pub fn new(degree: usize, t: i64) -> Result<Self> {
        let radix = 2 * t as u64 + 1;
        radix.checked_pow(degree as u32 + 1).ok_or_else(|| {
            Error::precondition(format!(
                "keys for degree {degree}, height {t} do not fit in 64 bits"
            ))
        })?;
        Ok(KeyCodec { degree, t, radix })
    }

    #[inline]
    pub fn pack(&self, coeffs: &[i64]) -> u64 {
        debug_assert_eq!(coeffs.len(), self.degree + 1);
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.radix + (c + self.t) as u64)
    }

    pub fn unpack(&self, mut key: u64) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.degree + 1);
        for _ in 0..=self.degree {
            out.push((key % self.radix) as i64 - self.t);
            key /= self.radix;
        }
        out
    }

    pub fn poly(&self, key: u64) -> IntPolynomial {
        IntPolynomial::new(self.unpack(key))
    }

    pub fn height(&self, key: u64) -> i64 {
        self.unpack(key).iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

const SHARD_BITS: u32 = 6;
const FLUSH_AT: usize = 1024;

fn shard_of(key: u64) -> usize {
    // splitmix64 finalizer
    let mut z = key.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    (z >> (64 - SHARD_BITS)) as usize
}

/// Concurrent set of product keys, sharded by a hash of the key. Workers
/// buffer keys locally and merge whole batches into each shard.
#[derive(Debug)]
pub struct ShardedSet {
    shards: Vec<Mutex<FxHashSet<u64>>>,
}

impl Default for ShardedSet {
    fn default() -> Self {
        Self::new()
    }
}

impl ShardedSet {
    pub fn new() -> Self {
        ShardedSet {
            shards: (0..1 << SHARD_BITS).map(|_| Mutex::default()).collect(),
        }
    }

    pub fn buffer(&self) -> SetBuffer<'_> {
        SetBuffer {
            set: self,
            pending: vec![Vec::new(); self.shards.len()],
        }
    }

    fn merge(&self, shard: usize, keys: &mut Vec<u64>) {
        let mut guard = self.shards[shard].lock().expect("shard lock poisoned");
        guard.extend(keys.drain(..));
    }

    pub fn len(&self) -> usize {
        self.shards
            .iter()
            .map(|s| s.lock().expect("shard lock poisoned").len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, key: u64) -> bool {
        self.shards[shard_of(key)]
            .lock()
            .expect("shard lock poisoned")
            .contains(&key)
    }

    pub fn into_sorted_keys(self) -> Vec<u64> {
        let mut keys: Vec<u64> = self
            .shards
            .into_iter()
            .flat_map(|s| s.into_inner().expect("shard lock poisoned"))
            .collect();
        keys.sort_unstable();
        keys
    }
}

/// Per-worker insertion buffer; flushes on drop.
pub struct SetBuffer<'a> {
    set: &'a ShardedSet,
    pending: Vec<Vec<u64>>,
}

impl SetBuffer<'_> {
    #[inline]
    pub fn insert(&mut self, key: u64) {
        let s = shard_of(key);
        let buf = &mut self.pending[s];
        buf.push(key);
        if buf.len() >= FLUSH_AT {
            self.set.merge(s, buf);
        }
    }

    pub fn flush(&mut self) {
        for (s, buf) in self.pending.iter_mut().enumerate() {
            if !buf.is_empty() {
                self.set.merge(s, buf);
            }
        }
    }
}

impl Drop for SetBuffer<'_> {
    fn drop(&mut self) {
        self.flush();
    }
}
