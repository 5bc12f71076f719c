//! Step, time and memory limits shared by the enumerators.
//!
//! A query that would exceed its budget is refused with an error; nothing
//! ever returns a partial count.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

pub const DEFAULT_STEP_LIMIT: u64 = 100_000_000;
pub const DEFAULT_MEMORY_BYTES: u64 = 2 << 30;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(60);

pub const ENV_TIME_SECS: &str = "REDPOLY_TIME_BUDGET_SECS";
pub const ENV_MEMORY_BYTES: &str = "REDPOLY_MEMORY_BUDGET_BYTES";
pub const ENV_STEP_LIMIT: &str = "REDPOLY_STEP_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Elementary steps (candidates visited). `None` means unlimited.
    pub max_steps: Option<u64>,
    pub time_limit: Option<Duration>,
    pub memory_bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: None,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            memory_bytes: DEFAULT_MEMORY_BYTES,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_steps: None,
            time_limit: None,
            memory_bytes: u64::MAX,
        }
    }

    pub fn steps(limit: u64) -> Self {
        Budget {
            max_steps: Some(limit),
            ..Budget::unlimited()
        }
    }

    /// Default budget with any overrides present in the environment applied.
    pub fn from_env() -> Result<Self> {
        let mut b = Budget::default();
        if let Some(secs) = read_env_u64(ENV_TIME_SECS)? {
            b.time_limit = (secs > 0).then(|| Duration::from_secs(secs));
        }
        if let Some(bytes) = read_env_u64(ENV_MEMORY_BYTES)? {
            b.memory_bytes = bytes;
        }
        if let Some(steps) = read_env_u64(ENV_STEP_LIMIT)? {
            b.max_steps = (steps > 0).then_some(steps);
        }
        Ok(b)
    }

    pub fn check_memory(&self, what: impl Into<String>, projected: u64) -> Result<()> {
        if projected > self.memory_bytes {
            return Err(Error::MemoryBudget {
                what: what.into(),
                projected,
                budget: self.memory_bytes,
            });
        }
        Ok(())
    }
}

fn read_env_u64(name: &str) -> Result<Option<u64>> {
    match std::env::var(name) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Error::precondition(format!("{name} must be a nonnegative integer, got {v:?}"))
        }),
        Err(_) => Ok(None),
    }
}

/// Thread-safe step counter with a deadline.
#[derive(Debug)]
pub struct WorkMeter {
    what: &'static str,
    steps: AtomicU64,
    max_steps: Option<u64>,
    started: Instant,
    time_limit: Option<Duration>,
    tripped: AtomicBool,
}

impl WorkMeter {
    pub fn new(what: &'static str, budget: &Budget) -> Self {
        WorkMeter {
            what,
            steps: AtomicU64::new(0),
            max_steps: budget.max_steps,
            started: Instant::now(),
            time_limit: budget.time_limit,
            tripped: AtomicBool::new(false),
        }
    }

    /// Records `n` steps and fails once any limit is exceeded.
    pub fn charge(&self, n: u64) -> Result<()> {
        let total = self.steps.fetch_add(n, Ordering::Relaxed) + n;
        if self.tripped.load(Ordering::Relaxed) {
            return Err(self.refusal());
        }
        if let Some(limit) = self.max_steps {
            if total > limit {
                self.tripped.store(true, Ordering::Relaxed);
                return Err(self.refusal());
            }
        }
        if let Some(limit) = self.time_limit {
            if self.started.elapsed() > limit {
                self.tripped.store(true, Ordering::Relaxed);
                return Err(Error::TimeBudget(limit));
            }
        }
        Ok(())
    }

    fn refusal(&self) -> Error {
        match (self.max_steps, self.time_limit) {
            (Some(limit), _) if self.steps.load(Ordering::Relaxed) > limit => Error::WorkLimit {
                what: self.what,
                limit,
            },
            (_, Some(t)) => Error::TimeBudget(t),
            _ => Error::WorkLimit {
                what: self.what,
                limit: u64::MAX,
            },
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}
