//! Operation and wall-clock caps for the expensive searches (Buchberger, the
//! eigenvalue solver, FGLM, Macaulay sweeps).

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Resource caps. `Budget::default()` is unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of counted steps (S-pair reductions, solver branches, ...).
    pub max_ops: Option<u64>,
    /// Maximum wall-clock time.
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_ops: None, time_limit: None };

    pub fn ops(max_ops: u64) -> Self {
        Budget { max_ops: Some(max_ops), time_limit: None }
    }

    pub fn millis(ms: u64) -> Self {
        Budget { max_ops: None, time_limit: Some(Duration::from_millis(ms)) }
    }

    /// Starts metering against this budget.
    pub fn meter(&self) -> Meter {
        Meter { budget: *self, start: Instant::now(), ops: 0 }
    }
}

/// A running tally against a [`Budget`].
#[derive(Debug, Clone)]
pub struct Meter {
    budget: Budget,
    start: Instant,
    ops: u64,
}

impl Meter {
    /// Records `n` steps and fails once either cap is exceeded.
    pub fn tick(&mut self, n: u64) -> Result<()> {
        self.ops = self.ops.saturating_add(n);
        if let Some(max) = self.budget.max_ops {
            if self.ops > max {
                return Err(Error::BudgetExceeded);
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.start.elapsed() > limit {
                return Err(Error::BudgetExceeded);
            }
        }
        Ok(())
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }
}
