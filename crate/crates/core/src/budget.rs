//! Cooperative time budgets for long feature computations.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    at: Instant,
    budget: Duration,
}

impl Deadline {
    pub fn after(budget: Duration) -> Self {
        Self { at: Instant::now() + budget, budget }
    }

    pub fn budget(&self) -> Duration {
        self.budget
    }

    pub fn check(&self) -> Result<()> {
        if Instant::now() >= self.at {
            Err(Error::BudgetExceeded(self.budget.as_secs_f64()))
        } else {
            Ok(())
        }
    }
}

/// Checks an optional deadline.
pub fn check(deadline: Option<&Deadline>) -> Result<()> {
    deadline.map_or(Ok(()), Deadline::check)
}
