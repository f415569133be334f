//! Cooperative wall-clock budgets checked inside long-running loops.

use std::time::{Duration, Instant};

use crate::Error;

/// A wall-clock deadline. The default never expires.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline {
    at: Option<Instant>,
}

impl Deadline {
    pub fn none() -> Self {
        Deadline { at: None }
    }

    pub fn after(budget: Duration) -> Self {
        Deadline {
            at: Some(Instant::now() + budget),
        }
    }

    pub fn expired(&self) -> bool {
        self.at.is_some_and(|t| Instant::now() >= t)
    }

    pub fn check(&self) -> Result<(), Error> {
        if self.expired() {
            Err(Error::Timeout)
        } else {
            Ok(())
        }
    }
}
