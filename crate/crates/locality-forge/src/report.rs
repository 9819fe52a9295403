//! Pass/fail reports with concrete witnesses.

use serde::Serialize;

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub checks: u64,
    pub violations: Vec<String>,
}

const MAX_KEPT: usize = 64;

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), checks: 0, violations: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        if self.violations.len() < MAX_KEPT {
            self.violations.push(msg.into());
        }
    }

    /// Records one check; `msg` is only built on failure.
    #[inline]
    pub fn check(&mut self, cond: bool, msg: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !cond {
            let m = msg();
            self.fail(m);
        }
        cond
    }

    pub fn absorb(&mut self, other: Report) {
        self.checks += other.checks;
        for v in other.violations {
            self.fail(format!("{}: {}", other.name, v));
        }
    }

    pub fn first_witness(&self) -> Option<&str> {
        self.violations.first().map(|s| s.as_str())
    }

    pub fn into_result(self) -> crate::Result<Self> {
        if self.ok() {
            Ok(self)
        } else {
            Err(crate::Error::Internal(format!(
                "{} failed: {}",
                self.name,
                self.violations.join("; ")
            )))
        }
    }
}
