//! Result records shared by the verification routines, the command line and
//! the Python bindings.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

/// Failures beyond this many are counted but not recorded individually.
const MAX_RECORDED: usize = 50;

/// The outcome of one verification routine.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    /// Occurrence counts of classified situations (table rows and the like).
    pub stats: BTreeMap<String, usize>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn ok(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.checked += 1;
        self.failed += 1;
        if self.failures.len() < MAX_RECORDED {
            self.failures.push(msg.into());
        }
    }

    pub fn expect(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if cond {
            self.ok();
        } else {
            self.fail(msg());
        }
    }

    pub fn count(&mut self, key: impl Into<String>) {
        *self.stats.entry(key.into()).or_default() += 1;
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED {
                self.failures.push(f);
            }
        }
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let mut s = format!("{} checks, {} failed", self.checked, self.failed);
        if let Some(first) = self.failures.first() {
            s.push_str(&format!("; first failure: {first}"));
        }
        s
    }
}

impl From<crate::uqrep::RelationReport> for CheckReport {
    fn from(r: crate::uqrep::RelationReport) -> Self {
        let mut out = CheckReport {
            checked: r.checked,
            ..Default::default()
        };
        for v in r.violations {
            out.failed += 1;
            if out.failures.len() < MAX_RECORDED {
                out.failures.push(format!("{} fails on {}", v.relation, v.basis));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A named check inside a [`RunReport`].
#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub stats: BTreeMap<String, usize>,
}

/// Aggregated outcome of a command, in a stable order.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<NamedCheck>,
    pub status: Status,
}

impl RunReport {
    pub fn new(command: &str, parameters: BTreeMap<String, String>) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            checks: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Runs `f`, timing it, and records its report under `name`. Errors are
    /// recorded as failures.
    pub fn run<F>(&mut self, name: &str, f: F)
    where
        F: FnOnce() -> crate::Result<CheckReport>,
    {
        let start = Instant::now();
        let result = f();
        let elapsed_ms = start.elapsed().as_millis();
        let (status, detail, stats) = match result {
            Ok(r) if r.passed() => (Status::Pass, r.summary(), r.stats),
            Ok(r) => (Status::Fail, r.summary(), r.stats),
            Err(e) => (Status::Fail, format!("error: {e}"), BTreeMap::new()),
        };
        self.push(NamedCheck {
            name: name.to_string(),
            status,
            detail,
            elapsed_ms,
            stats,
        });
    }

    pub fn push(&mut self, check: NamedCheck) {
        if check.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }
}
