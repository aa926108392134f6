//! Structured pass/fail reporting and the runtime check registry.
//!
//! Every verification workflow in the crate produces a [`CheckResult`]: an
//! itemized list of assertions with exact or numeric payloads rendered as
//! strings. The [`Check`] trait puts each workflow behind a common
//! interface so it can be registered by name and selected at runtime.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

/// One verified assertion inside a check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub pass: bool,
    /// Residual, counterexample, or confirming value, rendered exactly.
    pub detail: String,
}

/// Itemized outcome of a single verification workflow.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckResult {
    pub items: Vec<CheckItem>,
}

impl CheckResult {
    pub fn new() -> Self {
        CheckResult { items: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.items.push(CheckItem {
            label: label.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.pass)
    }

    pub fn merged(mut self, other: CheckResult) -> CheckResult {
        self.items.extend(other.items);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply at the requested size.
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail => write!(f, "FAIL"),
            Status::Skipped => write!(f, "skipped"),
        }
    }
}

/// Outcome of one named check at one chain length.
///
/// Wall time is reported in human-readable output only; it is excluded
/// from JSON so identical invocations serialize byte-identically.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    /// Chain length N = 2M + 1.
    pub n: u32,
    /// Number of down spins M.
    pub m: u32,
    pub status: Status,
    pub mode: Mode,
    pub items: Vec<CheckItem>,
    #[serde(skip)]
    pub wall: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// A named verification workflow selectable at runtime.
pub trait Check {
    fn name(&self) -> &'static str;
    fn mode(&self) -> Mode;
    /// Largest down-spin count the check applies to, if bounded.
    fn max_m(&self) -> Option<u32> {
        None
    }
    /// Runs the check for chain length `n = 2m + 1`.
    fn run(&self, m: u32) -> CheckResult;
}

/// Registry of checks keyed by name; iteration order is the registration
/// order, so reports come out deterministically.
#[derive(Default)]
pub struct CheckRegistry {
    order: Vec<&'static str>,
    map: BTreeMap<&'static str, Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a check; panics on duplicate names.
    pub fn register(&mut self, check: Box<dyn Check>) {
        let name = check.name();
        assert!(
            self.map.insert(name, check).is_none(),
            "check {name:?} registered twice"
        );
        self.order.push(name);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.map.get(name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.order.iter().copied()
    }

    /// Runs one check at chain length `n = 2m + 1`, timing it and mapping
    /// out-of-range sizes to [`Status::Skipped`].
    pub fn run_one(&self, name: &str, m: u32) -> Option<VerificationReport> {
        let check = self.get(name)?;
        let start = Instant::now();
        let (status, items) = if check.max_m().is_some_and(|limit| m > limit) {
            (Status::Skipped, Vec::new())
        } else {
            let result = check.run(m);
            let status = if result.pass() { Status::Pass } else { Status::Fail };
            (status, result.items)
        };
        Some(VerificationReport {
            check: name.to_string(),
            n: 2 * m + 1,
            m,
            status,
            mode: check.mode(),
            items,
            wall: start.elapsed(),
        })
    }

    /// Runs every registered check in registration order.
    pub fn run_all(&self, m: u32) -> Vec<VerificationReport> {
        self.order
            .iter()
            .map(|name| self.run_one(name, m).expect("registered"))
            .collect()
    }
}
