//! Per-suite report objects.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    pub checks_run: u64,
    /// Present whenever `status` is `fail`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    /// Wall-clock milliseconds; only recorded on request so that reports
    /// stay byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<String>,
}

/// Accumulates check outcomes for one suite. The first failure wins;
/// later checks still run and are counted.
#[derive(Debug)]
pub struct Recorder {
    suite: String,
    checks: u64,
    failure: Option<Value>,
    unknown: bool,
    detail: Vec<String>,
}

impl Recorder {
    pub fn new(suite: &str) -> Self {
        Recorder {
            suite: suite.to_string(),
            checks: 0,
            failure: None,
            unknown: false,
            detail: Vec::new(),
        }
    }

    /// Records one check; `counterexample` is only evaluated on failure.
    pub fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(counterexample());
        }
        ok
    }

    /// Counts `n` checks that were decided elsewhere and passed.
    pub fn passed(&mut self, n: u64) {
        self.checks += n;
    }

    /// Marks the suite as depending on an undecided norm question.
    pub fn unknown(&mut self, note: impl Into<String>) {
        self.unknown = true;
        self.detail.push(note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.detail.push(note.into());
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn finish(self) -> SuiteReport {
        let status = if self.failure.is_some() {
            Status::Fail
        } else if self.unknown {
            Status::Unknown
        } else {
            Status::Pass
        };
        SuiteReport {
            suite: self.suite,
            status,
            checks_run: self.checks,
            counterexample: self.failure,
            elapsed: None,
            detail: self.detail,
        }
    }
}

/// Exit code for a finished run: 1 on any failure, 2 if something is
/// undecided, 0 otherwise.
pub fn exit_code(reports: &[SuiteReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if reports.iter().any(|r| r.status == Status::Unknown) {
        2
    } else {
        0
    }
}
