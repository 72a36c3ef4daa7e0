//! Verification report: one record per checked identity, serialized as JSON
//! with a versioned schema (see `docs/report-schema.md`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "qlab";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped { reason: String },
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped { .. } => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub id: String,
    /// The identity being checked, stated as a formula.
    pub reference: String,
    pub params: BTreeMap<String, Value>,
    #[serde(flatten)]
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(suite: &str, id: &str, reference: impl Into<String>) -> Self {
        CheckRecord {
            suite: suite.into(),
            id: id.into(),
            reference: reference.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            detail: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn passed_if(self, ok: bool) -> Self {
        self.status(Status::from_bool(ok))
    }

    pub fn skipped(self, reason: impl Into<String>) -> Self {
        self.status(Status::Skipped {
            reason: reason.into(),
        })
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn detail_if(self, cond: bool, detail: impl FnOnce() -> String) -> Self {
        if cond {
            self.detail(detail())
        } else {
            self
        }
    }

    /// Marks the record failed with the error message as detail.
    pub fn failed_with(self, err: impl std::fmt::Display) -> Self {
        self.status(Status::Fail).detail(err.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub total: usize,
}

impl Counts {
    fn add(&mut self, s: &Status) {
        match s {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::Skipped { .. } => self.skipped += 1,
        }
        self.total += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub timestamp: String,
    pub scope: String,
    pub config: BTreeMap<String, Value>,
    pub checks: Vec<CheckRecord>,
    /// Counts per suite, in order of first appearance.
    pub suites: Vec<(String, Counts)>,
    pub summary: Counts,
}

impl Report {
    pub fn new(
        tool_version: &str,
        timestamp: &str,
        scope: &str,
        config: BTreeMap<String, Value>,
        checks: Vec<CheckRecord>,
    ) -> Self {
        let mut summary = Counts::default();
        let mut suites: Vec<(String, Counts)> = Vec::new();
        for c in &checks {
            summary.add(&c.status);
            match suites.iter_mut().find(|(name, _)| *name == c.suite) {
                Some((_, counts)) => counts.add(&c.status),
                None => {
                    let mut counts = Counts::default();
                    counts.add(&c.status);
                    suites.push((c.suite.clone(), counts));
                }
            }
        }
        Report {
            schema_version: SCHEMA_VERSION,
            tool: TOOL_NAME.into(),
            tool_version: tool_version.into(),
            timestamp: timestamp.into(),
            scope: scope.into(),
            config,
            checks,
            suites,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// Short human summary: one line per suite and a total.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        for (name, c) in &self.suites {
            out.push_str(&format!(
                "{name:<14} {:>5} pass {:>3} fail {:>3} skipped\n",
                c.pass, c.fail, c.skipped
            ));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{:<14} {:>5} pass {:>3} fail {:>3} skipped\n",
            "total", s.pass, s.fail, s.skipped
        ));
        for f in self.failures() {
            out.push_str(&format!(
                "FAIL {}/{} {:?}: {}\n",
                f.suite,
                f.id,
                f.params,
                f.detail.as_deref().unwrap_or("")
            ));
        }
        out
    }
}
