//! Certificates: the machine-readable record of one verification run.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::enumerate::EnumerationQuery;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!("sumset-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Verified,
    Refuted,
    BudgetExhausted,
}

impl Outcome {
    /// Process exit code for this outcome.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified => 0,
            Outcome::Refuted => 1,
            Outcome::BudgetExhausted => 2,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Verified => "verified",
            Outcome::Refuted => "refuted",
            Outcome::BudgetExhausted => "budget_exhausted",
        })
    }
}

/// How the maximum element was capped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cap {
    /// The same cap for every `k`.
    Absolute(u32),
    /// A cap depending on `k`, written as a formula such as `2k+6`.
    PerK(String),
}

impl Serialize for Cap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cap::Absolute(n) => serializer.serialize_u32(*n),
            Cap::PerK(rule) => serializer.serialize_str(rule),
        }
    }
}

/// Pass/fail tally for one named check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
}

impl Tally {
    pub fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.failed += !ok as u64;
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
    }
}

/// One set singled out by a run, with what was observed about it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub set: String,
    pub kind: String,
    /// Whether this finding refutes the claim.
    pub counterexample: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub enumerated: u64,
    pub extremal: u64,
    pub nodes: u64,
    /// Per-`k` breakdown; keys depend on the claim.
    pub by_k: BTreeMap<u32, BTreeMap<String, u64>>,
}

impl Counts {
    pub fn bump(&mut self, k: u32, key: &str, by: u64) {
        *self.by_k.entry(k).or_default().entry(key.to_string()).or_default() += by;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub query: Vec<EnumerationQuery>,
    pub claim: String,
    pub outcome: Outcome,
    /// Set literals refuting the claim, in discovery order.
    pub counterexamples: Vec<String>,
    pub counts: Counts,
    pub checks: BTreeMap<String, Tally>,
    pub findings: Vec<Finding>,
    pub cap: Option<Cap>,
    pub tool_version: String,
    pub wall_time_ms: u64,
}

impl Certificate {
    pub fn new(claim: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            query: Vec::new(),
            claim: claim.to_string(),
            outcome: Outcome::Verified,
            counterexamples: Vec::new(),
            counts: Counts::default(),
            checks: BTreeMap::new(),
            findings: Vec::new(),
            cap: None,
            tool_version: TOOL_VERSION.to_string(),
            wall_time_ms: 0,
        }
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        self.checks.entry(name.to_string()).or_default().record(ok);
    }

    pub fn merge_checks(&mut self, checks: &BTreeMap<String, Tally>) {
        for (name, t) in checks {
            self.checks.entry(name.clone()).or_default().merge(*t);
        }
    }

    /// Records a finding; counterexamples also go to the literal list.
    pub fn push(&mut self, f: Finding) {
        if f.counterexample && !self.counterexamples.contains(&f.set) {
            self.counterexamples.push(f.set.clone());
        }
        self.findings.push(f);
    }

    /// Sets the outcome from the collected evidence: any counterexample
    /// refutes; otherwise an exhausted budget wins over verified.
    pub fn settle(&mut self, exhausted: bool) {
        self.outcome = if !self.counterexamples.is_empty() {
            Outcome::Refuted
        } else if exhausted {
            Outcome::BudgetExhausted
        } else {
            Outcome::Verified
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    /// The JSON with `wall_time_ms` zeroed, for byte comparison of reruns.
    pub fn canonical_json(&self) -> String {
        Certificate { wall_time_ms: 0, ..self.clone() }.to_json()
    }
}
