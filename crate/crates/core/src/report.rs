//! Machine-readable run reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// One named pass/fail verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, expected: None, actual: None }
    }

    pub fn with(name: impl Into<String>, passed: bool, expected: impl ToString, actual: impl ToString) -> Self {
        Check { name: name.into(), passed, expected: Some(expected.to_string()), actual: Some(actual.to_string()) }
    }

    /// `|actual − expected| ≤ tol`.
    pub fn close(name: impl Into<String>, actual: f64, expected: f64, tol: f64) -> Self {
        let passed = (actual - expected).abs() <= tol;
        Check::with(name, passed, format!("{expected} ± {tol:e}"), actual)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub op: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Report {
    pub fn new(op: impl Into<String>, inputs: Value, outputs: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            op: op.into(),
            inputs,
            outputs,
            checks: Vec::new(),
            seed: None,
            timestamp: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_checks(mut self, checks: Vec<Check>) -> Self {
        self.checks = checks;
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are serializable")
    }

    /// JSON without the timestamp, for byte comparison of replays.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.timestamp = None;
        serde_json::to_string(&r).expect("report values are serializable")
    }
}
