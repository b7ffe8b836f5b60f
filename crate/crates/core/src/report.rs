//! Pass/fail reports with machine-readable witnesses.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one named check; `witness` describes the first failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub axiom: String,
    pub status: Status,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(axiom: impl Into<String>) -> Self {
        Check {
            axiom: axiom.into(),
            status: Status::Pass,
            checked: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records one instance; the first failing instance's witness is kept.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail;
            self.witness = Some(witness());
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.axiom.as_str())
            .collect()
    }

    /// Aligned text rendering, one line per check.
    pub fn render(&self) -> String {
        let width = self.checks.iter().map(|c| c.axiom.len()).max().unwrap_or(0);
        self.checks
            .iter()
            .map(|c| {
                let status = if c.passed() { "pass" } else { "FAIL" };
                let mut line = format!("{:<width$}  {status}  ({} checked)", c.axiom, c.checked);
                if let Some(w) = &c.witness {
                    line.push_str(&format!("  witness: {w}"));
                }
                line
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}
