//! Suite reports with a stable JSON shape.

use serde::{Deserialize, Serialize};

/// Outcome of one verification suite. Serialized as
/// `{"suite": ..., "N": ..., "seed": ..., "trials": ..., "pass": ..., "counterexample": ...}`
/// plus the claim identifier and code version. Reports contain no
/// timestamps, so identical configurations produce byte-identical files.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    /// Short identifier of the verified claim.
    pub claim: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub pass: bool,
    pub counterexample: Option<serde_json::Value>,
    pub code_version: String,
    /// Observations that never affect the exit code (e.g. spectra for x < 0).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(suite: &str, claim: &str, n: usize, seed: u64, trials: usize) -> Self {
        Report {
            suite: suite.to_string(),
            claim: claim.to_string(),
            n,
            seed,
            trials,
            pass: true,
            counterexample: None,
            code_version: crate::CODE_VERSION.to_string(),
            notes: Vec::new(),
        }
    }

    /// Records the first counterexample and marks the report failed.
    pub fn fail(&mut self, counterexample: serde_json::Value) {
        if self.pass {
            self.pass = false;
            self.counterexample = Some(counterexample);
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Merges a sub-result, keeping the first counterexample.
    pub fn absorb(&mut self, other: &Report) {
        if !other.pass && self.pass {
            self.pass = false;
            self.counterexample = other.counterexample.clone();
        }
        self.notes.extend(other.notes.iter().cloned());
    }

    pub fn one_line(&self) -> String {
        format!(
            "{} {} (N={}, seed={}, trials={})",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.n,
            self.seed,
            self.trials
        )
    }
}
