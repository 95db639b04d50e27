//! Machine-readable verification reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::fock::probe::ProbeReport;

/// Failures kept per suite; the total is always reported.
pub const MAX_RECORDED_FAILURES: usize = 20;

/// One nonzero residual with the inputs that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    /// `None` for fixed (non-random) checks.
    pub trial: Option<u64>,
    pub inputs: BTreeMap<String, String>,
    pub residual_norm_is_zero: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: u64,
    pub checks: u64,
    /// Draws that had no valid input (e.g. no degree outside `rad f`).
    pub skipped: u64,
    /// Evaluations per check name.
    pub check_counts: BTreeMap<String, u64>,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    /// Inconclusive observations; never affect pass/fail.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub trials: u64,
    pub window: i64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl Report {
    pub fn new(scenario: String, seed: u64, trials: u64, window: i64, suites: Vec<SuiteReport>) -> Self {
        let passed = suites.iter().all(|s| s.passed);
        Self {
            scenario,
            seed,
            trials,
            window,
            suites,
            passed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per suite plus an overall verdict.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let verdict = if s.passed { "pass" } else { "FAIL" };
            out.push_str(&format!(
                "{:<9} trials={:<6} checks={:<7} skipped={:<5} failures={:<5} {verdict}\n",
                s.name, s.trials, s.checks, s.skipped, s.failure_count
            ));
            for c in &s.candidates {
                out.push_str(&format!("          candidate: {c}\n"));
            }
            if let Some(f) = s.failures.first() {
                let trial = f.trial.map_or("fixed".to_string(), |t| t.to_string());
                out.push_str(&format!("          first failure: {} (trial {trial}) residual {}\n", f.check, f.witness));
            }
        }
        out.push_str(if self.passed { "overall: pass\n" } else { "overall: FAIL\n" });
        out
    }
}
