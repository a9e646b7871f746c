//! Certificates for the lower-bound arguments and the complexity reports.

mod audit;
mod bounds;
mod elimcx;
mod identity;
pub mod search;

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

pub use audit::robustness_audit;
pub use bounds::{algorithm_size_report, degree_bound_report, theorem1_bound, AlgorithmSizeParams, Theorem1Bound};
pub use elimcx::{default_variants, elimination_complexity_estimate, DEFAULT_SEARCH_BUDGET};
pub use identity::{coefficient_identity_check, default_points, vandermonde_certificate, VANDERMONDE_MAX_N};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of a certificate. The verdict is `pass` iff every check passed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub name: String,
    pub inputs: Map<String, Value>,
    pub objects: Map<String, Value>,
    pub bounds: Map<String, Value>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl CertificateReport {
    pub fn new(name: &str) -> Self {
        CertificateReport {
            name: name.to_string(),
            inputs: Map::new(),
            objects: Map::new(),
            bounds: Map::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn object(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.objects.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn bound(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.bounds.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
        if !passed {
            self.verdict = Verdict::Fail;
        }
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Human-readable rendering, one line per JSON entry.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "certificate {}", self.name);
        for (section, map) in [("input", &self.inputs), ("object", &self.objects), ("bound", &self.bounds)] {
            for (k, v) in map {
                let _ = writeln!(out, "{section} {k} = {v}");
            }
        }
        for c in &self.checks {
            let _ = writeln!(out, "check {}: {} ({})", c.name, if c.passed { "pass" } else { "fail" }, c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note {n}");
        }
        let _ = writeln!(out, "verdict {}", if self.passed() { "pass" } else { "fail" });
        out
    }
}
