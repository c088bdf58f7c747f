//! Machine-readable records of verified claims.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact rational arithmetic; zero tolerance.
    Exact,
    /// Floating-point evaluation with rigorous error radii.
    BoundedNumeric,
    /// Numerical evidence without a rigorous error analysis.
    NumericEvidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Failed,
    Supports,
    Refutes,
    Inconclusive,
}

impl Verdict {
    /// Whether a suite containing this verdict counts as a success.
    pub fn is_success(self) -> bool {
        matches!(self, Verdict::Verified | Verdict::Supports)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim_id: String,
    pub method: Method,
    /// Short human-readable description of the claim being checked.
    pub anchor: String,
    pub inputs: BTreeMap<String, Value>,
    pub witnesses: Vec<Witness>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(claim_id: &str, method: Method, anchor: &str) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            method,
            anchor: anchor.to_string(),
            inputs: BTreeMap::new(),
            witnesses: Vec::new(),
            verdict: Verdict::Inconclusive,
            notes: Vec::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.to_string(), to_value(value));
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }

    pub fn check(&mut self, label: &str, passed: bool, detail: impl Serialize) -> bool {
        self.witnesses.push(Witness { label: label.to_string(), passed, detail: to_value(detail) });
        passed
    }

    /// Sets the verdict from the witnesses: verified only if all passed.
    pub fn finish(mut self) -> Self {
        let ok = !self.witnesses.is_empty() && self.witnesses.iter().all(|w| w.passed);
        self.verdict = if ok { Verdict::Verified } else { Verdict::Failed };
        self
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn first_failure(&self) -> Option<&Witness> {
        self.witnesses.iter().find(|w| !w.passed)
    }

    pub fn witness(&self, label: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.label == label)
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| Value::String(format!("<unserializable: {e}>")))
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("certificate {claim_id} failed: {detail}")]
pub struct CertificateFailure {
    pub claim_id: String,
    pub detail: String,
}

impl CertificateFailure {
    pub fn from_certificate(c: &Certificate) -> Option<Self> {
        if c.verdict.is_success() {
            return None;
        }
        let detail = match c.first_failure() {
            Some(w) => format!("{} ({})", w.label, w.detail),
            None => format!("verdict {:?}", c.verdict),
        };
        Some(Self { claim_id: c.claim_id.clone(), detail })
    }
}
