//! Reports: canonical JSON, an input digest, and golden-file comparison.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Error;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub field: String,
    /// SHA-256 of the canonical inputs and parameters.
    pub inputs_digest: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    /// Audit name to outcome; the run passes when all are true.
    pub audits: BTreeMap<String, bool>,
    /// Stabilization flags per degree, where relevant.
    pub stabilized: BTreeMap<String, Vec<bool>>,
    /// Sign constants found while comparing pipelines.
    pub signs: BTreeMap<String, String>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, field: String, inputs: &[(&str, String)], parameters: BTreeMap<String, Value>) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        for (name, text) in inputs {
            h.update([0u8]);
            h.update(name.as_bytes());
            h.update([0u8]);
            h.update(text.as_bytes());
        }
        h.update([0u8]);
        h.update(serde_json::to_string(&parameters).expect("parameters serialize").as_bytes());
        Report {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            field,
            inputs_digest: hex::encode(h.finalize()),
            parameters,
            results: BTreeMap::new(),
            audits: BTreeMap::new(),
            stabilized: BTreeMap::new(),
            signs: BTreeMap::new(),
            passed: true,
        }
    }

    pub fn result<T: Serialize>(&mut self, key: &str, v: &T) {
        self.results.insert(key.into(), serde_json::to_value(v).expect("results serialize"));
    }

    pub fn audit(&mut self, key: &str, ok: bool) {
        self.audits.insert(key.into(), ok);
        self.passed = self.audits.values().all(|&b| b);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// `<command>-<first 16 hex digits of the digest>.json`.
    pub fn golden_name(&self) -> String {
        format!("{}-{}.json", self.command, &self.inputs_digest[..16])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoldenOutcome {
    Matched,
    Written,
    /// First differing line, 1-based, with expected and actual text.
    Mismatch { line: usize, expected: String, actual: String },
    Missing,
}

/// Compares `report` with its golden file in `dir`; `bless` (re)writes it.
pub fn check_golden(report: &Report, dir: &Path, bless: bool) -> Result<GoldenOutcome, Error> {
    let path = dir.join(report.golden_name());
    let text = report.to_json();
    if bless {
        std::fs::create_dir_all(dir)?;
        std::fs::write(&path, &text)?;
        return Ok(GoldenOutcome::Written);
    }
    let Ok(expected) = std::fs::read_to_string(&path) else {
        return Ok(GoldenOutcome::Missing);
    };
    if expected == text {
        return Ok(GoldenOutcome::Matched);
    }
    let mut el = expected.lines();
    let mut al = text.lines();
    let mut line = 1;
    loop {
        match (el.next(), al.next()) {
            (Some(e), Some(a)) if e == a => line += 1,
            (e, a) => {
                return Ok(GoldenOutcome::Mismatch {
                    line,
                    expected: e.unwrap_or("<end of file>").into(),
                    actual: a.unwrap_or("<end of file>").into(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut p = BTreeMap::new();
        p.insert("range".into(), Value::from("0..=3"));
        let mut r = Report::new("hh", "Q".into(), &[("algebra", "builtin:k".into())], p);
        r.result("hh", &vec![1, 0, 0, 0]);
        r.audit("loaded", true);
        r
    }

    #[test]
    fn digest_depends_on_inputs_only() {
        let a = sample();
        let b = sample();
        assert_eq!(a.to_json(), b.to_json());
        let c = Report::new("hh", "Q".into(), &[("algebra", "builtin:M2".into())], a.parameters.clone());
        assert_ne!(a.inputs_digest, c.inputs_digest);
    }

    #[test]
    fn golden_cycle() {
        let dir = tempfile::tempdir().unwrap();
        let r = sample();
        assert_eq!(check_golden(&r, dir.path(), false).unwrap(), GoldenOutcome::Missing);
        assert_eq!(check_golden(&r, dir.path(), true).unwrap(), GoldenOutcome::Written);
        assert_eq!(check_golden(&r, dir.path(), false).unwrap(), GoldenOutcome::Matched);
        let mut changed = r.clone();
        changed.result("hh", &vec![1, 0, 0, 1]);
        match check_golden(&changed, dir.path(), false).unwrap() {
            GoldenOutcome::Mismatch { line, .. } => assert!(line > 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn failed_audit_fails_the_report() {
        let mut r = sample();
        r.audit("other", false);
        assert!(!r.passed);
    }
}
