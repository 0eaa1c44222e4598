//! Verification report shared by the objective validators and the checks in
//! [`crate::verify`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of one check on one instance (or a merged battery).
///
/// Slacks are signed and normalized by the natural scale of the instance
/// (recorded under `aux["scale"]` when one applies): a nonnegative slack means
/// the inequality holds. `pass` is `min_slack >= -tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub instance: String,
    #[serde(skip)]
    pub slacks: Vec<f64>,
    pub min_slack: f64,
    #[serde(rename = "tol")]
    pub tolerance: f64,
    pub pass: bool,
    pub aux: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn from_slacks(
        check: impl Into<String>,
        instance: impl Into<String>,
        slacks: Vec<f64>,
        tolerance: f64,
    ) -> Self {
        let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        // a NaN slack never passes
        let pass = !slacks.iter().any(|s| s.is_nan()) && min_slack >= -tolerance;
        Self {
            check: check.into(),
            instance: instance.into(),
            slacks,
            min_slack,
            tolerance,
            pass,
            aux: BTreeMap::new(),
        }
    }

    /// A report carrying only a pass flag and auxiliary values.
    pub fn flag(check: impl Into<String>, instance: impl Into<String>, pass: bool) -> Self {
        Self {
            check: check.into(),
            instance: instance.into(),
            slacks: Vec::new(),
            min_slack: if pass { 0.0 } else { -1.0 },
            tolerance: 0.0,
            pass,
            aux: BTreeMap::new(),
        }
    }

    pub fn with_aux(mut self, key: impl Into<String>, value: f64) -> Self {
        self.aux.insert(key.into(), value);
        self
    }

    pub fn aux(&self, key: &str) -> Option<f64> {
        self.aux.get(key).copied()
    }

    /// Combines per-instance reports of the same check. The merged report
    /// keeps the worst slack, the loosest tolerance, and counts.
    pub fn merge(check: impl Into<String>, instance: impl Into<String>, parts: &[VerificationReport]) -> Self {
        let tolerance = parts.iter().map(|r| r.tolerance).fold(0.0, f64::max);
        let mut merged = Self::from_slacks(
            check,
            instance,
            parts.iter().map(|r| r.min_slack).collect(),
            tolerance,
        );
        merged.pass = parts.iter().all(|r| r.pass);
        let failed = parts.iter().filter(|r| !r.pass).count();
        merged
            .with_aux("instances", parts.len() as f64)
            .with_aux("failed", failed as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_min_slack_within_tolerance() {
        let r = VerificationReport::from_slacks("c", "i", vec![0.5, -1e-8], 1e-7);
        assert!(r.pass);
        assert_eq!(r.min_slack, -1e-8);
        let r = VerificationReport::from_slacks("c", "i", vec![0.5, -1e-6], 1e-7);
        assert!(!r.pass);
        let r = VerificationReport::from_slacks("c", "i", vec![f64::NAN], 1e-7);
        assert!(!r.pass);
    }

    #[test]
    fn merge_counts_failures() {
        let a = VerificationReport::from_slacks("c", "a", vec![0.0], 1e-7);
        let b = VerificationReport::from_slacks("c", "b", vec![-1.0], 1e-7);
        let m = VerificationReport::merge("c", "all", &[a, b]);
        assert!(!m.pass);
        assert_eq!(m.aux("failed"), Some(1.0));
        assert_eq!(m.min_slack, -1.0);
    }

    #[test]
    fn json_shape() {
        let r = VerificationReport::from_slacks("c", "i", vec![1.0], 1e-7).with_aux("k", 2.0);
        let v = serde_json::to_value(&r).unwrap();
        for key in ["check", "instance", "min_slack", "tol", "pass", "aux"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(v.get("slacks").is_none());
    }
}
