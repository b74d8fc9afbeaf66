//! Pass/fail records shared by the verification modules.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Which identity a [`TheoremReport`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    /// (1/d)∫ over one ladder segment of |S₁|^{2l} against the segment length.
    SegmentMoment,
    /// Sum of segment moments against the moment over the joined segments.
    SegmentMomentSum,
    /// Difference of two ladder increments against the lifted S₁ moment.
    IncrementLift,
    /// Mixed |ζ|² and |S₁|^{2l} density over a segment against (1−c)d.
    Conservation,
    /// Prefix S₁ moment generated by the next ladder increment.
    MomentFromIncrement,
    /// Ladder increment generated by the prefix S₁ moment.
    IncrementFromMoment,
    F1Sum,
    F1Product,
    F1Quotient,
    Fermat,
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serialisable tag");
        f.write_str(s.as_str().expect("string tag"))
    }
}

/// One verified identity: both sides, their difference and the envelope the
/// difference is held to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub check: CheckId,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs − rhs.
    pub residual: f64,
    pub expected_envelope: f64,
    pub pass: bool,
    /// Run parameters and auxiliary diagnostics.
    pub details: BTreeMap<String, f64>,
}

impl TheoremReport {
    /// Builds a report; `pass` is |lhs − rhs| ≤ envelope.
    pub fn new(check: CheckId, lhs: f64, rhs: f64, envelope: f64) -> Self {
        debug_assert!(envelope > 0.0);
        let residual = lhs - rhs;
        Self {
            check,
            lhs,
            rhs,
            residual,
            expected_envelope: envelope,
            pass: residual.abs() <= envelope,
            details: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    /// Verdict recomputed from the stored fields.
    pub fn is_consistent(&self) -> bool {
        self.expected_envelope > 0.0
            && self.pass == (self.residual.abs() <= self.expected_envelope)
            && (self.residual - (self.lhs - self.rhs)).abs() <= 1e-12 * self.lhs.abs().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_envelope() {
        let r = TheoremReport::new(CheckId::Conservation, 1.05, 1.0, 0.1);
        assert!(r.pass && r.is_consistent());
        let r = TheoremReport::new(CheckId::Conservation, 1.5, 1.0, 0.1).with("T", 1e4);
        assert!(!r.pass && r.is_consistent());
        assert_eq!(r.details["T"], 1e4);
    }

    #[test]
    fn tags_are_kebab_case() {
        assert_eq!(CheckId::SegmentMoment.to_string(), "segment-moment");
        assert_eq!(CheckId::F1Quotient.to_string(), "f1-quotient");
    }
}
