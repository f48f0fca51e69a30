//! Verdicts and the serialized check report.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grid::GridSummary;
use crate::real::Real;

/// Significant digits of margins and witnesses in reports.
pub const REPORT_DIGITS: usize = crate::real::SERIAL_DIGITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "counterexample")]
    Counterexample,
    #[serde(rename = "boundary_equality")]
    BoundaryEquality,
    #[serde(rename = "inconclusive")]
    Inconclusive,
    /// A conjecture held at every sampled point.
    #[serde(rename = "consistent-with")]
    ConsistentWith,
    /// A conjecture failed at a certified point.
    #[serde(rename = "refuted-at-witness")]
    RefutedAtWitness,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Counterexample => "counterexample",
            Verdict::BoundaryEquality => "boundary_equality",
            Verdict::Inconclusive => "inconclusive",
            Verdict::ConsistentWith => "consistent-with",
            Verdict::RefutedAtWitness => "refuted-at-witness",
        }
    }

    /// Verified, consistent, or equality on a non-strict side.
    pub fn is_pass(self) -> bool {
        matches!(
            self,
            Verdict::Verified | Verdict::BoundaryEquality | Verdict::ConsistentWith
        )
    }

    pub fn is_violation(self) -> bool {
        matches!(self, Verdict::Counterexample | Verdict::RefutedAtWitness)
    }

    fn severity(self) -> u8 {
        match self {
            Verdict::Verified | Verdict::ConsistentWith => 0,
            Verdict::BoundaryEquality => 1,
            Verdict::Inconclusive => 2,
            Verdict::Counterexample | Verdict::RefutedAtWitness => 3,
        }
    }

    /// The worse of two verdicts.
    pub fn combine(self, other: Verdict) -> Verdict {
        if other.severity() > self.severity() {
            other
        } else {
            self
        }
    }

    /// Maps theorem vocabulary onto conjecture vocabulary.
    pub fn for_conjecture(self) -> Verdict {
        match self {
            Verdict::Verified | Verdict::BoundaryEquality => Verdict::ConsistentWith,
            Verdict::Counterexample => Verdict::RefutedAtWitness,
            v => v,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An evaluation point: a dimension, or a decimal rendering of a real point
/// or tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Integer(u64),
    Decimal(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Integer(n) => write!(f, "{n}"),
            Witness::Decimal(s) => f.write_str(s),
        }
    }
}

pub fn decimal(x: &Real) -> String {
    x.to_decimal(REPORT_DIGITS)
}

/// Outcome of one side (one inequality, or one derivative order) of a claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideReport {
    pub label: String,
    pub strict: bool,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_margin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub points: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub equality_points: Vec<Witness>,
    #[serde(skip_serializing_if = "is_zero", default)]
    pub inconclusive_points: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip)]
    pub signed_margin: Option<Real>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

/// Result of checking one registry claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub statement: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_margin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub bits_used: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<GridSummary>,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub sides: Vec<SideReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    /// Aggregates sides: the worst verdict wins; the witness is the first
    /// violation if any, otherwise the point of least margin.
    pub fn from_sides(
        id: &str,
        statement: &str,
        anchor: &str,
        conjecture: bool,
        sides: Vec<SideReport>,
        bits_used: u32,
    ) -> Self {
        let mut verdict = Verdict::Verified;
        for s in &sides {
            verdict = verdict.combine(s.verdict);
        }
        let violating = sides.iter().find(|s| s.verdict.is_violation());
        let least = sides
            .iter()
            .filter(|s| s.signed_margin.is_some())
            .min_by(|a, b| {
                let (a, b) = (a.signed_margin.as_ref(), b.signed_margin.as_ref());
                a.partial_cmp(&b).expect("finite margins")
            });
        let pick = violating.or(least);
        let equality = sides
            .iter()
            .find(|s| s.verdict == Verdict::BoundaryEquality && violating.is_none());
        let witness = match (violating, equality) {
            (Some(v), _) => v.witness.clone(),
            (None, Some(e)) => e.equality_points.first().cloned(),
            _ => pick.and_then(|s| s.witness.clone()),
        };
        if conjecture {
            verdict = verdict.for_conjecture();
        }
        if sides.is_empty() {
            verdict = Verdict::Inconclusive;
        }
        Self {
            id: id.to_string(),
            statement: statement.to_string(),
            verdict,
            min_margin: pick.and_then(|s| s.min_margin.clone()),
            witness,
            bits_used,
            grid: None,
            anchor: anchor.to_string(),
            order: None,
            value: None,
            sides,
            notes: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_vocabulary() {
        assert_eq!(
            serde_json::to_string(&Verdict::ConsistentWith).unwrap(),
            "\"consistent-with\""
        );
        assert_eq!(
            serde_json::to_string(&Verdict::BoundaryEquality).unwrap(),
            "\"boundary_equality\""
        );
        assert_eq!(Verdict::Counterexample.for_conjecture(), Verdict::RefutedAtWitness);
        assert_eq!(
            Verdict::Verified.combine(Verdict::BoundaryEquality),
            Verdict::BoundaryEquality
        );
        assert_eq!(
            Verdict::Inconclusive.combine(Verdict::Counterexample),
            Verdict::Counterexample
        );
        assert!(Verdict::BoundaryEquality.is_pass());
    }

    #[test]
    fn witness_serializes_untagged() {
        assert_eq!(serde_json::to_string(&Witness::Integer(5)).unwrap(), "5");
        assert_eq!(
            serde_json::to_string(&Witness::Decimal("0.5".into())).unwrap(),
            "\"0.5\""
        );
    }
}
