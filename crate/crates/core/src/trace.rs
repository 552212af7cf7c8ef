//! Auditable decision traces: every inequality a decider tests, in order, with
//! its exact value.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::poly::GridPoint;
use crate::rational::{self, Rational};

/// Outcome of a closed-form decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// A hypothesis of the characterisation is not met; no verdict on the
    /// property itself.
    PreconditionViolated,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// Serialized as `true`, `false` or `"precondition-violated"`.
impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::Holds => s.serialize_bool(true),
            Verdict::Fails => s.serialize_bool(false),
            Verdict::PreconditionViolated => s.serialize_str("precondition-violated"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckValue {
    Scalar(Rational),
    /// Left and right side of an inequality.
    Pair(Rational, Rational),
    /// A lattice point where a sign condition fails.
    Point { m: u64, n: u64, value: Rational },
    Text(String),
    None,
}

impl From<&GridPoint> for CheckValue {
    fn from(g: &GridPoint) -> Self {
        CheckValue::Point { m: g.m, n: g.n, value: g.value.clone() }
    }
}

impl Serialize for CheckValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CheckValue::Scalar(r) => s.serialize_str(&rational::format(r)),
            CheckValue::Pair(a, b) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&rational::format(a))?;
                seq.serialize_element(&rational::format(b))?;
                seq.end()
            }
            CheckValue::Point { m, n, value } => {
                #[derive(Serialize)]
                struct P<'a> {
                    m: u64,
                    n: u64,
                    value: &'a str,
                }
                P { m: *m, n: *n, value: &rational::format(value) }.serialize(s)
            }
            CheckValue::Text(t) => s.serialize_str(t),
            CheckValue::None => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: CheckValue,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionTrace {
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl DecisionTrace {
    pub fn new() -> Self {
        DecisionTrace { verdict: Verdict::Holds, checks: Vec::new(), note: None }
    }

    pub fn push(&mut self, name: &'static str, value: CheckValue, satisfied: bool) -> bool {
        self.checks.push(Check { name, value, satisfied });
        satisfied
    }

    /// Records `lhs <= rhs`.
    pub fn le(&mut self, name: &'static str, lhs: Rational, rhs: Rational) -> bool {
        let ok = lhs <= rhs;
        self.push(name, CheckValue::Pair(lhs, rhs), ok)
    }

    /// Records `v > 0`.
    pub fn positive(&mut self, name: &'static str, v: &Rational) -> bool {
        let ok = num::Signed::is_positive(v);
        self.push(name, CheckValue::Scalar(v.clone()), ok)
    }

    /// Records `v >= 0`.
    pub fn nonnegative(&mut self, name: &'static str, v: &Rational) -> bool {
        let ok = !num::Signed::is_negative(v);
        self.push(name, CheckValue::Scalar(v.clone()), ok)
    }

    /// Sets the verdict from the recorded checks.
    pub fn conclude(mut self) -> Self {
        self.verdict = Verdict::from_bool(self.checks.iter().all(|c| c.satisfied));
        self
    }

    pub fn precondition_violated(mut self) -> Self {
        self.verdict = Verdict::PreconditionViolated;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl Default for DecisionTrace {
    fn default() -> Self {
        Self::new()
    }
}
