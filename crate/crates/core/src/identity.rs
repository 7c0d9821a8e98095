//! Identities, verdicts and recommendations shared by every module.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Opaque agent identifier.
///
/// Equality, ordering and hashing look only at the numeric id. The lineage
/// (the principal controlling this identity) is carried for the simulator's
/// ground-truth accounting and is never serialized, so nothing written by the
/// engine can leak it.
#[derive(Clone, Copy, Debug)]
pub struct AgentId {
    raw: u64,
    lineage: Option<u64>,
}

impl AgentId {
    pub fn raw(self) -> u64 {
        self.raw
    }

    /// Identity of the controlling principal, if this id was derived from another.
    pub fn lineage(self) -> Option<AgentId> {
        self.lineage.map(|raw| AgentId { raw, lineage: None })
    }

    /// Rebuilds an id read back from a snapshot. Lineage is not recoverable.
    pub fn from_raw(raw: u64) -> Self {
        Self { raw, lineage: None }
    }
}

impl PartialEq for AgentId {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw
    }
}

impl Eq for AgentId {}

impl Hash for AgentId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.raw.hash(state);
    }
}

impl PartialOrd for AgentId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AgentId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.raw.cmp(&other.raw)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.raw)
    }
}

impl Serialize for AgentId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.raw)
    }
}

impl<'de> Deserialize<'de> for AgentId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        u64::deserialize(deserializer).map(AgentId::from_raw)
    }
}

/// Issues identities from a monotone counter.
#[derive(Clone, Debug)]
pub struct IdGenerator {
    first: u64,
    next: u64,
}

impl Default for IdGenerator {
    fn default() -> Self {
        Self::new()
    }
}

impl IdGenerator {
    pub fn new() -> Self {
        Self::starting_at(1)
    }

    pub fn starting_at(first: u64) -> Self {
        Self { first, next: first }
    }

    pub fn is_issued(&self, id: AgentId) -> bool {
        (self.first..self.next).contains(&id.raw)
    }

    pub fn issued(&self) -> u64 {
        self.next - self.first
    }

    pub fn fresh(&mut self, lineage: Option<AgentId>) -> Result<AgentId> {
        if let Some(parent) = lineage {
            if !self.is_issued(parent) {
                return Err(Error::UnknownLineage(parent));
            }
        }
        let id = AgentId {
            raw: self.next,
            lineage: lineage.map(AgentId::raw),
        };
        self.next += 1;
        Ok(id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "T")]
    Trustworthy,
    #[serde(rename = "N")]
    Untrustworthy,
}

impl Verdict {
    pub fn invert(self) -> Self {
        match self {
            Verdict::Trustworthy => Verdict::Untrustworthy,
            Verdict::Untrustworthy => Verdict::Trustworthy,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Verdict::Trustworthy => 'T',
            Verdict::Untrustworthy => 'N',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s.trim() {
            "T" | "t" => Some(Verdict::Trustworthy),
            "N" | "n" => Some(Verdict::Untrustworthy),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A value in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Probability<T>(T);

impl<T: Scalar> Probability<T> {
    pub fn new(value: T) -> Result<Self> {
        if !(value >= T::zero() && value <= T::one()) {
            return Err(Error::ProbabilityOutOfRange(value.as_f64()));
        }
        Ok(Self(value))
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn one() -> Self {
        Self(T::one())
    }

    pub fn value(self) -> T {
        self.0
    }

    /// Caller guarantees the range.
    pub(crate) fn new_unchecked(value: T) -> Self {
        debug_assert!(value >= T::zero() && value <= T::one(), "{value:?}");
        Self(value)
    }
}

/// One advisor's opinion about one subject.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recommendation<T> {
    pub advisor: AgentId,
    pub subject: AgentId,
    pub verdict: Verdict,
    /// The advisor's credibility in the requester's ledger when it was collected.
    pub credibility_at_issue: Probability<T>,
}

impl<T: Scalar> Recommendation<T> {
    pub fn new(
        advisor: AgentId,
        subject: AgentId,
        verdict: Verdict,
        credibility_at_issue: Probability<T>,
    ) -> Result<Self> {
        if advisor == subject {
            return Err(Error::SelfRecommendation(advisor));
        }
        Ok(Self {
            advisor,
            subject,
            verdict,
            credibility_at_issue,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_ids_are_distinct() {
        let mut ids = IdGenerator::new();
        let a = ids.fresh(None).unwrap();
        let b = ids.fresh(None).unwrap();
        assert_ne!(a, b);
        assert_eq!(ids.issued(), 2);
    }

    #[test]
    fn lineage_propagates() {
        let mut ids = IdGenerator::new();
        let parent = ids.fresh(None).unwrap();
        let child = ids.fresh(Some(parent)).unwrap();
        assert_eq!(child.lineage(), Some(parent));
        assert_eq!(parent.lineage(), None);
    }

    #[test]
    fn unknown_lineage_rejected() {
        let mut ids = IdGenerator::new();
        let stranger = AgentId::from_raw(99);
        assert!(matches!(
            ids.fresh(Some(stranger)),
            Err(Error::UnknownLineage(_))
        ));
        assert_eq!(ids.issued(), 0);
    }

    #[test]
    fn identical_runs_issue_identical_sequences() {
        let run = || {
            let mut ids = IdGenerator::new();
            let root = ids.fresh(None).unwrap();
            let mut out = vec![root];
            for i in 0..20 {
                let lineage = (i % 3 == 0).then_some(root);
                out.push(ids.fresh(lineage).unwrap());
            }
            out.iter()
                .map(|id| (id.raw(), id.lineage().map(AgentId::raw)))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn serialized_id_carries_no_lineage() {
        let mut ids = IdGenerator::new();
        let parent = ids.fresh(None).unwrap();
        let child = ids.fresh(Some(parent)).unwrap();
        assert_eq!(serde_json::to_string(&child).unwrap(), "2");
    }

    #[test]
    fn probability_range() {
        assert!(Probability::new(0.0f64).is_ok());
        assert!(Probability::new(1.0f64).is_ok());
        assert!(Probability::new(-1e-12f64).is_err());
        assert!(Probability::new(1.0f64 + 1e-12).is_err());
        assert!(Probability::new(f64::NAN).is_err());
    }

    #[test]
    fn self_recommendation_rejected() {
        let a = AgentId::from_raw(1);
        let half = Probability::new(0.5f64).unwrap();
        assert!(Recommendation::new(a, a, Verdict::Trustworthy, half).is_err());
    }

    #[test]
    fn verdict_inversion_is_an_involution() {
        for v in [Verdict::Trustworthy, Verdict::Untrustworthy] {
            assert_ne!(v, v.invert());
            assert_eq!(v, v.invert().invert());
            assert_eq!(Verdict::from_symbol(&v.symbol().to_string()), Some(v));
        }
    }
}
