//! The recommender's credibility belief about each advisor.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use crate::dst::BeliefTriple;
use crate::error::{Error, Result};
use crate::identity::{AgentId, Probability, Recommendation, Verdict};
use crate::scalar::Scalar;

pub const DEFAULT_INITIAL_CREDIBILITY: f64 = 0.5;

/// Credibility scores held by one recommender.
#[derive(Clone, Debug, PartialEq)]
pub struct CredibilityLedger<T> {
    scores: BTreeMap<AgentId, Probability<T>>,
    initial: Probability<T>,
}

impl<T: Scalar> Default for CredibilityLedger<T> {
    fn default() -> Self {
        Self::new(Probability::new_unchecked(T::lit(
            DEFAULT_INITIAL_CREDIBILITY,
        )))
    }
}

impl<T: Scalar> CredibilityLedger<T> {
    pub fn new(initial: Probability<T>) -> Self {
        Self {
            scores: BTreeMap::new(),
            initial,
        }
    }

    pub fn initial_score(&self) -> Probability<T> {
        self.initial
    }

    /// Unknown advisors read as the initial score.
    pub fn score(&self, advisor: AgentId) -> Probability<T> {
        self.scores.get(&advisor).copied().unwrap_or(self.initial)
    }

    pub fn contains(&self, advisor: AgentId) -> bool {
        self.scores.contains_key(&advisor)
    }

    pub fn set(&mut self, advisor: AgentId, score: Probability<T>) {
        self.scores.insert(advisor, score);
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AgentId, Probability<T>)> + '_ {
        self.scores.iter().map(|(id, p)| (*id, *p))
    }

    /// Applies the credibility update for one advisor and stores the result.
    pub fn update(
        &mut self,
        advisor: AgentId,
        given: Verdict,
        beliefs: &BeliefTriple<T>,
    ) -> Probability<T> {
        let updated = updated_score(self.score(advisor), given, beliefs);
        self.scores.insert(advisor, updated);
        updated
    }

    /// Updates every advisor that answered one request, exactly once each.
    ///
    /// Rejects the whole batch, leaving the ledger untouched, if an advisor
    /// appears twice.
    pub fn batch_update(
        &mut self,
        recommendations: &[Recommendation<T>],
        beliefs: &BeliefTriple<T>,
    ) -> Result<()> {
        let mut seen = BTreeSet::new();
        for rec in recommendations {
            if !seen.insert(rec.advisor) {
                return Err(Error::DuplicateRecommendation(rec.advisor));
            }
        }
        for rec in recommendations {
            self.update(rec.advisor, rec.verdict, beliefs);
        }
        Ok(())
    }

    /// Writes `agent<TAB>score` rows, sorted by agent id.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "agent\tcredibility")?;
        for (id, score) in &self.scores {
            writeln!(out, "{}\t{}", id, score.value().as_f64())?;
        }
        Ok(())
    }

    /// Reads a table produced by [`write_snapshot`](Self::write_snapshot).
    pub fn read_snapshot<R: BufRead>(input: R, initial: Probability<T>) -> Result<Self> {
        let mut ledger = Self::new(initial);
        for (index, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if index == 0 || line.is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::Parse {
                path: "<credibility snapshot>".into(),
                line: index + 1,
                reason: reason.to_string(),
            };
            let (id, score) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected two columns"))?;
            let id: u64 = id
                .trim()
                .parse()
                .map_err(|_| bad("agent id is not an integer"))?;
            let score: f64 = score
                .trim()
                .parse()
                .map_err(|_| bad("score is not a number"))?;
            let score = T::from_f64(score).ok_or_else(|| bad("score not representable"))?;
            ledger.set(AgentId::from_raw(id), Probability::new(score)?);
        }
        Ok(ledger)
    }
}

/// The credibility update rule.
///
/// With `X = max(θT, θN)` and `Y = min(θT, θN)`: an advisor whose verdict
/// matches the strictly winning side gains `X` (capped at 1); one whose verdict
/// opposes it drops to `|φ - Y|`. A tie triggers neither branch.
pub fn updated_score<T: Scalar>(
    current: Probability<T>,
    given: Verdict,
    beliefs: &BeliefTriple<T>,
) -> Probability<T> {
    let (trust, distrust) = (beliefs.trust(), beliefs.distrust());
    let winner = if trust > distrust {
        Verdict::Trustworthy
    } else if trust < distrust {
        Verdict::Untrustworthy
    } else {
        return current;
    };
    let x = trust.max_of(distrust);
    let y = trust.min_of(distrust);
    let phi = current.value();
    let next = if given == winner {
        (phi + x).min_of(T::one())
    } else {
        (phi - y).abs()
    };
    Probability::new_unchecked(next.max_of(T::zero()).min_of(T::one()))
}
