//! One recommendation round: broadcast, collect, aggregate, decide, then
//! update credibility and inquiry accounting.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::credibility::CredibilityLedger;
use crate::dst::{combine_all, decide, estimated_trust, mass_from_recommendation, BeliefTriple};
use crate::error::{Error, Result};
use crate::identity::{AgentId, Probability, Recommendation, Verdict};
use crate::incentives::InquiryLedger;
use crate::learner::AdvisorState;
use crate::scalar::Scalar;

/// What the engine can ask of an advisor. Nothing else about the advisor is
/// visible here.
pub trait Advisor {
    fn id(&self) -> AgentId;

    /// `None` means the advisor declines to answer.
    fn respond(&self, subject: AgentId, subject_features: &[f64]) -> Result<Option<Verdict>>;
}

impl<A: Advisor + ?Sized> Advisor for &A {
    fn id(&self) -> AgentId {
        (**self).id()
    }

    fn respond(&self, subject: AgentId, subject_features: &[f64]) -> Result<Option<Verdict>> {
        (**self).respond(subject, subject_features)
    }
}

/// Plain honest behavior.
impl Advisor for AdvisorState {
    fn id(&self) -> AgentId {
        self.id
    }

    fn respond(&self, _subject: AgentId, subject_features: &[f64]) -> Result<Option<Verdict>> {
        self.honest_verdict(subject_features)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecommendationRequest {
    pub requester: AgentId,
    pub subject: AgentId,
    pub subject_features: Vec<f64>,
    pub eligible: Vec<AgentId>,
}

impl RecommendationRequest {
    pub fn validate(&self) -> Result<()> {
        if self.eligible.is_empty() {
            return Err(Error::NoEligibleAdvisors {
                subject: self.subject,
            });
        }
        let mut seen = BTreeSet::new();
        for &id in &self.eligible {
            if id == self.subject {
                return Err(Error::InvalidRequest(format!(
                    "subject {id} is listed as eligible"
                )));
            }
            if id == self.requester {
                return Err(Error::InvalidRequest(format!(
                    "requester {id} is listed as eligible"
                )));
            }
            if !seen.insert(id) {
                return Err(Error::InvalidRequest(format!("advisor {id} listed twice")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CredibilityChange<T> {
    pub advisor: AgentId,
    pub before: Probability<T>,
    pub after: Probability<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundOutcome<T> {
    pub beliefs: BeliefTriple<T>,
    pub verdict: Verdict,
    pub estimated_trust: Probability<T>,
    pub responders: Vec<Recommendation<T>>,
    pub abstainers: Vec<AgentId>,
    /// Eligible advisors skipped because the requester's budget toward them ran out.
    pub not_polled: Vec<AgentId>,
    pub credibility_changes: Vec<CredibilityChange<T>>,
}

/// Runs one request end to end.
///
/// Credibilities are read for every responder before any is written, so the
/// aggregation never sees this round's own updates. On error neither ledger
/// is modified.
pub fn run_round<T, A>(
    request: &RecommendationRequest,
    population: &[A],
    credibility: &mut CredibilityLedger<T>,
    inquiries: &mut InquiryLedger,
) -> Result<RoundOutcome<T>>
where
    T: Scalar,
    A: Advisor,
{
    request.validate()?;
    let by_id: HashMap<AgentId, &A> = population.iter().map(|a| (a.id(), a)).collect();

    let mut responders = Vec::new();
    let mut abstainers = Vec::new();
    let mut not_polled = Vec::new();
    for &id in &request.eligible {
        let advisor = by_id.get(&id).ok_or(Error::UnknownAdvisor(id))?;
        if inquiries.remaining(request.requester, id) == 0 {
            not_polled.push(id);
            continue;
        }
        match advisor.respond(request.subject, &request.subject_features)? {
            Some(verdict) => responders.push(Recommendation::new(
                id,
                request.subject,
                verdict,
                credibility.score(id),
            )?),
            None => abstainers.push(id),
        }
    }

    let beliefs = if responders.is_empty() {
        BeliefTriple::vacuous()
    } else {
        let masses: Vec<_> = responders
            .iter()
            .map(|r| mass_from_recommendation(r.verdict, r.credibility_at_issue))
            .collect();
        combine_all(&masses).map_err(|e| Error::RoundFailed {
            subject: request.subject,
            responders: responders.len(),
            source: Box::new(e),
        })?
    };
    let verdict = decide(&beliefs);
    let estimate = estimated_trust(&beliefs);

    for &id in responders.iter().map(|r| &r.advisor).chain(&abstainers) {
        inquiries.consume_inquiry(request.requester, id)?;
    }
    for r in &responders {
        inquiries.record_answer(r.advisor, request.requester);
    }
    credibility.batch_update(&responders, &beliefs)?;
    let credibility_changes = responders
        .iter()
        .map(|r| CredibilityChange {
            advisor: r.advisor,
            before: r.credibility_at_issue,
            after: credibility.score(r.advisor),
        })
        .collect();

    Ok(RoundOutcome {
        beliefs,
        verdict,
        estimated_trust: estimate,
        responders,
        abstainers,
        not_polled,
        credibility_changes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceResponder {
    pub advisor: AgentId,
    pub verdict: Verdict,
    pub credibility_before: f64,
    pub credibility_after: f64,
}

/// One line of the round log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub iteration: Option<u32>,
    pub requester: AgentId,
    pub subject: AgentId,
    pub subject_features: Vec<f64>,
    pub responders: Vec<TraceResponder>,
    pub abstainers: Vec<AgentId>,
    pub not_polled: Vec<AgentId>,
    pub beliefs: [f64; 3],
    pub verdict: Verdict,
    pub estimated_trust: f64,
}

impl<T: Scalar> RoundOutcome<T> {
    pub fn trace(
        &self,
        request: &RecommendationRequest,
        round: u64,
        iteration: Option<u32>,
    ) -> RoundTrace {
        RoundTrace {
            round,
            iteration,
            requester: request.requester,
            subject: request.subject,
            subject_features: request.subject_features.clone(),
            responders: self
                .responders
                .iter()
                .zip(&self.credibility_changes)
                .map(|(r, c)| TraceResponder {
                    advisor: r.advisor,
                    verdict: r.verdict,
                    credibility_before: c.before.value().as_f64(),
                    credibility_after: c.after.value().as_f64(),
                })
                .collect(),
            abstainers: self.abstainers.clone(),
            not_polled: self.not_polled.clone(),
            beliefs: self.beliefs.as_f64(),
            verdict: self.verdict,
            estimated_trust: self.estimated_trust.value().as_f64(),
        }
    }
}

/// Writes round traces as JSON lines.
pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn write(&mut self, trace: &RoundTrace) -> Result<()> {
        serde_json::to_writer(&mut self.out, trace).map_err(std::io::Error::from)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
