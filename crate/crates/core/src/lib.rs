//! Trust estimation from third-party recommendations that stays robust to
//! dishonest advisors.
//!
//! Advisors first decide for themselves whether they are accurate enough to
//! answer (a decision tree plus k-fold self-assessment). Answers are then
//! weighted by each advisor's credibility, fused with Dempster's rule over
//! {trustworthy, untrustworthy, uncertain}, and the outcome feeds back into
//! the advisors' credibility. Inquiry budgets reward advisors that answer.
//!
//! The belief and credibility arithmetic is generic over [`Scalar`]; the
//! aliases below fix it to `f64`, `f32` or exact rationals.

pub mod adversary;
pub mod credibility;
pub mod dst;
pub mod engine;
mod error;
pub mod identity;
pub mod incentives;
pub mod learner;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use identity::{AgentId, IdGenerator, Verdict};
pub use scalar::Scalar;

use num_rational::Rational64;

pub type Probability = identity::Probability<f64>;
pub type MassFunction = dst::MassFunction<f64>;
pub type BeliefTriple = dst::BeliefTriple<f64>;
pub type Recommendation = identity::Recommendation<f64>;
pub type CredibilityLedger = credibility::CredibilityLedger<f64>;
pub type RoundOutcome = engine::RoundOutcome<f64>;

pub type MassFunction32 = dst::MassFunction<f32>;
pub type BeliefTriple32 = dst::BeliefTriple<f32>;

/// Exact arithmetic, used to check the algebra without tolerances.
pub type ExactProbability = identity::Probability<Rational64>;
pub type ExactMassFunction = dst::MassFunction<Rational64>;
pub type ExactBeliefTriple = dst::BeliefTriple<Rational64>;
pub type ExactCredibilityLedger = credibility::CredibilityLedger<Rational64>;
