use std::sync::Arc;

use crate::adversary::BehaviorProfile;
use crate::error::Result;
use crate::identity::{AgentId, Probability, Recommendation, Verdict};
use crate::scalar::Scalar;

use super::dataset::AdvisorDataset;
use super::tree::{train_tree, TrainedTree, TreeParams};
use super::validation::{
    self_assess, SelfAssessment, DEFAULT_K_FOLDS, DEFAULT_PARTICIPATION_THRESHOLD,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearnerConfig {
    pub tree: TreeParams,
    pub k_folds: usize,
    pub participation_threshold: Probability<f64>,
    /// Whether the advisor is willing to spend resources answering at all.
    pub resource_available: bool,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            tree: TreeParams::default(),
            k_folds: DEFAULT_K_FOLDS,
            participation_threshold: Probability::new(DEFAULT_PARTICIPATION_THRESHOLD)
                .expect("default threshold in range"),
            resource_available: true,
        }
    }
}

/// An advisor as the simulator sees it.
///
/// The recommender engine never touches this type directly; it only sees
/// the [`Advisor`](crate::engine::Advisor) interface.
#[derive(Clone, Debug)]
pub struct AdvisorState {
    pub id: AgentId,
    pub dataset: Arc<AdvisorDataset>,
    pub tree: Arc<TrainedTree>,
    pub assessment: SelfAssessment,
    pub profile: BehaviorProfile,
}

impl AdvisorState {
    /// Trains the tree on the full dataset and self-assesses with k folds.
    pub fn train(
        id: AgentId,
        dataset: Arc<AdvisorDataset>,
        config: &LearnerConfig,
        seed: u64,
    ) -> Result<Self> {
        let tree = train_tree(&dataset, config.tree)?;
        let assessment = self_assess(
            &dataset,
            config.k_folds,
            config.participation_threshold,
            config.resource_available,
            config.tree,
            seed,
        )?;
        Ok(Self {
            id,
            dataset,
            tree: Arc::new(tree),
            assessment,
            profile: BehaviorProfile::Honest,
        })
    }

    pub fn participates(&self) -> bool {
        self.assessment.participate
    }

    /// What this advisor's own pipeline predicts, regardless of whether it
    /// would answer.
    pub fn predict(&self, subject_features: &[f64]) -> Result<Verdict> {
        self.tree.predict(subject_features)
    }

    /// The honest answer: `None` when the advisor withdraws.
    pub fn honest_verdict(&self, subject_features: &[f64]) -> Result<Option<Verdict>> {
        if !self.participates() {
            return Ok(None);
        }
        self.predict(subject_features).map(Some)
    }
}

/// Honest recommendation for `subject`, or `None` when the advisor abstains.
pub fn derive_recommendation<T: Scalar>(
    advisor: &AdvisorState,
    subject: AgentId,
    subject_features: &[f64],
    credibility: Probability<T>,
) -> Result<Option<Recommendation<T>>> {
    match advisor.honest_verdict(subject_features)? {
        None => Ok(None),
        Some(verdict) => Recommendation::new(advisor.id, subject, verdict, credibility).map(Some),
    }
}
