//! Each advisor's content-based pipeline: interaction history, a decision
//! tree trained on it, and a cross-validated self-assessment that decides
//! whether the advisor answers requests at all.

mod advisor;
mod dataset;
mod tree;
mod validation;

pub use advisor::{derive_recommendation, AdvisorState, LearnerConfig};
pub use dataset::{AdvisorDataset, InteractionRecord};
pub use tree::{
    train_tree, ClassCounts, Node, TrainedTree, TreeParams, DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF,
};
pub use validation::{
    cross_validate, fold_indices, self_assess, SelfAssessment, DEFAULT_K_FOLDS,
    DEFAULT_PARTICIPATION_THRESHOLD,
};
