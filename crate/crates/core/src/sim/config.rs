use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::adversary::{
    AttackKind, BehaviorProfile, DEFAULT_RESET_PERIOD, DEFAULT_SWITCH_ITERATION,
    DEFAULT_SYBIL_COUNT,
};
use crate::credibility::DEFAULT_INITIAL_CREDIBILITY;
use crate::error::{Error, Result};
use crate::identity::Probability;
use crate::incentives::{DEFAULT_INITIAL_BUDGET, DEFAULT_PERIOD_LENGTH};
use crate::learner::{
    LearnerConfig, TreeParams, DEFAULT_K_FOLDS, DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF,
    DEFAULT_PARTICIPATION_THRESHOLD,
};

pub const DEFAULT_ATTACKER_FRACTION: f64 = 0.3;
pub const DEFAULT_NOISE: f64 = 0.1;
pub const DEFAULT_RECORDS_PER_ADVISOR: usize = 40;
pub const DEFAULT_RATINGS_PER_ITEM: usize = 20;
pub const DEFAULT_SATISFIED_RATING: u8 = 4;

/// Everything a scenario run depends on. Keys serialize in kebab-case and
/// match the command-line flag names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub attack: AttackKind,
    #[serde(rename = "advisors")]
    pub n_advisors: usize,
    pub attacker_fraction: f64,
    pub sybil_count: u32,
    pub switch_iteration: u32,
    pub reset_period: u32,
    #[serde(rename = "items")]
    pub n_items: usize,
    #[serde(rename = "iterations")]
    pub n_iterations: u32,
    pub participation_threshold: f64,
    pub k_folds: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub initial_credibility: f64,
    pub initial_budget: u64,
    /// Rounds between inquiry-budget replenishments.
    pub budget_period: u64,
    /// Label-flip probability of the synthetic generator.
    pub noise: f64,
    pub records_per_advisor: usize,
    pub ratings_per_item: usize,
    /// Ratings at or above this count as satisfied when deriving ground truth.
    pub satisfied_rating: u8,
    /// Epinions-format ratings file; the synthetic generator is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratings: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trust: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn new(seed: u64, attack: AttackKind) -> Self {
        Self {
            seed,
            attack,
            n_advisors: 20,
            attacker_fraction: DEFAULT_ATTACKER_FRACTION,
            sybil_count: DEFAULT_SYBIL_COUNT,
            switch_iteration: DEFAULT_SWITCH_ITERATION,
            reset_period: DEFAULT_RESET_PERIOD,
            n_items: 10,
            n_iterations: 10,
            participation_threshold: DEFAULT_PARTICIPATION_THRESHOLD,
            k_folds: DEFAULT_K_FOLDS,
            max_depth: DEFAULT_MAX_DEPTH,
            min_leaf: DEFAULT_MIN_LEAF,
            initial_credibility: DEFAULT_INITIAL_CREDIBILITY,
            initial_budget: DEFAULT_INITIAL_BUDGET,
            budget_period: DEFAULT_PERIOD_LENGTH,
            noise: DEFAULT_NOISE,
            records_per_advisor: DEFAULT_RECORDS_PER_ADVISOR,
            ratings_per_item: DEFAULT_RATINGS_PER_ITEM,
            satisfied_rating: DEFAULT_SATISFIED_RATING,
            ratings: None,
            trust: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn bad(key: &'static str, reason: impl Into<String>) -> Error {
            Error::InvalidConfig {
                key,
                reason: reason.into(),
            }
        }
        let unit = |key: &'static str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(bad(key, format!("{v} is outside [0, 1]")))
            }
        };
        unit("attacker-fraction", self.attacker_fraction)?;
        unit("participation-threshold", self.participation_threshold)?;
        unit("initial-credibility", self.initial_credibility)?;
        let positive = [
            ("advisors", self.n_advisors as u64),
            ("items", self.n_items as u64),
            ("iterations", self.n_iterations as u64),
            ("k-folds", self.k_folds as u64),
            ("max-depth", self.max_depth as u64),
            ("min-leaf", self.min_leaf as u64),
            ("budget-period", self.budget_period),
            ("records-per-advisor", self.records_per_advisor as u64),
            ("ratings-per-item", self.ratings_per_item as u64),
        ];
        for (key, v) in positive {
            if v == 0 {
                return Err(bad(key, "must be at least 1"));
            }
        }
        if !(0.0..0.5).contains(&self.noise) {
            return Err(bad("noise", format!("{} is outside [0, 0.5)", self.noise)));
        }
        if !(1..=5).contains(&self.satisfied_rating) {
            return Err(bad("satisfied-rating", "must be between 1 and 5"));
        }
        if self.trust.is_some() && self.ratings.is_none() {
            return Err(bad("trust", "a trust file needs a ratings file"));
        }
        self.attacker_profile().validate()
    }

    /// Profile given to each attacking principal.
    pub fn attacker_profile(&self) -> BehaviorProfile {
        match self.attack {
            AttackKind::None => BehaviorProfile::Honest,
            AttackKind::Sybil => BehaviorProfile::Sybil {
                fake_identity_count: self.sybil_count,
            },
            AttackKind::Camouflage => BehaviorProfile::Camouflage {
                switch_iteration: self.switch_iteration,
            },
            AttackKind::Whitewash => BehaviorProfile::Whitewashing {
                reset_period: self.reset_period,
            },
        }
    }

    pub fn learner(&self) -> LearnerConfig {
        LearnerConfig {
            tree: TreeParams {
                max_depth: self.max_depth,
                min_leaf: self.min_leaf,
            },
            k_folds: self.k_folds,
            participation_threshold: Probability::new(self.participation_threshold)
                .expect("validated threshold"),
            resource_available: true,
        }
    }
}
