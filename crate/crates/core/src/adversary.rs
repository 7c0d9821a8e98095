//! Attacker behavior profiles and population-level attack orchestration.
//!
//! Every dishonest verdict is the inversion of what the advisor's own honest
//! pipeline predicts. Dishonest identities never withdraw: the
//! self-assessment only gates honest behavior.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::Advisor;
use crate::error::{Error, Result};
use crate::identity::{AgentId, IdGenerator, Verdict};
use crate::learner::AdvisorState;

pub const DEFAULT_SYBIL_COUNT: u32 = 4;
pub const DEFAULT_SWITCH_ITERATION: u32 = 5;
pub const DEFAULT_RESET_PERIOD: u32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BehaviorProfile {
    #[default]
    Honest,
    Sybil {
        fake_identity_count: u32,
    },
    Camouflage {
        switch_iteration: u32,
    },
    Whitewashing {
        reset_period: u32,
    },
}

impl BehaviorProfile {
    pub fn validate(&self) -> Result<()> {
        let (key, value) = match *self {
            BehaviorProfile::Honest => return Ok(()),
            BehaviorProfile::Sybil {
                fake_identity_count,
            } => ("sybil-count", fake_identity_count),
            BehaviorProfile::Camouflage { switch_iteration } => {
                ("switch-iteration", switch_iteration)
            }
            BehaviorProfile::Whitewashing { reset_period } => ("reset-period", reset_period),
        };
        if value == 0 {
            return Err(Error::InvalidConfig {
                key,
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn is_dishonest(&self) -> bool {
        !matches!(self, BehaviorProfile::Honest)
    }
}

/// Which attack a scenario simulates.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    #[default]
    None,
    Sybil,
    Camouflage,
    Whitewash,
}

impl AttackKind {
    pub const ALL: [AttackKind; 4] = [
        AttackKind::None,
        AttackKind::Sybil,
        AttackKind::Camouflage,
        AttackKind::Whitewash,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::None => "none",
            AttackKind::Sybil => "sybil",
            AttackKind::Camouflage => "camouflage",
            AttackKind::Whitewash => "whitewash",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(AttackKind::None),
            "sybil" => Ok(AttackKind::Sybil),
            "camouflage" => Ok(AttackKind::Camouflage),
            "whitewash" | "whitewashing" => Ok(AttackKind::Whitewash),
            other => Err(format!(
                "unknown attack `{other}` (expected none, sybil, camouflage or whitewash)"
            )),
        }
    }
}

/// Number of principals turned into attackers.
pub fn attacker_count(n_advisors: usize, fraction: f64) -> usize {
    ((fraction * n_advisors as f64).round() as usize).min(n_advisors)
}

/// Picks which of `n_advisors` principals attack, sorted ascending.
pub fn select_attackers(n_advisors: usize, fraction: f64, seed: u64) -> Vec<usize> {
    let count = attacker_count(n_advisors, fraction);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = sample(&mut rng, n_advisors, count).into_vec();
    chosen.sort_unstable();
    chosen
}

/// Creates `count` fake identities controlled by `attacker`.
///
/// They share the attacker's data and policy; being new, they start from the
/// requester's default credibility.
pub fn sybil_expand(
    attacker: &AdvisorState,
    count: u32,
    ids: &mut IdGenerator,
) -> Result<Vec<AdvisorState>> {
    let principal = attacker.id.lineage().unwrap_or(attacker.id);
    let profile = BehaviorProfile::Sybil {
        fake_identity_count: count,
    };
    profile.validate()?;
    (0..count)
        .map(|_| {
            Ok(AdvisorState {
                id: ids.fresh(Some(principal))?,
                profile,
                ..attacker.clone()
            })
        })
        .collect()
}

/// Honest before `switch_iteration`, inverted from then on.
pub fn camouflage_verdict(
    honest: Verdict,
    current_iteration: u32,
    switch_iteration: u32,
) -> Verdict {
    if current_iteration < switch_iteration {
        honest
    } else {
        honest.invert()
    }
}

/// Abandons the current identity every `reset_period` iterations.
///
/// The replacement id keeps the same principal as lineage. It has no ledger
/// history, so the requester sees a newcomer.
pub fn whitewash_maybe_reset(
    attacker: AdvisorState,
    current_iteration: u32,
    reset_period: u32,
    ids: &mut IdGenerator,
) -> Result<AdvisorState> {
    if reset_period == 0 {
        return Err(Error::InvalidConfig {
            key: "reset-period",
            reason: "must be at least 1".into(),
        });
    }
    if !current_iteration.is_multiple_of(reset_period) {
        return Ok(attacker);
    }
    let principal = attacker.id.lineage().unwrap_or(attacker.id);
    Ok(AdvisorState {
        id: ids.fresh(Some(principal))?,
        ..attacker
    })
}

/// An advisor acting out its profile at a given iteration.
#[derive(Clone, Copy, Debug)]
pub struct Acting<'a> {
    pub state: &'a AdvisorState,
    pub iteration: u32,
}

impl<'a> Acting<'a> {
    pub fn new(state: &'a AdvisorState, iteration: u32) -> Self {
        Self { state, iteration }
    }

    /// Emitted verdict, or `None` when the advisor abstains.
    pub fn verdict(&self, subject_features: &[f64]) -> Result<Option<Verdict>> {
        let state = self.state;
        match state.profile {
            BehaviorProfile::Honest => state.honest_verdict(subject_features),
            BehaviorProfile::Camouflage { switch_iteration }
                if self.iteration < switch_iteration =>
            {
                state.honest_verdict(subject_features)
            }
            BehaviorProfile::Camouflage { switch_iteration } => {
                let honest = state.predict(subject_features)?;
                Ok(Some(camouflage_verdict(
                    honest,
                    self.iteration,
                    switch_iteration,
                )))
            }
            BehaviorProfile::Sybil { .. } | BehaviorProfile::Whitewashing { .. } => {
                Ok(Some(state.predict(subject_features)?.invert()))
            }
        }
    }
}

impl Advisor for Acting<'_> {
    fn id(&self) -> AgentId {
        self.state.id
    }

    fn respond(&self, _subject: AgentId, subject_features: &[f64]) -> Result<Option<Verdict>> {
        self.verdict(subject_features)
    }
}
