//! Multi-iteration attack scenarios.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::adversary::{
    select_attackers, sybil_expand, whitewash_maybe_reset, Acting, AttackKind, BehaviorProfile,
};
use crate::credibility::CredibilityLedger;
use crate::engine::{run_round, RecommendationRequest, RoundTrace};
use crate::error::Result;
use crate::identity::{AgentId, IdGenerator, Probability};
use crate::incentives::InquiryLedger;
use crate::learner::AdvisorState;

use super::config::ScenarioConfig;
use super::epinions::ingest_epinions;
use super::metrics::{absolute_error, mae, mean, Summary};
use super::population::{synthesize_population, Population, SyntheticParams};

// Seed streams, kept apart so changing one stage never shifts another.
const ATTACKER_SELECTION_STREAM: u64 = 0x5e1ec7;
const FOLD_STREAM: u64 = 0xf01d;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationStats {
    pub iteration: u32,
    /// Mean of the defined per-item cells of this iteration.
    pub mean_mae: Option<f64>,
    pub mean_conventional_mae: Option<f64>,
    pub mean_attacker_credibility: Option<f64>,
    pub mean_honest_credibility: Option<f64>,
    pub mean_responders: f64,
    pub skipped_cells: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResetEvent {
    pub iteration: u32,
    pub retired: AgentId,
    pub replacement: AgentId,
    /// The replacement's credibility in the requester's ledger on arrival.
    pub credibility_on_entry: f64,
    /// Inquiries the requester may still send it on arrival.
    pub budget_on_entry: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PopulationStats {
    pub principals: usize,
    pub attacking_principals: usize,
    pub identities: usize,
    /// Principals whose self-assessment cleared the threshold, before any attack.
    pub self_assessed_participants: usize,
}

#[derive(Clone, Debug)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub per_iteration: Vec<IterationStats>,
    /// `[iteration][item]`, `None` where nobody answered.
    pub per_item_mae: Vec<Vec<Option<f64>>>,
    pub per_item_conventional_mae: Vec<Vec<Option<f64>>>,
    pub summary: Summary,
    pub conventional_summary: Summary,
    /// Each identity's credibility at the end of every iteration it was alive.
    pub credibility_trajectories: BTreeMap<AgentId, Vec<(u32, f64)>>,
    pub resets: Vec<ResetEvent>,
    pub traces: Vec<RoundTrace>,
    pub credibility: CredibilityLedger<f64>,
    pub inquiries: InquiryLedger,
    pub population: PopulationStats,
}

impl ScenarioResult {
    pub fn attack(&self) -> AttackKind {
        self.config.attack
    }

    /// `(iteration, mean MAE)`, NaN where every cell was skipped.
    pub fn per_iteration_mae(&self) -> Vec<(u32, f64)> {
        self.per_iteration
            .iter()
            .map(|s| (s.iteration, s.mean_mae.unwrap_or(f64::NAN)))
            .collect()
    }
}

pub fn load_population(config: &ScenarioConfig) -> Result<Population> {
    match &config.ratings {
        Some(path) => ingest_epinions(path, config.trust.as_deref())?.population(
            config.n_advisors,
            config.n_items,
            config.satisfied_rating,
        ),
        None => Ok(synthesize_population(
            config.seed,
            &SyntheticParams {
                n_advisors: config.n_advisors,
                n_items: config.n_items,
                noise: config.noise,
                records_per_advisor: config.records_per_advisor,
                ratings_per_item: config.ratings_per_item,
                satisfied_rating: config.satisfied_rating,
            },
        )),
    }
}

/// Runs a scenario end to end. The result depends on nothing but `config`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    config.validate()?;
    let population = load_population(config)?;
    run_population(config, population)
}

/// Runs a scenario on an already built population.
pub fn run_population(config: &ScenarioConfig, population: Population) -> Result<ScenarioResult> {
    config.validate()?;
    let mut ids = IdGenerator::new();
    let requester = ids.fresh(None)?;
    let subjects: Vec<AgentId> = population
        .items
        .iter()
        .map(|_| ids.fresh(None))
        .collect::<Result<_>>()?;

    let learner = config.learner();
    let base_ids: Vec<AgentId> = population
        .advisors
        .iter()
        .map(|_| ids.fresh(None))
        .collect::<Result<_>>()?;
    let mut advisors: Vec<AdvisorState> = population
        .advisors
        .into_par_iter()
        .zip(base_ids)
        .enumerate()
        .map(|(i, ((_, data), id))| {
            AdvisorState::train(
                id,
                Arc::new(data),
                &learner,
                config.seed ^ FOLD_STREAM.wrapping_mul(i as u64 + 1),
            )
        })
        .collect::<Result<_>>()?;
    let self_assessed_participants = advisors.iter().filter(|a| a.participates()).count();

    let principals = advisors.len();
    let attacking: Vec<usize> = match config.attack {
        AttackKind::None => Vec::new(),
        _ => select_attackers(
            principals,
            config.attacker_fraction,
            config.seed ^ ATTACKER_SELECTION_STREAM,
        ),
    };
    let profile = config.attacker_profile();
    for &i in &attacking {
        advisors[i].profile = profile;
    }
    if let BehaviorProfile::Sybil {
        fake_identity_count,
    } = profile
    {
        for &i in &attacking {
            let fakes = sybil_expand(&advisors[i], fake_identity_count, &mut ids)?;
            advisors.extend(fakes);
        }
    }

    let initial = Probability::new(config.initial_credibility)?;
    let mut credibility = CredibilityLedger::new(initial);
    let mut inquiries = InquiryLedger::new(config.initial_budget, config.budget_period);

    let n_iter = config.n_iterations as usize;
    let mut per_iteration = Vec::with_capacity(n_iter);
    let mut per_item_mae = Vec::with_capacity(n_iter);
    let mut per_item_conventional = Vec::with_capacity(n_iter);
    let mut trajectories: BTreeMap<AgentId, Vec<(u32, f64)>> = BTreeMap::new();
    let mut resets = Vec::new();
    let mut traces = Vec::new();
    let mut rounds: u64 = 0;

    for iteration in 1..=config.n_iterations {
        if let BehaviorProfile::Whitewashing { reset_period } = profile {
            for &i in &attacking {
                let retired = advisors[i].id;
                let state =
                    whitewash_maybe_reset(advisors[i].clone(), iteration, reset_period, &mut ids)?;
                if state.id != retired {
                    resets.push(ResetEvent {
                        iteration,
                        retired,
                        replacement: state.id,
                        credibility_on_entry: credibility.score(state.id).value(),
                        budget_on_entry: inquiries.remaining(requester, state.id),
                    });
                }
                advisors[i] = state;
            }
        }

        let acting: Vec<Acting<'_>> = advisors.iter().map(|a| Acting::new(a, iteration)).collect();
        let eligible: Vec<AgentId> = advisors.iter().map(|a| a.id).collect();
        let mut cells = Vec::with_capacity(population.items.len());
        let mut conventional = Vec::with_capacity(population.items.len());
        let mut responders_total = 0usize;
        for (item, &subject) in population.items.iter().zip(&subjects) {
            let request = RecommendationRequest {
                requester,
                subject,
                subject_features: item.features.clone(),
                eligible: eligible.clone(),
            };
            let outcome = run_round(&request, &acting, &mut credibility, &mut inquiries)?;
            rounds += 1;
            let consulted = outcome.responders.len();
            responders_total += consulted;
            let estimate = outcome.estimated_trust.value();
            cells.push(mae(item.ground_truth, estimate, consulted));
            conventional.push((consulted > 0).then(|| absolute_error(item.ground_truth, estimate)));
            traces.push(outcome.trace(&request, rounds, Some(iteration)));
            if rounds.is_multiple_of(inquiries.period_length()) {
                inquiries.replenish_from_ledger(&credibility);
            }
        }

        let mut attacker_scores = Vec::new();
        let mut honest_scores = Vec::new();
        for a in &advisors {
            let score = credibility.score(a.id).value();
            trajectories
                .entry(a.id)
                .or_default()
                .push((iteration, score));
            if a.profile.is_dishonest() {
                attacker_scores.push(score);
            } else {
                honest_scores.push(score);
            }
        }
        let stats = IterationStats {
            iteration,
            mean_mae: mean(cells.iter().flatten().copied()),
            mean_conventional_mae: mean(conventional.iter().flatten().copied()),
            mean_attacker_credibility: mean(attacker_scores),
            mean_honest_credibility: mean(honest_scores),
            mean_responders: responders_total as f64 / population.items.len() as f64,
            skipped_cells: cells.iter().filter(|c| c.is_none()).count(),
        };
        per_iteration.push(stats);
        per_item_mae.push(cells);
        per_item_conventional.push(conventional);
    }

    let summary = Summary::of(per_item_mae.iter().flatten());
    let conventional_summary = Summary::of(per_item_conventional.iter().flatten());
    Ok(ScenarioResult {
        config: config.clone(),
        per_iteration,
        per_item_mae,
        per_item_conventional_mae: per_item_conventional,
        summary,
        conventional_summary,
        credibility_trajectories: trajectories,
        resets,
        traces,
        credibility,
        inquiries,
        population: PopulationStats {
            principals,
            attacking_principals: attacking.len(),
            identities: advisors.len(),
            self_assessed_participants,
        },
    })
}
