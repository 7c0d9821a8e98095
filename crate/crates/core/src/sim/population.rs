//! Advisor datasets and evaluation items, synthesized or ingested.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::identity::Verdict;
use crate::learner::{AdvisorDataset, InteractionRecord};

use super::metrics::ground_truth_trust;

/// A subject whose trust the recommender estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub name: String,
    pub features: Vec<f64>,
    pub ratings: Vec<u8>,
    pub ground_truth: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub schema: Vec<String>,
    /// One dataset per base advisor, with a display name.
    pub advisors: Vec<(String, AdvisorDataset)>,
    pub items: Vec<Item>,
}

/// Feature names of the synthetic generator. The first two carry the
/// signal; the last two are uniform noise.
pub const SYNTHETIC_SCHEMA: [&str; 4] = ["reliability", "responsiveness", "volume", "tenure"];

const INFORMATIVE: usize = 2;
// Informative features of trustworthy agents fall in [0.55, 1], the rest in [0, 0.45].
const MARGIN_LOW: f64 = 0.45;
const MARGIN_HIGH: f64 = 0.55;
// Satisfaction probability of trustworthy subjects is drawn from [0.8, 1], else [0, 0.2].
const SATISFACTION_SPREAD: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticParams {
    pub n_advisors: usize,
    pub n_items: usize,
    /// Probability that a training label is flipped.
    pub noise: f64,
    pub records_per_advisor: usize,
    pub ratings_per_item: usize,
    pub satisfied_rating: u8,
}

fn features_for(class: Verdict, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..SYNTHETIC_SCHEMA.len())
        .map(|j| {
            if j >= INFORMATIVE {
                rng.gen::<f64>()
            } else {
                match class {
                    Verdict::Trustworthy => rng.gen_range(MARGIN_HIGH..=1.0),
                    Verdict::Untrustworthy => rng.gen_range(0.0..=MARGIN_LOW),
                }
            }
        })
        .collect()
}

fn class_draw(rng: &mut ChaCha8Rng) -> Verdict {
    if rng.gen_bool(0.5) {
        Verdict::Trustworthy
    } else {
        Verdict::Untrustworthy
    }
}

/// Builds a seeded population.
///
/// Each agent has a latent class. Its informative features are separated by
/// a margin according to that class, so with `noise = 0` every advisor's
/// data is separable. Training labels are flipped with probability `noise`.
/// Items additionally receive `ratings_per_item` ratings whose satisfaction
/// rate follows their class; their ground truth is derived from those.
pub fn synthesize_population(seed: u64, params: &SyntheticParams) -> Population {
    let mut item_rng = ChaCha8Rng::seed_from_u64(seed);
    item_rng.set_stream(1);
    let satisfied = params.satisfied_rating;
    let items = (0..params.n_items)
        .map(|i| {
            let class = class_draw(&mut item_rng);
            let features = features_for(class, &mut item_rng);
            let p = match class {
                Verdict::Trustworthy => item_rng.gen_range(1.0 - SATISFACTION_SPREAD..=1.0),
                Verdict::Untrustworthy => item_rng.gen_range(0.0..=SATISFACTION_SPREAD),
            };
            let ratings: Vec<u8> = (0..params.ratings_per_item)
                .map(|_| {
                    if item_rng.gen_bool(p) {
                        item_rng.gen_range(satisfied..=5)
                    } else {
                        item_rng.gen_range(1..satisfied.max(2))
                    }
                })
                .collect();
            let ground_truth = ground_truth_trust(&ratings, satisfied).unwrap_or(0.5);
            Item {
                name: format!("item{i}"),
                features,
                ratings,
                ground_truth,
            }
        })
        .collect();

    let schema: Vec<String> = SYNTHETIC_SCHEMA.iter().map(|s| s.to_string()).collect();
    let advisors = (0..params.n_advisors)
        .map(|a| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(100 + a as u64);
            let records = (0..params.records_per_advisor)
                .map(|_| {
                    let class = class_draw(&mut rng);
                    let features = features_for(class, &mut rng);
                    let label = if rng.gen_bool(params.noise) {
                        class.invert()
                    } else {
                        class
                    };
                    InteractionRecord::new(features, label)
                })
                .collect();
            let data = AdvisorDataset::from_records(schema.clone(), records)
                .expect("generator respects schema");
            (format!("advisor{a}"), data)
        })
        .collect();

    Population {
        schema,
        advisors,
        items,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::Probability;
    use crate::learner::{self_assess, TreeParams};

    fn params(noise: f64) -> SyntheticParams {
        SyntheticParams {
            n_advisors: 12,
            n_items: 10,
            noise,
            records_per_advisor: 40,
            ratings_per_item: 20,
            satisfied_rating: 4,
        }
    }

    #[test]
    fn same_seed_same_population() {
        assert_eq!(
            synthesize_population(3, &params(0.1)),
            synthesize_population(3, &params(0.1))
        );
        assert_ne!(
            synthesize_population(3, &params(0.1)),
            synthesize_population(4, &params(0.1))
        );
    }

    #[test]
    fn noiseless_data_is_learned_perfectly() {
        let pop = synthesize_population(8, &params(0.0));
        let threshold = Probability::new(0.7).unwrap();
        for (i, (_, data)) in pop.advisors.iter().enumerate() {
            let a =
                self_assess(data, 10, threshold, true, TreeParams::default(), i as u64).unwrap();
            assert_eq!(a.accuracy.value(), 1.0, "advisor {i}");
        }
    }

    #[test]
    fn heavy_noise_causes_mass_abstention() {
        let pop = synthesize_population(8, &params(0.4));
        let threshold = Probability::new(0.7).unwrap();
        let abstaining = pop
            .advisors
            .iter()
            .enumerate()
            .filter(|(i, (_, data))| {
                !self_assess(data, 10, threshold, true, TreeParams::default(), *i as u64)
                    .unwrap()
                    .participate
            })
            .count();
        assert!(
            abstaining * 2 > pop.advisors.len(),
            "{abstaining} abstained"
        );
    }

    #[test]
    fn ratings_and_ground_truth_are_consistent() {
        let pop = synthesize_population(2, &params(0.1));
        for item in &pop.items {
            assert_eq!(item.ratings.len(), 20);
            assert!(item.ratings.iter().all(|r| (1..=5).contains(r)));
            assert_eq!(
                Some(item.ground_truth),
                ground_truth_trust(&item.ratings, 4)
            );
        }
    }
}
