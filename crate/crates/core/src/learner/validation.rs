//! k-fold self-assessment.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::identity::Probability;

use super::dataset::AdvisorDataset;
use super::tree::{train_tree, TreeParams};

pub const DEFAULT_K_FOLDS: usize = 10;
pub const DEFAULT_PARTICIPATION_THRESHOLD: f64 = 0.7;

/// Splits `0..n` into `k` disjoint folds: indices are shuffled under `seed`
/// and the record at shuffled position `p` lands in fold `p % k`.
pub fn fold_indices(n: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    assert!(k >= 1, "at least one fold");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![Vec::with_capacity(n / k + 1); k];
    for (pos, idx) in order.into_iter().enumerate() {
        folds[pos % k].push(idx);
    }
    folds
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfAssessment {
    pub accuracy: Probability<f64>,
    /// Folds actually used.
    pub folds: usize,
    /// Folds asked for; larger than `folds` when the dataset was too small.
    pub requested_folds: usize,
    pub participate: bool,
}

impl SelfAssessment {
    pub fn reduced_folds(&self) -> bool {
        self.folds < self.requested_folds
    }
}

/// Mean per-fold accuracy of trees trained on the remaining folds.
///
/// With fewer records than folds, falls back to leave-one-out. A single fold
/// has nothing to hold out and scores the tree on its own training data.
pub fn cross_validate(
    data: &AdvisorDataset,
    k: usize,
    params: TreeParams,
    seed: u64,
) -> Result<(f64, usize)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let k = k.clamp(1, data.len());
    if k == 1 {
        let tree = train_tree(data, params)?;
        return Ok((tree.accuracy_on(data)?, 1));
    }
    let folds = fold_indices(data.len(), k, seed);
    let mut total = 0.0;
    for (held_out, test_idx) in folds.iter().enumerate() {
        let train_idx: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|(f, _)| *f != held_out)
            .flat_map(|(_, idx)| idx.iter().copied())
            .collect();
        let tree = train_tree(&data.subset(&train_idx), params)?;
        total += tree.accuracy_on(&data.subset(test_idx))?;
    }
    Ok((total / k as f64, k))
}

pub fn self_assess(
    data: &AdvisorDataset,
    k: usize,
    threshold: Probability<f64>,
    resource_available: bool,
    params: TreeParams,
    seed: u64,
) -> Result<SelfAssessment> {
    let requested = k.max(1);
    let (accuracy, folds) = cross_validate(data, requested, params, seed)?;
    let accuracy = Probability::new(accuracy.clamp(0.0, 1.0))?;
    Ok(SelfAssessment {
        accuracy,
        folds,
        requested_folds: requested,
        participate: resource_available && accuracy >= threshold,
    })
}
