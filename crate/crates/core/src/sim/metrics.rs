//! Ground truth and error metrics.

use serde::{Deserialize, Serialize};

/// Fraction of ratings at or above `satisfied`. `None` for an empty list.
pub fn ground_truth_trust(ratings: &[u8], satisfied: u8) -> Option<f64> {
    if ratings.is_empty() {
        return None;
    }
    let happy = ratings.iter().filter(|&&r| r >= satisfied).count();
    Some(happy as f64 / ratings.len() as f64)
}

/// Per-item error divided by the number of consulted advisors.
/// Undefined (`None`) when nobody was consulted.
pub fn mae(actual: f64, estimated: f64, consulted: usize) -> Option<f64> {
    (consulted > 0).then(|| (actual - estimated).abs() / consulted as f64)
}

/// Plain absolute error, reported next to [`mae`] for comparability.
pub fn absolute_error(actual: f64, estimated: f64) -> f64 {
    (actual - estimated).abs()
}

/// Mean and population standard deviation over the defined cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub cells: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of<'a>(cells: impl IntoIterator<Item = &'a Option<f64>>) -> Self {
        let mut values = Vec::new();
        let mut skipped = 0;
        for c in cells {
            match c {
                Some(v) => values.push(*v),
                None => skipped += 1,
            }
        }
        if values.is_empty() {
            return Self {
                mean: f64::NAN,
                std: f64::NAN,
                cells: 0,
                skipped,
            };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Self {
            mean,
            std: var.sqrt(),
            cells: values.len(),
            skipped,
        }
    }
}

pub fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut n = 0usize;
    let mut total = 0.0;
    for v in values {
        n += 1;
        total += v;
    }
    (n > 0).then(|| total / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_truth_examples() {
        assert_eq!(ground_truth_trust(&[5, 5, 4, 1], 4), Some(0.75));
        assert_eq!(ground_truth_trust(&[1, 1], 4), Some(0.0));
        assert_eq!(ground_truth_trust(&[4], 4), Some(1.0));
        assert_eq!(ground_truth_trust(&[], 4), None);
    }

    #[test]
    fn mae_examples() {
        assert!((mae(0.9, 0.7, 5).unwrap() - 0.04).abs() < 1e-12);
        assert_eq!(mae(0.3, 0.3, 17), Some(0.0));
        assert_eq!(mae(1.0, 0.0, 1), Some(1.0));
        assert_eq!(mae(1.0, 0.0, 0), None);
    }

    #[test]
    fn summary_skips_undefined_cells() {
        let s = Summary::of(&[Some(1.0), None, Some(3.0)]);
        assert_eq!((s.mean, s.std, s.cells, s.skipped), (2.0, 1.0, 2, 1));
        let empty = Summary::of(&[None]);
        assert!(empty.mean.is_nan());
        assert_eq!(empty.skipped, 1);
    }
}
