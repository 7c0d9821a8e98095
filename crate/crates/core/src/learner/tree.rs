//! Axis-aligned binary decision tree grown by information gain.

use crate::error::{Error, Result};
use crate::identity::Verdict;

use super::dataset::AdvisorDataset;

pub const DEFAULT_MAX_DEPTH: usize = 8;
pub const DEFAULT_MIN_LEAF: usize = 2;

// Gains closer than this are equal; the earlier candidate wins.
const GAIN_TIE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: usize,
    /// Minimum number of training records on each side of a split.
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: DEFAULT_MAX_DEPTH,
            min_leaf: DEFAULT_MIN_LEAF,
        }
    }
}

impl TreeParams {
    /// Grow until every leaf is pure or no split separates its records.
    pub fn unbounded() -> Self {
        Self {
            max_depth: usize::MAX,
            min_leaf: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub trustworthy: usize,
    pub untrustworthy: usize,
}

impl ClassCounts {
    fn add(&mut self, label: Verdict) {
        match label {
            Verdict::Trustworthy => self.trustworthy += 1,
            Verdict::Untrustworthy => self.untrustworthy += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.trustworthy + self.untrustworthy
    }

    /// Ties go to Untrustworthy.
    pub fn majority(&self) -> Verdict {
        if self.trustworthy > self.untrustworthy {
            Verdict::Trustworthy
        } else {
            Verdict::Untrustworthy
        }
    }

    pub fn is_pure(&self) -> bool {
        self.trustworthy == 0 || self.untrustworthy == 0
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        let n = self.total() as f64;
        if n == 0.0 {
            return 0.0;
        }
        [self.trustworthy, self.untrustworthy]
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Leaf {
        verdict: Verdict,
        counts: ClassCounts,
    },
    Split {
        feature: usize,
        threshold: f64,
        /// Records with `value <= threshold`.
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    fn leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.leaves() + right.leaves(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainedTree {
    root: Node,
    params: TreeParams,
    n_features: usize,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl TrainedTree {
    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn leaves(&self) -> usize {
        self.root.leaves()
    }

    pub fn predict(&self, features: &[f64]) -> Result<Verdict> {
        if features.len() != self.n_features {
            return Err(Error::SchemaMismatch {
                expected: self.n_features,
                actual: features.len(),
            });
        }
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { verdict, .. } => return Ok(*verdict),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if features[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn accuracy_on(&self, data: &AdvisorDataset) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut correct = 0usize;
        for r in data.records() {
            if self.predict(&r.features)? == r.label {
                correct += 1;
            }
        }
        Ok(correct as f64 / data.len() as f64)
    }
}

/// Greedy top-down induction.
///
/// Candidate thresholds are midpoints between consecutive distinct values of
/// each feature. An impure node is split on the candidate with the highest
/// information gain, even when that gain is zero, as long as both sides keep
/// at least `min_leaf` records; equal gains resolve to the lowest feature
/// index, then the lowest threshold.
pub fn train_tree(data: &AdvisorDataset, params: TreeParams) -> Result<TrainedTree> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let params = TreeParams {
        max_depth: params.max_depth,
        min_leaf: params.min_leaf.max(1),
    };
    let indices: Vec<usize> = (0..data.len()).collect();
    let root = grow(data, indices, 0, &params);
    Ok(TrainedTree {
        root,
        params,
        n_features: data.n_features(),
    })
}

fn counts_of(data: &AdvisorDataset, indices: &[usize]) -> ClassCounts {
    let mut counts = ClassCounts::default();
    for &i in indices {
        counts.add(data.records()[i].label);
    }
    counts
}

fn grow(data: &AdvisorDataset, indices: Vec<usize>, depth: usize, params: &TreeParams) -> Node {
    let counts = counts_of(data, &indices);
    let leaf = Node::Leaf {
        verdict: counts.majority(),
        counts,
    };
    if counts.is_pure() || depth >= params.max_depth {
        return leaf;
    }
    let Some(best) = best_split(data, &indices, counts, params.min_leaf) else {
        return leaf;
    };
    let (left, right): (Vec<usize>, Vec<usize>) = indices
        .into_iter()
        .partition(|&i| data.records()[i].features[best.feature] <= best.threshold);
    Node::Split {
        feature: best.feature,
        threshold: best.threshold,
        left: Box::new(grow(data, left, depth + 1, params)),
        right: Box::new(grow(data, right, depth + 1, params)),
    }
}

fn best_split(
    data: &AdvisorDataset,
    indices: &[usize],
    parent: ClassCounts,
    min_leaf: usize,
) -> Option<Candidate> {
    let n = indices.len();
    if n < 2 * min_leaf {
        return None;
    }
    let parent_entropy = parent.entropy();
    let records = data.records();
    let mut best: Option<Candidate> = None;
    let mut sorted = indices.to_vec();
    for feature in 0..data.n_features() {
        sorted.sort_by(|&a, &b| {
            records[a].features[feature].total_cmp(&records[b].features[feature])
        });
        let mut left = ClassCounts::default();
        for pos in 0..n - 1 {
            left.add(records[sorted[pos]].label);
            let here = records[sorted[pos]].features[feature];
            let next = records[sorted[pos + 1]].features[feature];
            if here == next {
                continue;
            }
            let left_n = pos + 1;
            let right_n = n - left_n;
            if left_n < min_leaf || right_n < min_leaf {
                continue;
            }
            let right = ClassCounts {
                trustworthy: parent.trustworthy - left.trustworthy,
                untrustworthy: parent.untrustworthy - left.untrustworthy,
            };
            let weighted =
                (left_n as f64 * left.entropy() + right_n as f64 * right.entropy()) / n as f64;
            let gain = parent_entropy - weighted;
            let threshold = here + (next - here) / 2.0;
            if best.as_ref().is_none_or(|b| gain > b.gain + GAIN_TIE) {
                best = Some(Candidate {
                    feature,
                    threshold,
                    gain,
                });
            }
        }
    }
    best
}
