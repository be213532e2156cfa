//! Depth-bounded binary decision trees grown greedily on information gain.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Label, LabeledExample, N_FEATURES};

/// Impurity measure used to score splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Entropy,
    Gini,
}

impl Criterion {
    pub fn impurity(self, counts: ClassCounts) -> f64 {
        match self {
            Criterion::Entropy => entropy(counts),
            Criterion::Gini => gini_impurity(counts),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Entropy => "entropy",
            Criterion::Gini => "gini",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub bot: usize,
    pub human: usize,
}

impl ClassCounts {
    pub fn new(bot: usize, human: usize) -> Self {
        Self { bot, human }
    }

    pub fn total(self) -> usize {
        self.bot + self.human
    }

    pub fn add(&mut self, label: Label) {
        match label {
            Label::Bot => self.bot += 1,
            Label::Human => self.human += 1,
        }
    }

    fn remove(&mut self, label: Label) {
        match label {
            Label::Bot => self.bot -= 1,
            Label::Human => self.human -= 1,
        }
    }

    pub fn is_pure(self) -> bool {
        self.bot == 0 || self.human == 0
    }

    /// Majority class, Human on a tie.
    pub fn majority(self) -> Label {
        if self.bot > self.human {
            Label::Bot
        } else {
            Label::Human
        }
    }
}

/// Shannon entropy in bits of a two-class distribution.
pub fn entropy(counts: ClassCounts) -> f64 {
    let total = counts.total() as f64;
    [counts.bot, counts.human]
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

pub fn gini_impurity(counts: ClassCounts) -> f64 {
    let total = counts.total() as f64;
    let pb = counts.bot as f64 / total;
    let ph = counts.human as f64 / total;
    1.0 - pb * pb - ph * ph
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeNode {
    /// Samples with `features[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        counts: ClassCounts,
    },
}

impl TreeNode {
    pub fn leaf_for(&self, x: &[f64; N_FEATURES]) -> ClassCounts {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { counts } => return *counts,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn predict(&self, x: &[f64; N_FEATURES]) -> Label {
        self.leaf_for(x).majority()
    }

    /// Length in edges of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    /// Structural checks applied to loaded models.
    pub(crate) fn check(&self, max_depth: usize) -> Result<(), String> {
        fn walk(node: &TreeNode, depth: usize, max_depth: usize) -> Result<(), String> {
            match node {
                TreeNode::Leaf { counts } if counts.total() == 0 => {
                    Err("leaf with no samples".into())
                }
                TreeNode::Leaf { .. } => Ok(()),
                TreeNode::Split { .. } if depth >= max_depth => {
                    Err(format!("tree deeper than max_depth {max_depth}"))
                }
                TreeNode::Split { feature, .. } if *feature >= N_FEATURES => {
                    Err(format!("feature index {feature} out of range"))
                }
                TreeNode::Split {
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    if !threshold.is_finite() {
                        return Err("non-finite threshold".into());
                    }
                    walk(left, depth + 1, max_depth)?;
                    walk(right, depth + 1, max_depth)
                }
            }
        }
        walk(self, 0, max_depth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    /// Number of features drawn at random at every node.
    pub feature_subset_size: usize,
    pub criterion: Criterion,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: 8,
            feature_subset_size: N_FEATURES,
            criterion: Criterion::Entropy,
        }
    }
}

/// Gains at or below this are treated as no improvement.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SplitChoice {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
}

/// Grows a tree on `data`. `rng` only drives per-node feature sampling.
pub fn train_tree<R: Rng + ?Sized>(
    data: &[LabeledExample],
    params: &TreeParams,
    rng: &mut R,
) -> TreeNode {
    let rows: Vec<usize> = (0..data.len()).collect();
    train_tree_on_rows(data, &rows, params, rng)
}

/// Like [`train_tree`], on a multiset of row indices (a bootstrap sample).
pub(crate) fn train_tree_on_rows<R: Rng + ?Sized>(
    data: &[LabeledExample],
    rows: &[usize],
    params: &TreeParams,
    rng: &mut R,
) -> TreeNode {
    assert!(!rows.is_empty(), "cannot grow a tree on no data");
    let points: Vec<([f64; N_FEATURES], Label)> = rows
        .iter()
        .map(|&i| (data[i].features.to_array(), data[i].label))
        .collect();
    let mut indices: Vec<usize> = (0..points.len()).collect();
    grow(&points, &mut indices, 0, params, rng)
}

fn counts_of(points: &[([f64; N_FEATURES], Label)], indices: &[usize]) -> ClassCounts {
    let mut counts = ClassCounts::default();
    for &i in indices {
        counts.add(points[i].1);
    }
    counts
}

fn grow<R: Rng + ?Sized>(
    points: &[([f64; N_FEATURES], Label)],
    indices: &mut [usize],
    depth: usize,
    params: &TreeParams,
    rng: &mut R,
) -> TreeNode {
    let counts = counts_of(points, indices);
    if depth >= params.max_depth || counts.is_pure() {
        return TreeNode::Leaf { counts };
    }

    let features = candidate_features(params.feature_subset_size, rng);
    let Some(split) = best_split(points, indices, &features, params.criterion) else {
        return TreeNode::Leaf { counts };
    };

    // Partition in place: everything <= threshold first.
    let mut boundary = 0;
    for k in 0..indices.len() {
        if points[indices[k]].0[split.feature] <= split.threshold {
            indices.swap(k, boundary);
            boundary += 1;
        }
    }
    let (left, right) = indices.split_at_mut(boundary);
    debug_assert!(!left.is_empty() && !right.is_empty());
    TreeNode::Split {
        feature: split.feature,
        threshold: split.threshold,
        left: Box::new(grow(points, left, depth + 1, params, rng)),
        right: Box::new(grow(points, right, depth + 1, params, rng)),
    }
}

fn candidate_features<R: Rng + ?Sized>(subset_size: usize, rng: &mut R) -> Vec<usize> {
    if subset_size >= N_FEATURES {
        return (0..N_FEATURES).collect();
    }
    let mut chosen = sample(rng, N_FEATURES, subset_size.max(1)).into_vec();
    chosen.sort_unstable();
    chosen
}

/// Best threshold over `features`, scanning midpoints of consecutive distinct values.
pub(crate) fn best_split(
    points: &[([f64; N_FEATURES], Label)],
    indices: &[usize],
    features: &[usize],
    criterion: Criterion,
) -> Option<SplitChoice> {
    let parent = counts_of(points, indices);
    let n = parent.total() as f64;
    let parent_impurity = criterion.impurity(parent);
    let mut best: Option<SplitChoice> = None;

    let mut column: Vec<(f64, Label)> = Vec::with_capacity(indices.len());
    for &feature in features {
        column.clear();
        column.extend(indices.iter().map(|&i| (points[i].0[feature], points[i].1)));
        column.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut left = ClassCounts::default();
        let mut right = parent;
        for k in 0..column.len() - 1 {
            left.add(column[k].1);
            right.remove(column[k].1);
            let (lo, hi) = (column[k].0, column[k + 1].0);
            if lo == hi {
                continue;
            }
            let weighted = (left.total() as f64 / n) * criterion.impurity(left)
                + (right.total() as f64 / n) * criterion.impurity(right);
            let gain = parent_impurity - weighted;
            if gain > MIN_GAIN && best.is_none_or(|b| gain > b.gain) {
                let mut threshold = lo + (hi - lo) / 2.0;
                if threshold >= hi {
                    threshold = lo;
                }
                best = Some(SplitChoice {
                    feature,
                    threshold,
                    gain,
                });
            }
        }
    }
    best
}
