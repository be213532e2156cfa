//! Bagged ensemble of entropy trees with per-node feature sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{train_tree_on_rows, Criterion, TreeNode, TreeParams};
use super::{
    check_both_classes, Classifier, ClassifierError, Label, LabeledExample, Prediction, Verdict,
    N_FEATURES,
};
use crate::features::{FeatureConfig, FeatureOutcome, FeatureVector, FEATURE_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub criterion: Criterion,
    /// Features drawn per node, `floor(sqrt(4)) = 2` by default.
    pub max_features: usize,
    /// Train each tree on a bootstrap sample of the training set.
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_estimators: 20,
            max_depth: 8,
            criterion: Criterion::Entropy,
            max_features: (N_FEATURES as f64).sqrt() as usize,
            bootstrap: true,
        }
    }
}

impl ForestParams {
    pub fn tree_params(&self) -> TreeParams {
        TreeParams {
            max_depth: self.max_depth,
            feature_subset_size: self.max_features,
            criterion: self.criterion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub params: ForestParams,
    pub seed: u64,
    pub feature_names: Vec<String>,
    /// Feature definition the trees were trained with; inference must reuse it.
    pub feature_config: FeatureConfig,
    pub trees: Vec<TreeNode>,
}

/// Trains `params.n_estimators` trees. Each tree gets its own RNG seeded from
/// a master stream, so the result does not depend on thread scheduling.
pub fn train_forest(
    data: &[LabeledExample],
    params: &ForestParams,
    seed: u64,
    feature_config: FeatureConfig,
) -> Result<ForestModel, ClassifierError> {
    check_both_classes(data)?;
    if params.n_estimators == 0 {
        return Err(ClassifierError::InvalidHyperparameter(
            "n_estimators must be positive".into(),
        ));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let tree_seeds: Vec<u64> = (0..params.n_estimators).map(|_| master.gen()).collect();
    let tree_params = params.tree_params();

    let trees = tree_seeds
        .into_par_iter()
        .map(|tree_seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
            let rows: Vec<usize> = if params.bootstrap {
                (0..data.len())
                    .map(|_| rng.gen_range(0..data.len()))
                    .collect()
            } else {
                (0..data.len()).collect()
            };
            train_tree_on_rows(data, &rows, &tree_params, &mut rng)
        })
        .collect();

    Ok(ForestModel {
        params: *params,
        seed,
        feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        feature_config,
        trees,
    })
}

impl ForestModel {
    /// Number of trees voting (Bot, Human).
    pub fn votes(&self, features: &FeatureVector) -> (usize, usize) {
        let x = features.to_array();
        self.trees
            .iter()
            .fold((0, 0), |(bot, human), tree| match tree.predict(&x) {
                Label::Bot => (bot + 1, human),
                Label::Human => (bot, human + 1),
            })
    }

    /// Majority vote; a tie goes to Human.
    pub fn predict_vector(&self, features: &FeatureVector) -> Prediction {
        let (bot, human) = self.votes(features);
        let total = (bot + human).max(1) as f64;
        if bot > human {
            Prediction {
                verdict: Verdict::Bot,
                confidence: bot as f64 / total,
            }
        } else {
            Prediction {
                verdict: Verdict::Human,
                confidence: human as f64 / total,
            }
        }
    }

    pub fn predict(&self, outcome: &FeatureOutcome) -> Prediction {
        match outcome {
            FeatureOutcome::Eligible(v) => self.predict_vector(v),
            FeatureOutcome::Insufficient { .. } => Prediction::unknown(),
        }
    }

    pub fn max_tree_depth(&self) -> usize {
        self.trees.iter().map(TreeNode::depth).max().unwrap_or(0)
    }

    pub fn describe(&self) -> String {
        format!(
            "random_forest(criterion={}, n_estimators={}, max_depth={}, max_features={}, seed={})",
            self.params.criterion.as_str(),
            self.params.n_estimators,
            self.params.max_depth,
            self.params.max_features,
            self.seed
        )
    }
}

impl Classifier for ForestModel {
    fn predict_label(&self, features: &FeatureVector) -> Label {
        match self.predict_vector(features).verdict {
            Verdict::Bot => Label::Bot,
            _ => Label::Human,
        }
    }
}
