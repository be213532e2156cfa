//! Bot/human classifiers over [`FeatureVector`]s.
//!
//! The random forest is the shipped model. Single trees, k-nearest neighbours,
//! logistic regression, and a linear SVM exist for the model-selection grid.

mod forest;
mod knn;
mod linear;
mod model_file;
mod tree;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureVector;

pub use forest::{train_forest, ForestModel, ForestParams};
pub use knn::{train_knn, KnnModel, KnnWeighting, Standardizer};
pub use linear::{train_linear_svm, train_logistic, LinearModel, LinearParams};
pub use model_file::{default_model, load_model, save_model, DEFAULT_MODEL, FORMAT_VERSION};
pub use tree::{entropy, gini_impurity, train_tree, ClassCounts, Criterion, TreeNode, TreeParams};

pub const N_FEATURES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Bot,
    Human,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Bot => "Bot",
            Label::Human => "Human",
        })
    }
}

/// What the tool reports for a contributor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Bot,
    Human,
    /// Not enough messages to compute features.
    Unknown,
}

impl Verdict {
    pub fn label(self) -> Option<Label> {
        match self {
            Verdict::Bot => Some(Label::Bot),
            Verdict::Human => Some(Label::Human),
            Verdict::Unknown => None,
        }
    }
}

impl From<Label> for Verdict {
    fn from(label: Label) -> Self {
        match label {
            Label::Bot => Verdict::Bot,
            Label::Human => Verdict::Human,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Bot => "Bot",
            Verdict::Human => "Human",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub verdict: Verdict,
    /// Fraction of tree votes for the verdict, 0 for Unknown.
    pub confidence: f64,
}

impl Prediction {
    pub fn unknown() -> Self {
        Self {
            verdict: Verdict::Unknown,
            confidence: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub features: FeatureVector,
    pub label: Label,
}

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("training data must contain both bots and humans")]
    SingleClassData,
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error("unreadable model: {0}")]
    UnreadableModel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_both_classes(data: &[LabeledExample]) -> Result<(), ClassifierError> {
    let bots = data.iter().filter(|e| e.label == Label::Bot).count();
    if bots == 0 || bots == data.len() {
        return Err(ClassifierError::SingleClassData);
    }
    Ok(())
}

/// Anything that labels a feature vector.
pub trait Classifier {
    fn predict_label(&self, features: &FeatureVector) -> Label;
}

/// A single tree on the full training set with every feature eligible at every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel {
    pub params: TreeParams,
    pub root: TreeNode,
}

pub fn train_single_tree(
    data: &[LabeledExample],
    max_depth: usize,
    criterion: Criterion,
) -> Result<DecisionTreeModel, ClassifierError> {
    check_both_classes(data)?;
    let params = TreeParams {
        max_depth,
        feature_subset_size: N_FEATURES,
        criterion,
    };
    // With every feature eligible the RNG is never consulted.
    let root = train_tree(data, &params, &mut ChaCha8Rng::seed_from_u64(0));
    Ok(DecisionTreeModel { params, root })
}

impl Classifier for DecisionTreeModel {
    fn predict_label(&self, features: &FeatureVector) -> Label {
        self.root.predict(&features.to_array())
    }
}

/// Classifier families compared during model selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RandomForest,
    DecisionTree,
    LinearSvm,
    LogisticRegression,
    KNearestNeighbours,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::RandomForest => "random forest",
            Family::DecisionTree => "decision trees",
            Family::LinearSvm => "support vector machine",
            Family::LogisticRegression => "logistic regression",
            Family::KNearestNeighbours => "k-nearest neighbours",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One point of the hyperparameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelSpec {
    RandomForest(ForestParams),
    DecisionTree {
        max_depth: usize,
        criterion: Criterion,
    },
    Knn {
        k: usize,
        weighting: KnnWeighting,
    },
    Logistic {
        l2: f64,
    },
    LinearSvm {
        l2: f64,
    },
}

impl ModelSpec {
    pub fn family(&self) -> Family {
        match self {
            ModelSpec::RandomForest(_) => Family::RandomForest,
            ModelSpec::DecisionTree { .. } => Family::DecisionTree,
            ModelSpec::Knn { .. } => Family::KNearestNeighbours,
            ModelSpec::Logistic { .. } => Family::LogisticRegression,
            ModelSpec::LinearSvm { .. } => Family::LinearSvm,
        }
    }

    /// Canonical text form, also used to break score ties.
    pub fn describe(&self) -> String {
        match self {
            ModelSpec::RandomForest(p) => format!(
                "random_forest(criterion={}, max_depth={:02}, n_estimators={:03})",
                p.criterion.as_str(),
                p.max_depth,
                p.n_estimators
            ),
            ModelSpec::DecisionTree {
                max_depth,
                criterion,
            } => format!(
                "decision_tree(criterion={}, max_depth={max_depth:02})",
                criterion.as_str()
            ),
            ModelSpec::Knn { k, weighting } => {
                let w = match weighting {
                    KnnWeighting::Uniform => "uniform",
                    KnnWeighting::Distance => "distance",
                };
                format!("knn(k={k:02}, weights={w})")
            }
            ModelSpec::Logistic { l2 } => format!("logistic_regression(l2={l2:e})"),
            ModelSpec::LinearSvm { l2 } => format!("linear_svm(l2={l2:e})"),
        }
    }

    pub fn fit(&self, data: &[LabeledExample], seed: u64) -> Result<TrainedModel, ClassifierError> {
        Ok(match *self {
            ModelSpec::RandomForest(params) => TrainedModel::Forest(train_forest(
                data,
                &params,
                seed,
                crate::features::FeatureConfig::default(),
            )?),
            ModelSpec::DecisionTree {
                max_depth,
                criterion,
            } => TrainedModel::Tree(train_single_tree(data, max_depth, criterion)?),
            ModelSpec::Knn { k, weighting } => TrainedModel::Knn(train_knn(data, k, weighting)?),
            ModelSpec::Logistic { l2 } => {
                TrainedModel::Linear(train_logistic(data, &LinearParams::with_l2(l2))?)
            }
            ModelSpec::LinearSvm { l2 } => {
                TrainedModel::Linear(train_linear_svm(data, &LinearParams::with_l2(l2))?)
            }
        })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[derive(Debug, Clone)]
pub enum TrainedModel {
    Forest(ForestModel),
    Tree(DecisionTreeModel),
    Knn(KnnModel),
    Linear(LinearModel),
}

impl Classifier for TrainedModel {
    fn predict_label(&self, features: &FeatureVector) -> Label {
        match self {
            TrainedModel::Forest(m) => m.predict_label(features),
            TrainedModel::Tree(m) => m.predict_label(features),
            TrainedModel::Knn(m) => m.predict_label(features),
            TrainedModel::Linear(m) => m.predict_label(features),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptions_sort_numerically_within_a_family() {
        let a = ModelSpec::Knn {
            k: 3,
            weighting: KnnWeighting::Uniform,
        };
        let b = ModelSpec::Knn {
            k: 11,
            weighting: KnnWeighting::Uniform,
        };
        assert!(a.describe() < b.describe());
        assert_eq!(a.family(), Family::KNearestNeighbours);
    }

    #[test]
    fn single_tree_uses_all_features() {
        let data = vec![
            LabeledExample {
                features: FeatureVector::new(10, 0, 1, 0.0),
                label: Label::Bot,
            },
            LabeledExample {
                features: FeatureVector::new(10, 5, 1, 0.0),
                label: Label::Human,
            },
        ];
        let tree = train_single_tree(&data, 8, Criterion::Entropy).unwrap();
        assert_eq!(tree.root.depth(), 1);
        for ex in &data {
            assert_eq!(tree.predict_label(&ex.features), ex.label);
        }
    }
}
