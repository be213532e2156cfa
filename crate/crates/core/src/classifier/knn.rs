use serde::{Deserialize, Serialize};

use super::{check_both_classes, Classifier, ClassifierError, Label, LabeledExample, N_FEATURES};
use crate::features::FeatureVector;

/// Z-score scaling fitted on training data. Constant columns are centred only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: [f64; N_FEATURES],
    pub scale: [f64; N_FEATURES],
}

impl Standardizer {
    pub fn fit(data: &[LabeledExample]) -> Self {
        let n = data.len().max(1) as f64;
        let mut mean = [0.0; N_FEATURES];
        for ex in data {
            for (m, v) in mean.iter_mut().zip(ex.features.to_array()) {
                *m += v / n;
            }
        }
        let mut var = [0.0; N_FEATURES];
        for ex in data {
            for ((s, v), m) in var.iter_mut().zip(ex.features.to_array()).zip(mean) {
                *s += (v - m) * (v - m) / n;
            }
        }
        let scale = var.map(|v| if v > 0.0 { v.sqrt() } else { 1.0 });
        Self { mean, scale }
    }

    pub fn transform(&self, features: &FeatureVector) -> [f64; N_FEATURES] {
        let mut x = features.to_array();
        for ((v, m), s) in x.iter_mut().zip(self.mean).zip(self.scale) {
            *v = (*v - m) / s;
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnnWeighting {
    Uniform,
    /// Votes weighted by inverse distance; exact matches outvote everything else.
    Distance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub weighting: KnnWeighting,
    pub standardizer: Standardizer,
    points: Vec<([f64; N_FEATURES], Label)>,
}

pub fn train_knn(
    data: &[LabeledExample],
    k: usize,
    weighting: KnnWeighting,
) -> Result<KnnModel, ClassifierError> {
    check_both_classes(data)?;
    if k == 0 {
        return Err(ClassifierError::InvalidHyperparameter(
            "k must be positive".into(),
        ));
    }
    let standardizer = Standardizer::fit(data);
    let points = data
        .iter()
        .map(|ex| (standardizer.transform(&ex.features), ex.label))
        .collect();
    Ok(KnnModel {
        k,
        weighting,
        standardizer,
        points,
    })
}

impl Classifier for KnnModel {
    fn predict_label(&self, features: &FeatureVector) -> Label {
        let query = self.standardizer.transform(features);
        let mut neighbours: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, (p, _))| {
                let d2: f64 = p.iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2.sqrt(), i)
            })
            .collect();
        // (distance, index) keeps equidistant neighbours in training order.
        neighbours.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        neighbours.truncate(self.k);

        let (mut bot, mut human) = (0.0, 0.0);
        let exact = neighbours.iter().any(|(d, _)| *d == 0.0);
        for &(d, i) in &neighbours {
            let weight = match self.weighting {
                KnnWeighting::Uniform => 1.0,
                KnnWeighting::Distance if exact => f64::from(u8::from(d == 0.0)),
                KnnWeighting::Distance => 1.0 / d,
            };
            match self.points[i].1 {
                Label::Bot => bot += weight,
                Label::Human => human += weight,
            }
        }
        if bot > human {
            Label::Bot
        } else {
            Label::Human
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> Vec<LabeledExample> {
        vec![
            LabeledExample {
                features: FeatureVector::new(50, 0, 1, 0.0),
                label: Label::Bot,
            },
            LabeledExample {
                features: FeatureVector::new(60, 1, 2, 0.2),
                label: Label::Bot,
            },
            LabeledExample {
                features: FeatureVector::new(30, 0, 28, 0.03),
                label: Label::Human,
            },
            LabeledExample {
                features: FeatureVector::new(45, 2, 40, 0.1),
                label: Label::Human,
            },
        ]
    }

    #[test]
    fn one_neighbour_recovers_training_labels() {
        let data = data();
        let model = train_knn(&data, 1, KnnWeighting::Uniform).unwrap();
        for ex in &data {
            assert_eq!(model.predict_label(&ex.features), ex.label);
        }
    }

    #[test]
    fn scaling_a_feature_leaves_predictions_unchanged() {
        let data = data();
        let scaled: Vec<_> = data
            .iter()
            .map(|ex| LabeledExample {
                features: FeatureVector {
                    gini: ex.features.gini * 7.5,
                    ..ex.features
                },
                label: ex.label,
            })
            .collect();
        let a = train_knn(&data, 3, KnnWeighting::Distance).unwrap();
        let b = train_knn(&scaled, 3, KnnWeighting::Distance).unwrap();
        for patterns in [1, 5, 20, 35] {
            for gini in [0.0, 0.05, 0.3] {
                let q = FeatureVector::new(40, 0, patterns, gini);
                let qs = FeatureVector {
                    gini: gini * 7.5,
                    ..q
                };
                assert_eq!(a.predict_label(&q), b.predict_label(&qs));
            }
        }
    }

    #[test]
    fn standardizer_centres_and_scales() {
        let s = Standardizer::fit(&data());
        let mut sum = [0.0; 4];
        for ex in data() {
            for (acc, v) in sum.iter_mut().zip(s.transform(&ex.features)) {
                *acc += v;
            }
        }
        assert!(sum.iter().all(|v| v.abs() < 1e-9));
    }
}
