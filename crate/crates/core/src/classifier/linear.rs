//! Linear models on standardised features: logistic regression and a linear SVM.
//!
//! Both are fitted by deterministic full-batch descent. Reaching the iteration
//! cap is not an error; the model records `converged = false` instead.

use serde::{Deserialize, Serialize};

use super::knn::Standardizer;
use super::{check_both_classes, Classifier, ClassifierError, Label, LabeledExample, N_FEATURES};
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearParams {
    /// L2 penalty weight on the coefficients (the intercept is not penalised).
    pub l2: f64,
    pub max_iter: usize,
    pub tolerance: f64,
}

impl LinearParams {
    pub fn with_l2(l2: f64) -> Self {
        Self {
            l2,
            max_iter: 5_000,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub standardizer: Standardizer,
    pub weights: [f64; N_FEATURES],
    pub bias: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl LinearModel {
    /// Signed score, positive for Bot.
    pub fn decision_function(&self, features: &FeatureVector) -> f64 {
        let x = self.standardizer.transform(features);
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

impl Classifier for LinearModel {
    fn predict_label(&self, features: &FeatureVector) -> Label {
        if self.decision_function(features) > 0.0 {
            Label::Bot
        } else {
            Label::Human
        }
    }
}

fn prepare(data: &[LabeledExample]) -> (Standardizer, Vec<([f64; N_FEATURES], f64)>) {
    let standardizer = Standardizer::fit(data);
    let rows = data
        .iter()
        .map(|ex| {
            let y = match ex.label {
                Label::Bot => 1.0,
                Label::Human => -1.0,
            };
            (standardizer.transform(&ex.features), y)
        })
        .collect();
    (standardizer, rows)
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Minimises mean binary cross-entropy plus `l2/2 * |w|^2` by gradient descent.
pub fn train_logistic(
    data: &[LabeledExample],
    params: &LinearParams,
) -> Result<LinearModel, ClassifierError> {
    check_both_classes(data)?;
    let (standardizer, rows) = prepare(data);
    let n = rows.len() as f64;
    // The loss Hessian is bounded by mean(|x|^2 + 1) / 4 + l2.
    let curvature = rows
        .iter()
        .map(|(x, _)| 1.0 + x.iter().map(|v| v * v).sum::<f64>())
        .sum::<f64>()
        / (4.0 * n)
        + params.l2;
    let step = 1.0 / curvature;

    let mut w = [0.0; N_FEATURES];
    let mut b = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        let mut grad_w = [0.0; N_FEATURES];
        let mut grad_b = 0.0;
        for (x, y) in &rows {
            let target = if *y > 0.0 { 1.0 } else { 0.0 };
            let z = b + w.iter().zip(x).map(|(a, v)| a * v).sum::<f64>();
            let residual = sigmoid(z) - target;
            for (g, v) in grad_w.iter_mut().zip(x) {
                *g += residual * v / n;
            }
            grad_b += residual / n;
        }
        for (g, wi) in grad_w.iter_mut().zip(w) {
            *g += params.l2 * wi;
        }
        let norm = (grad_w.iter().map(|g| g * g).sum::<f64>() + grad_b * grad_b).sqrt();
        if norm < params.tolerance {
            converged = true;
            break;
        }
        for (wi, g) in w.iter_mut().zip(grad_w) {
            *wi -= step * g;
        }
        b -= step * grad_b;
    }
    if !converged {
        log::debug!(
            "logistic regression hit the {} iteration cap",
            params.max_iter
        );
    }
    Ok(LinearModel {
        standardizer,
        weights: w,
        bias: b,
        converged,
        iterations,
    })
}

fn hinge_objective(
    rows: &[([f64; N_FEATURES], f64)],
    w: &[f64; N_FEATURES],
    b: f64,
    l2: f64,
) -> f64 {
    let n = rows.len() as f64;
    let loss: f64 = rows
        .iter()
        .map(|(x, y)| {
            let margin = y * (b + w.iter().zip(x).map(|(a, v)| a * v).sum::<f64>());
            (1.0 - margin).max(0.0)
        })
        .sum::<f64>()
        / n;
    loss + 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

/// Minimises mean hinge loss plus `l2/2 * |w|^2` by subgradient descent with a
/// `1 / (l2 * t)` step, keeping the best iterate seen.
pub fn train_linear_svm(
    data: &[LabeledExample],
    params: &LinearParams,
) -> Result<LinearModel, ClassifierError> {
    check_both_classes(data)?;
    if params.l2 <= 0.0 {
        return Err(ClassifierError::InvalidHyperparameter(
            "linear SVM needs a positive l2 penalty".into(),
        ));
    }
    let (standardizer, rows) = prepare(data);
    let n = rows.len() as f64;

    let mut w = [0.0; N_FEATURES];
    let mut b = 0.0;
    let mut best = (hinge_objective(&rows, &w, b, params.l2), w, b);
    let mut last_check = best.0;
    const WINDOW: usize = 100;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        let t = iterations as f64;
        let step = 1.0 / (params.l2 * (t + 1.0));
        let mut grad_w = w.map(|wi| params.l2 * wi);
        let mut grad_b = 0.0;
        for (x, y) in &rows {
            let margin = y * (b + w.iter().zip(x).map(|(a, v)| a * v).sum::<f64>());
            if margin < 1.0 {
                for (g, v) in grad_w.iter_mut().zip(x) {
                    *g -= y * v / n;
                }
                grad_b -= y / n;
            }
        }
        for (wi, g) in w.iter_mut().zip(grad_w) {
            *wi -= step * g;
        }
        b -= step * grad_b;

        let objective = hinge_objective(&rows, &w, b, params.l2);
        if objective < best.0 {
            best = (objective, w, b);
        }
        if iterations % WINDOW == 0 {
            if last_check - best.0 <= params.tolerance * last_check.max(1e-12) {
                converged = true;
                break;
            }
            last_check = best.0;
        }
    }
    if !converged {
        log::debug!("linear SVM hit the {} iteration cap", params.max_iter);
    }
    Ok(LinearModel {
        standardizer,
        weights: best.1,
        bias: best.2,
        converged,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_dimensional() -> Vec<LabeledExample> {
        // Separable on n_patterns only: bots at 1..=4, humans at 10..=14.
        let mut data = Vec::new();
        for p in 1..=4 {
            data.push(LabeledExample {
                features: FeatureVector::new(50, 0, p, 0.0),
                label: Label::Bot,
            });
        }
        for p in 10..=14 {
            data.push(LabeledExample {
                features: FeatureVector::new(50, 0, p, 0.0),
                label: Label::Human,
            });
        }
        data
    }

    fn accuracy(model: &impl Classifier, data: &[LabeledExample]) -> f64 {
        data.iter()
            .filter(|e| model.predict_label(&e.features) == e.label)
            .count() as f64
            / data.len() as f64
    }

    #[test]
    fn logistic_separates_one_dimensional_data() {
        let data = one_dimensional();
        let model = train_logistic(&data, &LinearParams::with_l2(1e-3)).unwrap();
        assert_eq!(accuracy(&model, &data), 1.0);
        // the boundary falls strictly between the classes
        let boundary_low = model.decision_function(&FeatureVector::new(50, 0, 4, 0.0));
        let boundary_high = model.decision_function(&FeatureVector::new(50, 0, 10, 0.0));
        assert!(boundary_low > 0.0 && boundary_high < 0.0);
    }

    #[test]
    fn strong_penalty_converges() {
        let model = train_logistic(&one_dimensional(), &LinearParams::with_l2(1.0)).unwrap();
        assert!(model.converged);
    }

    #[test]
    fn unpenalised_separable_logistic_reports_non_convergence() {
        let params = LinearParams {
            l2: 0.0,
            max_iter: 200,
            tolerance: 1e-12,
        };
        let model = train_logistic(&one_dimensional(), &params).unwrap();
        assert!(!model.converged);
        assert_eq!(model.iterations, 200);
    }

    #[test]
    fn svm_separates_one_dimensional_data() {
        let data = one_dimensional();
        let model = train_linear_svm(&data, &LinearParams::with_l2(0.01)).unwrap();
        assert_eq!(accuracy(&model, &data), 1.0);
        assert!(train_linear_svm(&data, &LinearParams::with_l2(0.0)).is_err());
    }

    #[test]
    fn single_class_rejected() {
        let data: Vec<_> = one_dimensional().into_iter().take(3).collect();
        assert!(matches!(
            train_logistic(&data, &LinearParams::with_l2(1.0)),
            Err(ClassifierError::SingleClassData)
        ));
    }
}
