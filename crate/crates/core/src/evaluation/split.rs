use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::EvaluationError;
use crate::classifier::Label;

fn shuffled_by_class(labels: &[Label], rng: &mut ChaCha8Rng) -> [Vec<usize>; 2] {
    let mut bots: Vec<usize> = (0..labels.len())
        .filter(|&i| labels[i] == Label::Bot)
        .collect();
    let mut humans: Vec<usize> = (0..labels.len())
        .filter(|&i| labels[i] == Label::Human)
        .collect();
    bots.shuffle(rng);
    humans.shuffle(rng);
    [bots, humans]
}

/// Index sets `(train, test)`; each class contributes `round(n_class * train_fraction)`
/// examples to the training part. Both parts keep the input order.
pub fn stratified_split_indices(
    labels: &[Label],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), EvaluationError> {
    if !(0.0..=1.0).contains(&train_fraction) {
        return Err(EvaluationError::InvalidArgument(format!(
            "train fraction {train_fraction} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = shuffled_by_class(labels, &mut rng);
    if classes.iter().any(Vec::is_empty) {
        return Err(EvaluationError::SingleClassData);
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for members in classes {
        let cut = (members.len() as f64 * train_fraction).round() as usize;
        train.extend_from_slice(&members[..cut]);
        test.extend_from_slice(&members[cut..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Stratified train/test partition of `items`.
pub fn stratified_split<T: Clone>(
    items: &[T],
    label_of: impl Fn(&T) -> Label,
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>), EvaluationError> {
    let labels: Vec<Label> = items.iter().map(label_of).collect();
    let (train, test) = stratified_split_indices(&labels, train_fraction, seed)?;
    let pick = |idx: Vec<usize>| idx.into_iter().map(|i| items[i].clone()).collect();
    Ok((pick(train), pick(test)))
}

/// `k` disjoint validation folds (sorted index lists) with per-class round-robin assignment.
pub fn stratified_folds(
    labels: &[Label],
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>, EvaluationError> {
    if k < 2 {
        return Err(EvaluationError::InvalidArgument(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = shuffled_by_class(labels, &mut rng);
    if let Some(small) = classes.iter().find(|c| c.len() < k) {
        return Err(EvaluationError::InvalidArgument(format!(
            "a class has {} examples, fewer than {k} folds",
            small.len()
        )));
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for members in classes {
        for i in members {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}
