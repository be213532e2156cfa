use std::collections::{BTreeSet, HashSet};

use gitbot_core::features::{cluster_patterns, compute_features_from_texts, gini_coefficient};
use gitbot_core::FeatureConfig;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_distance(a: &str, b: &str) -> f64 {
    let ta: HashSet<&str> = a.split(' ').filter(|t| !t.is_empty()).collect();
    let tb: HashSet<&str> = b.split(' ').filter(|t| !t.is_empty()).collect();
    let union = ta.union(&tb).count();
    let jaccard = if union == 0 {
        1.0
    } else {
        ta.intersection(&tb).count() as f64 / union as f64
    };
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            d[i][j] = if i == 0 || j == 0 {
                i + j
            } else {
                (d[i - 1][j] + 1)
                    .min(d[i][j - 1] + 1)
                    .min(d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]))
            };
        }
    }
    let longest = a.len().max(b.len());
    let lev = if longest == 0 {
        1.0
    } else {
        1.0 - d[a.len()][b.len()] as f64 / longest as f64
    };
    1.0 - (jaccard + lev) / 2.0
}

/// Connected components of the "distance <= eps" graph by repeated flooding.
fn oracle_partition(messages: &[String], eps: f64) -> BTreeSet<BTreeSet<usize>> {
    let n = messages.len();
    let mut seen = vec![false; n];
    let mut parts = BTreeSet::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut component = BTreeSet::from([start]);
        seen[start] = true;
        let mut frontier = vec![start];
        while let Some(i) = frontier.pop() {
            for j in 0..n {
                if !seen[j] && oracle_distance(&messages[i], &messages[j]) <= eps {
                    seen[j] = true;
                    component.insert(j);
                    frontier.push(j);
                }
            }
        }
        parts.insert(component);
    }
    parts
}

fn partition_of(labels: &[usize]) -> BTreeSet<BTreeSet<usize>> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    (0..k)
        .map(|p| (0..labels.len()).filter(|&i| labels[i] == p).collect())
        .collect()
}

const VOCAB: &[&str] = &[
    "fix", "bump", "update", "deps", "readme", "test", "v1", "v2", "typo", "ci",
];

fn random_corpus(rng: &mut ChaCha8Rng) -> Vec<String> {
    let n = rng.gen_range(1..=30);
    (0..n)
        .map(|_| {
            let words = rng.gen_range(1..=5);
            (0..words)
                .map(|_| *VOCAB.choose(rng).unwrap())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

#[test]
fn clustering_matches_flooding_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let corpus = random_corpus(&mut rng);
        let got = cluster_patterns(&corpus, 0.5);
        assert_eq!(
            partition_of(&got.labels),
            oracle_partition(&corpus, 0.5),
            "{corpus:?}"
        );
        let mut sizes: Vec<usize> = oracle_partition(&corpus, 0.5)
            .iter()
            .map(BTreeSet::len)
            .collect();
        let mut got_sizes = got.sizes.clone();
        sizes.sort_unstable();
        got_sizes.sort_unstable();
        assert_eq!(got_sizes, sizes);
    }
}

#[test]
fn pattern_ids_follow_first_occurrence() {
    let corpus = [
        "zzz qqq",
        "bump deps",
        "zzz qqq",
        "bump deps v2",
        "something else entirely",
    ];
    let got = cluster_patterns(&corpus, 0.5);
    assert_eq!(got.labels, [0, 1, 0, 1, 2]);
    assert_eq!(got.sizes, [2, 2, 1]);
}

#[test]
fn pattern_count_never_grows_with_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let corpus = random_corpus(&mut rng);
        let counts: Vec<usize> = (1..=9)
            .map(|k| cluster_patterns(&corpus, k as f64 / 10.0).n_patterns())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    }
}

#[test]
fn threshold_extremes() {
    let corpus = ["a b", "a b", "c d", "x", "a  b"];
    let distinct: HashSet<&str> = corpus.iter().copied().collect();
    assert_eq!(cluster_patterns(&corpus, 0.0).n_patterns(), distinct.len());
    assert_eq!(cluster_patterns(&corpus, 1.0).n_patterns(), 1);
}

proptest! {
    #[test]
    fn features_do_not_depend_on_message_order(
        messages in prop::collection::vec("(fix|bump|docs|wip| ){1,12}", 10..40),
        seed in any::<u64>(),
    ) {
        let config = FeatureConfig::default();
        let mut shuffled = messages.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = compute_features_from_texts(messages.iter().map(String::as_str), &config);
        let b = compute_features_from_texts(shuffled.iter().map(String::as_str), &config);
        let (a, b) = (a.vector().copied().unwrap(), b.vector().copied().unwrap());
        prop_assert_eq!((a.n_messages, a.n_empty, a.n_patterns), (b.n_messages, b.n_empty, b.n_patterns));
        prop_assert!((a.gini - b.gini).abs() < 1e-12);
    }

    #[test]
    fn gini_is_bounded(sizes in prop::collection::vec(1usize..100, 1..40)) {
        let g = gini_coefficient(&sizes);
        prop_assert!((0.0..1.0).contains(&g));
    }
}
