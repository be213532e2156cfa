//! Message normalisation and the pairwise similarity used for pattern detection.
//!
//! The compound similarity is the arithmetic mean of the token-set Jaccard index
//! and the normalised Levenshtein similarity. Both components are 1 on identical
//! input and lie in `[0, 1]`, so the mean does too.

use std::collections::HashSet;

/// Lowercases, trims, and collapses internal whitespace runs to one space.
pub fn normalize_message(raw: &str) -> String {
    let lowered = raw.to_lowercase();
    let mut out = String::with_capacity(lowered.len());
    for token in lowered.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(token);
    }
    out
}

/// True when the message has no content besides whitespace.
pub fn is_empty(raw: &str) -> bool {
    raw.trim().is_empty()
}

pub fn jaccard_similarity(a: &str, b: &str) -> f64 {
    let left: HashSet<&str> = a.split_whitespace().collect();
    let right: HashSet<&str> = b.split_whitespace().collect();
    if left.is_empty() && right.is_empty() {
        return 1.0;
    }
    let shared = left.intersection(&right).count();
    let union = left.len() + right.len() - shared;
    shared as f64 / union as f64
}

/// Unit-cost edit distance over Unicode scalar values.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    edit_distance_chars(&a, &b)
}

fn edit_distance_chars(a: &[char], b: &[char]) -> usize {
    // Keep the shorter string on the row axis.
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.is_empty() {
        return a.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diagonal = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitution = diagonal + usize::from(ca != cb);
            diagonal = row[j + 1];
            row[j + 1] = substitution.min(row[j] + 1).min(diagonal + 1);
        }
    }
    row[b.len()]
}

pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - edit_distance_chars(&a, &b) as f64 / longest as f64
}

pub fn compound_similarity(a: &str, b: &str) -> f64 {
    (jaccard_similarity(a, b) + levenshtein_similarity(a, b)) / 2.0
}

/// `1 - compound_similarity`, the quantity compared against the clustering threshold.
pub fn message_distance(a: &str, b: &str) -> f64 {
    1.0 - compound_similarity(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Textbook full-matrix Wagner-Fischer, independent of the rolling-row version.
    fn edit_distance_oracle(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut table = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in table.iter_mut().enumerate() {
            row[0] = i;
        }
        for (j, cell) in table[0].iter_mut().enumerate() {
            *cell = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
                table[i][j] = (table[i - 1][j] + 1)
                    .min(table[i][j - 1] + 1)
                    .min(table[i - 1][j - 1] + cost);
            }
        }
        table[a.len()][b.len()]
    }

    #[test]
    fn normalisation() {
        assert_eq!(normalize_message("  Fix  Bug\n"), "fix bug");
        assert_eq!(normalize_message(""), "");
        assert_eq!(
            normalize_message("Bump lodash from 4.17.20 to 4.17.21"),
            "bump lodash from 4.17.20 to 4.17.21"
        );
        assert_eq!(normalize_message("ÉTÉ\t\tFINI"), "été fini");
    }

    #[test]
    fn emptiness() {
        assert!(is_empty(""));
        assert!(is_empty("   \n\t"));
        assert!(!is_empty("wip"));
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(jaccard_similarity("fix bug", "fix bug"), 1.0);
        assert_eq!(jaccard_similarity("alpha beta", "gamma delta"), 0.0);
        // {b, c} shared out of {a, b, c, d}
        assert_eq!(jaccard_similarity("a b c", "b c d"), 0.5);
        assert_eq!(jaccard_similarity("", ""), 1.0);
        assert_eq!(jaccard_similarity("a", ""), 0.0);
    }

    #[test]
    fn levenshtein_examples() {
        assert_eq!(levenshtein_similarity("abc", "abc"), 1.0);
        assert_eq!(edit_distance_oracle("kitten", "sitting"), 3);
        assert!((levenshtein_similarity("kitten", "sitting") - (1.0 - 3.0 / 7.0)).abs() < 1e-12);
        assert_eq!(levenshtein_similarity("a", ""), 0.0);
        assert_eq!(levenshtein_similarity("", ""), 1.0);
        // counts scalar values, not bytes
        assert_eq!(edit_distance("héllo", "hello"), 1);
    }

    #[test]
    fn compound_examples() {
        assert_eq!(compound_similarity("release 1.2", "release 1.2"), 1.0);
        // "a b c" -> "b c d": three aligned substitutions over 5 chars.
        assert_eq!(edit_distance_oracle("a b c", "b c d"), 3);
        let expected = (0.5 + (1.0 - 3.0 / 5.0)) / 2.0;
        assert!((compound_similarity("a b c", "b c d") - expected).abs() < 1e-12);
        assert_eq!(compound_similarity("abc", "xyz"), 0.0);
    }

    proptest! {
        #[test]
        fn edit_distance_matches_oracle(a in "[a-c ]{0,12}", b in "[a-c ]{0,12}") {
            prop_assert_eq!(edit_distance(&a, &b), edit_distance_oracle(&a, &b));
        }

        #[test]
        fn compound_is_symmetric_and_bounded(a in "[a-d]{0,3}( [a-d]{1,3}){0,4}", b in "[a-d]{0,3}( [a-d]{1,3}){0,4}") {
            let ab = compound_similarity(&a, &b);
            prop_assert_eq!(ab, compound_similarity(&b, &a));
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert_eq!(ab == 1.0, a == b);
        }
    }
}
