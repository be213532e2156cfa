//! Single-linkage grouping of messages into patterns.

use serde::{Deserialize, Serialize};

use super::similarity::message_distance;

/// Pattern id of every message plus the size of every pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternAssignment {
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl PatternAssignment {
    pub fn n_patterns(&self) -> usize {
        self.sizes.len()
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Groups `messages` so that two messages share a pattern iff a chain of pairs,
/// each at distance at most `threshold`, connects them.
///
/// Ids are assigned in order of first occurrence. Identical strings are
/// collapsed before the quadratic pass.
pub fn cluster_patterns<S: AsRef<str>>(messages: &[S], threshold: f64) -> PatternAssignment {
    // Deduplicate: identical messages are always at distance 0.
    let mut distinct: Vec<&str> = Vec::new();
    let mut index_of = std::collections::HashMap::new();
    let slot: Vec<usize> = messages
        .iter()
        .map(|m| {
            let m = m.as_ref();
            *index_of.entry(m).or_insert_with(|| {
                distinct.push(m);
                distinct.len() - 1
            })
        })
        .collect();

    let mut sets = UnionFind::new(distinct.len());
    for i in 0..distinct.len() {
        for j in (i + 1)..distinct.len() {
            if sets.find(i) == sets.find(j) {
                continue;
            }
            if message_distance(distinct[i], distinct[j]) <= threshold {
                sets.union(i, j);
            }
        }
    }

    let mut pattern_of_root = std::collections::HashMap::new();
    let mut labels = Vec::with_capacity(messages.len());
    let mut sizes: Vec<usize> = Vec::new();
    for s in slot {
        let root = sets.find(s);
        let id = *pattern_of_root.entry(root).or_insert_with(|| {
            sizes.push(0);
            sizes.len() - 1
        });
        sizes[id] += 1;
        labels.push(id);
    }
    PatternAssignment { labels, sizes }
}
