//! Birth-death decomposition and Betti curves under graph filtration.
//!
//! Thresholding at `eps` keeps the edges with `w > eps`. As `eps` grows,
//! removing an edge either splits a component (a birth) or breaks a cycle
//! (a death). Births are exactly the maximum-spanning-tree weights; deaths
//! are the remaining edge weights.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, WeightedNetwork};

#[derive(Debug, Error, PartialEq)]
pub enum BarcodeError {
    #[error("thresholds must be strictly ascending: {prev} then {next} at position {index}")]
    UnsortedThresholds { index: usize, prev: f64, next: f64 },
    #[error("threshold at position {0} is NaN")]
    NanThreshold(usize),
}

/// Disjoint-set forest with path compression and union by rank.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    components: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            rank: vec![0; len],
            components: len,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets holding `a` and `b`. Returns false if they were
    /// already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.components -= 1;
        true
    }

    /// Number of disjoint sets.
    pub fn components(&self) -> usize {
        self.components
    }
}

/// Sorted birth and death sets of a network's 1-dimensional barcode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthDeathDecomposition {
    pub node_count: usize,
    pub births: Vec<f64>,
    pub deaths: Vec<f64>,
}

/// Birth and death counts shared by every network on `v` nodes:
/// `(v - 1, 1 + v(v - 3)/2)`.
///
/// Panics if `v < 2`.
pub fn counts_for_size(v: usize) -> (usize, usize) {
    assert!(v >= 2, "counts_for_size needs at least 2 nodes, got {v}");
    let edges = v * (v - 1) / 2;
    (v - 1, edges - (v - 1))
}

/// Edges sorted by weight descending, ties broken by smaller node index then
/// larger node index.
fn edges_descending(net: &WeightedNetwork) -> Vec<Edge> {
    let mut edges: Vec<Edge> = net.edges().collect();
    edges.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then(a.i.cmp(&b.i))
            .then(a.j.cmp(&b.j))
    });
    edges
}

/// Kruskal's algorithm on descending weights. Returns the tree edges and the
/// rejected (cycle-closing) edges, each in processing order.
pub fn maximum_spanning_tree(net: &WeightedNetwork) -> (Vec<Edge>, Vec<Edge>) {
    let n = net.node_count();
    let mut uf = UnionFind::new(n);
    let mut tree = Vec::with_capacity(n - 1);
    let mut rest = Vec::with_capacity(net.edge_count() + 1 - n);
    for e in edges_descending(net) {
        if uf.union(e.i, e.j) {
            tree.push(e);
        } else {
            rest.push(e);
        }
    }
    (tree, rest)
}

/// Splits the edge weights into births (MST weights) and deaths (the rest),
/// both ascending.
pub fn decompose(net: &WeightedNetwork) -> BirthDeathDecomposition {
    let (tree, rest) = maximum_spanning_tree(net);
    // Kruskal visits edges in descending order, so reversing gives ascending.
    let births = tree.iter().rev().map(|e| e.weight).collect();
    let deaths = rest.iter().rev().map(|e| e.weight).collect();
    BirthDeathDecomposition {
        node_count: net.node_count(),
        births,
        deaths,
    }
}

/// Betti numbers of the thresholded graphs `G_eps` (edges with `w > eps`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BettiCurve {
    pub thresholds: Vec<f64>,
    pub beta0: Vec<usize>,
    pub beta1: Vec<usize>,
    /// Number of surviving edges at each threshold.
    pub edge_counts: Vec<usize>,
}

/// Evaluates `beta0` and `beta1` at each threshold.
///
/// Thresholds are swept from largest to smallest while edges are added in
/// descending weight order, so the whole curve costs one sort plus one
/// union-find pass.
pub fn betti_curves(net: &WeightedNetwork, thresholds: &[f64]) -> Result<BettiCurve, BarcodeError> {
    for (index, t) in thresholds.iter().enumerate() {
        if t.is_nan() {
            return Err(BarcodeError::NanThreshold(index));
        }
        if index > 0 && thresholds[index - 1] >= *t {
            return Err(BarcodeError::UnsortedThresholds {
                index,
                prev: thresholds[index - 1],
                next: *t,
            });
        }
    }

    let n = net.node_count();
    let edges = edges_descending(net);
    let mut uf = UnionFind::new(n);
    let mut added = 0;
    let k = thresholds.len();
    let mut beta0 = vec![0; k];
    let mut beta1 = vec![0; k];
    let mut edge_counts = vec![0; k];
    for idx in (0..k).rev() {
        let eps = thresholds[idx];
        while added < edges.len() && edges[added].weight > eps {
            uf.union(edges[added].i, edges[added].j);
            added += 1;
        }
        let b0 = uf.components();
        beta0[idx] = b0;
        // Euler characteristic of a 1-skeleton: |V| - |E| = b0 - b1.
        beta1[idx] = added + b0 - n;
        edge_counts[idx] = added;
    }
    Ok(BettiCurve {
        thresholds: thresholds.to_vec(),
        beta0,
        beta1,
        edge_counts,
    })
}

/// Distinct edge weights in ascending order.
pub fn filtration_values(net: &WeightedNetwork) -> Vec<f64> {
    let mut values: Vec<f64> = net.edges().map(|e| e.weight).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}
