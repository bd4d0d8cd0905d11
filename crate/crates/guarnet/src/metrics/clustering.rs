//! Directed clustering coefficient.
//!
//! For node `i` with `k_i ≥ 2` distinct neighbors (union of guarantors and
//! debtors), the per-node coefficient is
//!
//! ```text
//! c_i = (directed arcs among i's distinct neighbors) / (2 · k_i · (k_i − 1))
//! ```
//!
//! counting each direction separately in the numerator. Nodes with fewer
//! than two distinct neighbors get `c_i = 0`. The normalization caps `c_i`
//! at ½, attained when the neighborhood is completely mutually connected.

use crate::graph::NetworkSnapshot;

/// Per-node directed clustering coefficients and their average.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringReport {
    /// `per_node[i]` is the coefficient of node `i`.
    pub per_node: Vec<f64>,
    /// Plain average over all nodes (zeros included); 0 for an empty snapshot.
    pub average: f64,
}

/// Computes directed clustering for every node.
pub fn clustering_directed(snapshot: &NetworkSnapshot) -> ClusteringReport {
    let n = snapshot.node_count();
    let mut per_node = vec![0.0f64; n];
    for (i, slot) in per_node.iter_mut().enumerate() {
        let neighborhood = snapshot.distinct_neighbors(i);
        let k = neighborhood.len();
        if k < 2 {
            continue;
        }
        // Count arcs u -> w with both endpoints in the neighborhood by
        // walking u's sorted debtor list against the sorted neighborhood.
        let mut arcs = 0usize;
        for &u in &neighborhood {
            let debtors = snapshot.debtors_of(u);
            let (mut a, mut b) = (0usize, 0usize);
            while a < debtors.len() && b < k {
                let d = debtors[a].0 as usize;
                let w = neighborhood[b];
                if d < w {
                    a += 1;
                } else if w < d {
                    b += 1;
                } else {
                    if w != i {
                        arcs += 1;
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
        *slot = arcs as f64 / (2.0 * k as f64 * (k as f64 - 1.0));
    }
    let average = if n == 0 {
        0.0
    } else {
        per_node.iter().sum::<f64>() / n as f64
    };
    ClusteringReport { per_node, average }
}
