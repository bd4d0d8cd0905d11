//! Degree statistics and arc density.

use std::collections::BTreeMap;

use crate::graph::NetworkSnapshot;

use super::MetricsError;

/// Degree summary of one snapshot. Histogram masses each sum to the node
/// count (degree-0 nodes included), so distributions across months compare
/// directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub in_histogram: BTreeMap<usize, usize>,
    pub out_histogram: BTreeMap<usize, usize>,
    pub max_in: usize,
    pub max_out: usize,
}

impl DegreeStats {
    /// Average degree `E / N`.
    pub fn avg_degree(&self) -> f64 {
        self.edge_count as f64 / self.node_count as f64
    }

    /// In-degrees as a flat sequence (for tail fitting).
    pub fn in_degrees(&self) -> Vec<u64> {
        expand(&self.in_histogram)
    }

    /// Out-degrees as a flat sequence (for tail fitting).
    pub fn out_degrees(&self) -> Vec<u64> {
        expand(&self.out_histogram)
    }
}

fn expand(histogram: &BTreeMap<usize, usize>) -> Vec<u64> {
    let mut out = Vec::with_capacity(histogram.values().sum());
    for (&degree, &count) in histogram {
        out.extend(std::iter::repeat_n(degree as u64, count));
    }
    out
}

/// Computes degree histograms and the average degree `E / N`.
///
/// Errors on an empty snapshot (no enterprises), since `E / N` is undefined.
pub fn degree_stats(snapshot: &NetworkSnapshot) -> Result<DegreeStats, MetricsError> {
    let n = snapshot.node_count();
    if n == 0 {
        return Err(MetricsError::EmptySnapshot {
            month: snapshot.month(),
        });
    }
    let mut in_histogram = BTreeMap::new();
    let mut out_histogram = BTreeMap::new();
    let (mut max_in, mut max_out) = (0, 0);
    for node in 0..n {
        let din = snapshot.in_degree(node);
        let dout = snapshot.out_degree(node);
        *in_histogram.entry(din).or_insert(0) += 1;
        *out_histogram.entry(dout).or_insert(0) += 1;
        max_in = max_in.max(din);
        max_out = max_out.max(dout);
    }
    Ok(DegreeStats {
        node_count: n,
        edge_count: snapshot.edge_count(),
        in_histogram,
        out_histogram,
        max_in,
        max_out,
    })
}

/// Arc density `E / (N·(N−1))`: the share of possible ordered pairs that
/// carry a guarantee. Requires `N ≥ 2`.
pub fn density(snapshot: &NetworkSnapshot) -> Result<f64, MetricsError> {
    let n = snapshot.node_count();
    if n < 2 {
        return Err(MetricsError::TooFewNodes { n });
    }
    Ok(snapshot.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)))
}
