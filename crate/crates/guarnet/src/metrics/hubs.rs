//! Hub extraction: the top slice of nodes by out-degree (guarantor hubs)
//! and by in-degree (debtor hubs), and the overlap between the two sets.
//!
//! A node is a guarantor hub when its out-degree reaches the threshold set
//! by the requested percentile, and likewise for debtor hubs with
//! in-degree. Ties at the threshold are included, so the sets can be
//! larger than `⌈percentile · N⌉`.

use crate::graph::NetworkSnapshot;

use super::MetricsError;

/// Hub sets for one snapshot, with node indices in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct HubReport {
    /// The percentile the thresholds were derived from, e.g. 0.01.
    pub percentile: f64,
    /// Minimum out-degree for guarantor-hub membership.
    pub out_threshold: usize,
    /// Minimum in-degree for debtor-hub membership.
    pub in_threshold: usize,
    /// Nodes whose out-degree is at least `out_threshold`.
    pub guarantor_hubs: Vec<usize>,
    /// Nodes whose in-degree is at least `in_threshold`.
    pub debtor_hubs: Vec<usize>,
    /// Jaccard overlap |G ∩ D| / |G ∪ D|; 0 when both sets are empty.
    pub overlap: f64,
    /// Set when the snapshot has fewer than 100 nodes, where a percentile
    /// slice is too coarse to be meaningful.
    pub small_n_warning: bool,
}

/// Degree threshold for the top `count` values: the `count`-th largest
/// degree, so that including ties yields at least `count` members.
fn threshold(mut degrees: Vec<usize>, count: usize) -> usize {
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    degrees[count - 1]
}

/// Extracts guarantor and debtor hubs at the given percentile.
///
/// `percentile` must lie in (0, 1]. The target set size is
/// `⌈percentile · N⌉`; the degree of the node at that rank becomes the
/// threshold and every node at or above it is included. Nodes whose
/// threshold degree is 0 are still included (a snapshot can have fewer
/// arcs than hub slots), so callers should treat `out_threshold == 0` as a
/// degenerate slice.
pub fn hub_report(snapshot: &NetworkSnapshot, percentile: f64) -> Result<HubReport, MetricsError> {
    if !(percentile > 0.0 && percentile <= 1.0) {
        return Err(MetricsError::InvalidPercentile { percentile });
    }
    let n = snapshot.node_count();
    if n == 0 {
        return Err(MetricsError::EmptySnapshot {
            month: snapshot.month(),
        });
    }
    let count = (percentile * n as f64).ceil() as usize;
    let count = count.clamp(1, n);

    let out_degrees: Vec<usize> = (0..n).map(|i| snapshot.out_degree(i)).collect();
    let in_degrees: Vec<usize> = (0..n).map(|i| snapshot.in_degree(i)).collect();
    let out_threshold = threshold(out_degrees.clone(), count);
    let in_threshold = threshold(in_degrees.clone(), count);

    let guarantor_hubs: Vec<usize> = (0..n)
        .filter(|&i| out_degrees[i] >= out_threshold)
        .collect();
    let debtor_hubs: Vec<usize> = (0..n).filter(|&i| in_degrees[i] >= in_threshold).collect();

    let intersection = {
        // Both lists ascend, so a two-pointer walk counts the overlap.
        let (mut i, mut j, mut common) = (0, 0, 0usize);
        while i < guarantor_hubs.len() && j < debtor_hubs.len() {
            match guarantor_hubs[i].cmp(&debtor_hubs[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        common
    };
    let union = guarantor_hubs.len() + debtor_hubs.len() - intersection;
    let overlap = if union == 0 {
        0.0
    } else {
        intersection as f64 / union as f64
    };

    Ok(HubReport {
        percentile,
        out_threshold,
        in_threshold,
        guarantor_hubs,
        debtor_hubs,
        overlap,
        small_n_warning: n < 100,
    })
}
