//! Geodesic statistics of the giant component.
//!
//! Distances are measured on the undirected projection of the largest weakly
//! connected component. Small giants get exact all-pairs BFS; above
//! [`PathOptions::exact_threshold`] nodes, distances are estimated from
//! seeded, uniformly sampled BFS sources (the diameter is then a lower
//! bound, flagged via [`PathStats::exact`]).

use rayon::prelude::*;

use crate::graph::NetworkSnapshot;
use crate::rng::rng_from_seed;

use super::components::weak_component_labels;
use super::MetricsError;

/// Controls for [`giant_path_stats`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathOptions {
    /// Giant sizes up to this get exact all-pairs BFS.
    pub exact_threshold: usize,
    /// Approximate number of (source, target) pairs to cover when sampling.
    pub sample_pairs: u64,
    /// Seed for source sampling (unused in exact mode).
    pub seed: u64,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            exact_threshold: 20_000,
            sample_pairs: 2_000_000,
            seed: 0,
        }
    }
}

/// Mean geodesic and diameter of the giant component.
#[derive(Clone, Debug, PartialEq)]
pub struct PathStats {
    pub giant_size: usize,
    /// Mean shortest-path length over node pairs of the giant
    /// (0 when the giant is a single node).
    pub mean_distance: f64,
    /// Longest shortest path; in sampled mode a lower bound.
    pub diameter: usize,
    /// True when every pair was measured exactly.
    pub exact: bool,
    /// BFS sources used in sampled mode (0 when exact).
    pub sampled_sources: usize,
    /// Number of ordered (source, target) pairs the mean averages over.
    pub pair_count: u64,
}

/// Compact undirected adjacency of the giant component (CSR layout).
struct GiantGraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    size: usize,
}

impl GiantGraph {
    fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }
}

fn extract_giant(snapshot: &NetworkSnapshot) -> Option<GiantGraph> {
    let n = snapshot.node_count();
    if n == 0 {
        return None;
    }
    let labels = weak_component_labels(snapshot);
    let mut sizes: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    for &l in &labels {
        *sizes.entry(l).or_insert(0) += 1;
    }
    // Deterministic giant pick: largest size, smallest label on ties.
    let (&giant_label, _) = sizes
        .iter()
        .max_by_key(|&(&label, &size)| (size, std::cmp::Reverse(label)))?;
    let mut dense = vec![u32::MAX; n];
    let mut members = Vec::new();
    for (v, &l) in labels.iter().enumerate() {
        if l == giant_label {
            dense[v] = members.len() as u32;
            members.push(v);
        }
    }
    let size = members.len();
    let mut offsets = Vec::with_capacity(size + 1);
    let mut targets = Vec::new();
    offsets.push(0u32);
    for &v in &members {
        for u in snapshot.distinct_neighbors(v) {
            targets.push(dense[u]);
        }
        offsets.push(targets.len() as u32);
    }
    Some(GiantGraph {
        offsets,
        targets,
        size,
    })
}

/// BFS from `source`; returns (sum of distances, max distance, reached).
fn bfs(graph: &GiantGraph, source: u32, dist: &mut [u32], queue: &mut Vec<u32>) -> (u64, u32, u64) {
    dist.fill(u32::MAX);
    queue.clear();
    dist[source as usize] = 0;
    queue.push(source);
    let mut head = 0usize;
    let (mut sum, mut max, mut reached) = (0u64, 0u32, 0u64);
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let d = dist[v as usize];
        if d > 0 {
            sum += u64::from(d);
            max = max.max(d);
            reached += 1;
        }
        for &u in graph.neighbors(v as usize) {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = d + 1;
                queue.push(u);
            }
        }
    }
    (sum, max, reached)
}

/// Mean geodesic length and diameter of the giant weakly connected component
/// (undirected projection).
///
/// Exact all-pairs BFS when the giant has at most `exact_threshold` nodes;
/// otherwise BFS from enough seeded uniform sources to cover about
/// `sample_pairs` pairs. Per-source results combine by integer sums, so the
/// outcome is independent of thread scheduling.
pub fn giant_path_stats(
    snapshot: &NetworkSnapshot,
    options: &PathOptions,
) -> Result<PathStats, MetricsError> {
    let graph = extract_giant(snapshot).ok_or(MetricsError::EmptyGiant)?;
    let g = graph.size;
    if g == 1 {
        return Ok(PathStats {
            giant_size: 1,
            mean_distance: 0.0,
            diameter: 0,
            exact: true,
            sampled_sources: 0,
            pair_count: 0,
        });
    }

    let exact = g <= options.exact_threshold;
    let sources: Vec<u32> = if exact {
        (0..g as u32).collect()
    } else {
        let want = (options.sample_pairs / (g as u64 - 1)).clamp(1, g as u64) as usize;
        let mut rng = rng_from_seed(options.seed);
        let mut picked = rand::seq::index::sample(&mut rng, g, want).into_vec();
        picked.sort_unstable();
        picked.into_iter().map(|x| x as u32).collect()
    };

    let (sum, max, pairs) = sources
        .par_iter()
        .map_init(
            || (vec![0u32; g], Vec::with_capacity(g)),
            |(dist, queue), &s| bfs(&graph, s, dist, queue),
        )
        .reduce(
            || (0u64, 0u32, 0u64),
            |a, b| (a.0 + b.0, a.1.max(b.1), a.2 + b.2),
        );

    // Within a weak component every node is reachable, so each BFS covers
    // exactly g−1 targets.
    debug_assert_eq!(pairs, sources.len() as u64 * (g as u64 - 1));

    Ok(PathStats {
        giant_size: g,
        mean_distance: sum as f64 / pairs as f64,
        diameter: max as usize,
        exact,
        sampled_sources: if exact { 0 } else { sources.len() },
        pair_count: pairs,
    })
}
