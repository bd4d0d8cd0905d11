//! Weakly connected components, isolated reciprocal couples, and mutual
//! triads.
//!
//! Guarantee networks are dominated by small fragments: pairs of enterprises
//! guaranteeing each other and nothing else ("reciprocal couples") make up a
//! stable double-digit share of all nodes, and fully mutual triangles are
//! heavily over-represented among connected triples. These counts, plus the
//! component size distribution, are the fragment-level fingerprint of a
//! snapshot.

use std::collections::BTreeMap;

use crate::graph::NetworkSnapshot;

/// Component census over the undirected projection.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSummary {
    /// Number of weakly connected components (isolated nodes count).
    pub count: usize,
    /// Size of the largest component (0 for an empty snapshot).
    pub giant_size: usize,
    /// `giant_size / N` (0 for an empty snapshot).
    pub giant_share: f64,
    /// size -> number of components of that size.
    pub size_histogram: BTreeMap<usize, usize>,
}

/// Union-find over node indices.
struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
    }
}

/// Weak-component label per node (labels are representative node indices).
pub fn weak_component_labels(snapshot: &NetworkSnapshot) -> Vec<u32> {
    let n = snapshot.node_count();
    let mut sets = DisjointSets::new(n);
    for (g, d, _) in snapshot.arcs() {
        sets.union(g as u32, d as u32);
    }
    (0..n as u32).map(|i| sets.find(i)).collect()
}

/// Census of weakly connected components (direction ignored).
pub fn components(snapshot: &NetworkSnapshot) -> ComponentSummary {
    let labels = weak_component_labels(snapshot);
    let n = snapshot.node_count();
    let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
    for &label in &labels {
        *sizes.entry(label).or_insert(0) += 1;
    }
    let mut size_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut giant_size = 0;
    for &size in sizes.values() {
        *size_histogram.entry(size).or_insert(0) += 1;
        giant_size = giant_size.max(size);
    }
    let giant_share = if n == 0 {
        0.0
    } else {
        giant_size as f64 / n as f64
    };
    ComponentSummary {
        count: sizes.len(),
        giant_size,
        giant_share,
        size_histogram,
    }
}

/// Share of nodes living in isolated reciprocal couples: two enterprises
/// that guarantee each other and have no other guarantee relation at all
/// (equivalently, weak components of size 2 carrying both arcs).
pub fn reciprocal_couple_ratio(snapshot: &NetworkSnapshot) -> f64 {
    let n = snapshot.node_count();
    if n == 0 {
        return 0.0;
    }
    let mut couple_nodes = 0usize;
    for u in 0..n {
        let out = snapshot.debtors_of(u);
        let inn = snapshot.guarantors_of(u);
        if out.len() != 1 || inn.len() != 1 {
            continue;
        }
        let v = out[0].0 as usize;
        if inn[0].0 as usize != v || v <= u {
            // Count each couple once, from its lower-indexed member.
            // (v == u impossible: self-loops are rejected at build.)
            continue;
        }
        let vout = snapshot.debtors_of(v);
        let vin = snapshot.guarantors_of(v);
        if vout.len() == 1 && vin.len() == 1 && vout[0].0 as usize == u && vin[0].0 as usize == u {
            couple_nodes += 2;
        }
    }
    couple_nodes as f64 / n as f64
}

/// Undirected distinct-neighbor adjacency, each row sorted ascending.
fn undirected_adjacency(snapshot: &NetworkSnapshot) -> Vec<Vec<u32>> {
    (0..snapshot.node_count())
        .map(|i| {
            snapshot
                .distinct_neighbors(i)
                .into_iter()
                .map(|x| x as u32)
                .collect()
        })
        .collect()
}

/// Share of fully mutual triads among connected triples.
///
/// A triple of nodes is *connected* when its undirected projection carries at
/// least two of the three possible links; it is *fully mutual* when all six
/// directed arcs exist. Returns 0 when the snapshot has no connected triple
/// (including `N < 3`).
pub fn mutual_triad_ratio(snapshot: &NetworkSnapshot) -> f64 {
    let n = snapshot.node_count();
    if n < 3 {
        return 0.0;
    }
    let adj = undirected_adjacency(snapshot);

    // Connected triples = Σ_v C(deg_v, 2) − 2·(undirected triangles):
    // a two-link triple is counted once at its center, a triangle three times.
    let mut cherries = 0u64;
    for row in &adj {
        let k = row.len() as u64;
        if k >= 2 {
            cherries += k * (k - 1) / 2;
        }
    }

    let mut triangles = 0u64;
    let mut mutual = 0u64;
    for u in 0..n {
        for &v in &adj[u] {
            let v = v as usize;
            if v <= u {
                continue;
            }
            // Common neighbors w with w > v close a triangle u < v < w
            // exactly once.
            let (mut a, mut b) = (0usize, 0usize);
            let (ru, rv) = (&adj[u], &adj[v]);
            while a < ru.len() && b < rv.len() {
                let (x, y) = (ru[a], rv[b]);
                if x < y {
                    a += 1;
                } else if y < x {
                    b += 1;
                } else {
                    if x as usize > v {
                        triangles += 1;
                        let w = x as usize;
                        if snapshot.has_arc(u, v)
                            && snapshot.has_arc(v, u)
                            && snapshot.has_arc(u, w)
                            && snapshot.has_arc(w, u)
                            && snapshot.has_arc(v, w)
                            && snapshot.has_arc(w, v)
                        {
                            mutual += 1;
                        }
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
    }

    let connected = cherries - 2 * triangles;
    if connected == 0 {
        0.0
    } else {
        mutual as f64 / connected as f64
    }
}
