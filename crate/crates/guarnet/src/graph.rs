//! Snapshot data model for directed guarantee networks.
//!
//! An arc `g -> d` means enterprise `g` guarantees a loan of enterprise `d`
//! for `amount` (ten-thousand RMB). A [`NetworkSnapshot`] is an immutable
//! one-month view with dual (outgoing/incoming) weighted adjacency; a
//! [`DynamicNetwork`] is a strictly month-ordered series of snapshots.
//!
//! Snapshots intern enterprise ids to dense indices at build time. All
//! adjacency lists are sorted by neighbor index, so iteration order — and
//! therefore every downstream seeded computation — is deterministic.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::month::{Month, PhaseWindow};

/// One enterprise's balance-sheet row for a given month.
///
/// Monetary fields are in units of ten thousand RMB. `asset` must be strictly
/// positive; the remaining monetary fields must be finite and non-negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enterprise {
    pub id: String,
    pub asset: f64,
    pub liability: f64,
    pub loan: f64,
    pub credit_line: f64,
    pub listed: bool,
    /// Initial default state for contagion runs; ordinarily `false`.
    #[serde(default)]
    pub defaulted: bool,
}

impl Enterprise {
    pub fn new(
        id: impl Into<String>,
        asset: f64,
        liability: f64,
        loan: f64,
        credit_line: f64,
        listed: bool,
    ) -> Self {
        Enterprise {
            id: id.into(),
            asset,
            liability,
            loan,
            credit_line,
            listed,
            defaulted: false,
        }
    }

    /// Debt-to-asset ratio `L / A`.
    pub fn leverage(&self) -> f64 {
        self.liability / self.asset
    }
}

/// One guarantee relation: `guarantor_id` backs a loan of `debtor_id`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeEdge {
    pub guarantor_id: String,
    pub debtor_id: String,
    /// Guaranteed amount, ten-thousand RMB.
    pub amount: f64,
    pub month: Month,
}

impl GuaranteeEdge {
    pub fn new(
        guarantor_id: impl Into<String>,
        debtor_id: impl Into<String>,
        amount: f64,
        month: Month,
    ) -> Self {
        GuaranteeEdge {
            guarantor_id: guarantor_id.into(),
            debtor_id: debtor_id.into(),
            amount,
            month,
        }
    }
}

/// Which adjacency list of a node to read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Enterprises the node guarantees (outgoing arcs).
    Debtors,
    /// Enterprises guaranteeing the node (incoming arcs).
    Guarantors,
}

/// Validation and lookup errors for snapshot construction and access.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate enterprise id {id:?} in month {month}")]
    DuplicateEnterprise { id: String, month: Month },
    #[error("enterprise {id:?} has non-positive asset {asset}")]
    NonPositiveAsset { id: String, asset: f64 },
    #[error("enterprise {id:?} has invalid {field} {value}: must be finite and >= 0")]
    InvalidAttribute {
        id: String,
        field: &'static str,
        value: f64,
    },
    #[error("edge {guarantor:?} -> {debtor:?} references unknown enterprise {unknown:?}")]
    UnknownEndpoint {
        guarantor: String,
        debtor: String,
        unknown: String,
    },
    #[error("self-guarantee loop on enterprise {id:?}")]
    SelfLoop { id: String },
    #[error(
        "edge {guarantor:?} -> {debtor:?} has invalid amount {amount}: must be finite and >= 0"
    )]
    InvalidAmount {
        guarantor: String,
        debtor: String,
        amount: f64,
    },
    #[error("edge {guarantor:?} -> {debtor:?} is stamped {edge_month} but the snapshot month is {snapshot_month}")]
    EdgeMonthMismatch {
        guarantor: String,
        debtor: String,
        edge_month: Month,
        snapshot_month: Month,
    },
    #[error("snapshot months must be strictly increasing: {prev} followed by {next}")]
    UnorderedMonths { prev: Month, next: Month },
    #[error("phase windows {a:?} and {b:?} overlap")]
    OverlappingWindows { a: String, b: String },
    #[error("unknown enterprise id {id:?}")]
    UnknownId { id: String },
}

/// Immutable one-month guarantee network.
///
/// Nodes are indexed `0..node_count()` in the order the enterprises were
/// supplied to [`build_snapshot`]. Parallel edges are merged at build time by
/// summing amounts, so at most one arc exists per ordered pair.
#[derive(Clone, Debug)]
pub struct NetworkSnapshot {
    month: Month,
    enterprises: Vec<Enterprise>,
    index_by_id: HashMap<String, u32>,
    /// `out_adj[g]` = sorted `(debtor, amount)` pairs.
    out_adj: Vec<Vec<(u32, f64)>>,
    /// `in_adj[d]` = sorted `(guarantor, amount)` pairs.
    in_adj: Vec<Vec<(u32, f64)>>,
    edge_count: usize,
}

impl NetworkSnapshot {
    pub fn month(&self) -> Month {
        self.month
    }

    pub fn node_count(&self) -> usize {
        self.enterprises.len()
    }

    /// Number of distinct directed arcs (parallel inputs merged).
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn enterprises(&self) -> &[Enterprise] {
        &self.enterprises
    }

    pub fn enterprise(&self, node: usize) -> &Enterprise {
        &self.enterprises[node]
    }

    pub fn id(&self, node: usize) -> &str {
        &self.enterprises[node].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index_by_id.get(id).map(|&i| i as usize)
    }

    /// `(debtor, amount)` pairs the node guarantees, sorted by debtor index.
    pub fn debtors_of(&self, node: usize) -> &[(u32, f64)] {
        &self.out_adj[node]
    }

    /// `(guarantor, amount)` pairs backing the node, sorted by guarantor index.
    pub fn guarantors_of(&self, node: usize) -> &[(u32, f64)] {
        &self.in_adj[node]
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_adj[node].len()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.in_adj[node].len()
    }

    /// True if the arc `guarantor -> debtor` exists.
    pub fn has_arc(&self, guarantor: usize, debtor: usize) -> bool {
        self.out_adj[guarantor]
            .binary_search_by_key(&(debtor as u32), |&(d, _)| d)
            .is_ok()
    }

    /// All arcs as `(guarantor, debtor, amount)`, ordered by (guarantor, debtor).
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out_adj.iter().enumerate().flat_map(|(g, debtors)| {
            debtors
                .iter()
                .map(move |&(d, amount)| (g, d as usize, amount))
        })
    }

    /// Distinct neighbors of `node` (union of guarantors and debtors),
    /// sorted ascending. Self is never included (self-loops are rejected).
    pub fn distinct_neighbors(&self, node: usize) -> Vec<usize> {
        let out = &self.out_adj[node];
        let inn = &self.in_adj[node];
        let mut merged = Vec::with_capacity(out.len() + inn.len());
        let (mut i, mut j) = (0, 0);
        while i < out.len() || j < inn.len() {
            let next = match (out.get(i), inn.get(j)) {
                (Some(&(a, _)), Some(&(b, _))) => {
                    if a < b {
                        i += 1;
                        a
                    } else if b < a {
                        j += 1;
                        b
                    } else {
                        i += 1;
                        j += 1;
                        a
                    }
                }
                (Some(&(a, _)), None) => {
                    i += 1;
                    a
                }
                (None, Some(&(b, _))) => {
                    j += 1;
                    b
                }
                (None, None) => break,
            };
            merged.push(next as usize);
        }
        merged
    }

    /// Number of distinct neighbors (union of both directions).
    pub fn distinct_neighbor_count(&self, node: usize) -> usize {
        self.distinct_neighbors(node).len()
    }
}

/// Builds a validated snapshot from enterprise rows and guarantee edges.
///
/// Validation: unique ids, strictly positive finite assets, finite
/// non-negative monetary attributes and amounts, no self-loops, endpoints
/// resolving to supplied enterprises, and edge month stamps matching `month`.
/// Parallel edges on the same ordered pair are merged by summing amounts.
/// Isolated enterprises are retained (an enterprise can leave the guarantee
/// web while staying in the registry).
pub fn build_snapshot(
    month: Month,
    enterprises: Vec<Enterprise>,
    edges: &[GuaranteeEdge],
) -> Result<NetworkSnapshot, GraphError> {
    let mut index_by_id = HashMap::with_capacity(enterprises.len());
    for (idx, e) in enterprises.iter().enumerate() {
        if !e.asset.is_finite() || e.asset <= 0.0 {
            return Err(GraphError::NonPositiveAsset {
                id: e.id.clone(),
                asset: e.asset,
            });
        }
        for (field, value) in [
            ("liability", e.liability),
            ("loan", e.loan),
            ("credit_line", e.credit_line),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(GraphError::InvalidAttribute {
                    id: e.id.clone(),
                    field,
                    value,
                });
            }
        }
        if index_by_id.insert(e.id.clone(), idx as u32).is_some() {
            return Err(GraphError::DuplicateEnterprise {
                id: e.id.clone(),
                month,
            });
        }
    }

    let mut resolved: Vec<(u32, u32, f64)> = Vec::with_capacity(edges.len());
    for edge in edges {
        if edge.month != month {
            return Err(GraphError::EdgeMonthMismatch {
                guarantor: edge.guarantor_id.clone(),
                debtor: edge.debtor_id.clone(),
                edge_month: edge.month,
                snapshot_month: month,
            });
        }
        if !edge.amount.is_finite() || edge.amount < 0.0 {
            return Err(GraphError::InvalidAmount {
                guarantor: edge.guarantor_id.clone(),
                debtor: edge.debtor_id.clone(),
                amount: edge.amount,
            });
        }
        if edge.guarantor_id == edge.debtor_id {
            return Err(GraphError::SelfLoop {
                id: edge.guarantor_id.clone(),
            });
        }
        let lookup = |id: &str| {
            index_by_id
                .get(id)
                .copied()
                .ok_or_else(|| GraphError::UnknownEndpoint {
                    guarantor: edge.guarantor_id.clone(),
                    debtor: edge.debtor_id.clone(),
                    unknown: id.to_string(),
                })
        };
        let g = lookup(&edge.guarantor_id)?;
        let d = lookup(&edge.debtor_id)?;
        resolved.push((g, d, edge.amount));
    }

    // Stable sort keeps input order within an ordered pair, so duplicate
    // amounts merge in a reproducible summation order.
    resolved.sort_by_key(|&(g, d, _)| (g, d));

    let n = enterprises.len();
    let mut out_adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    let mut in_adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    let mut edge_count = 0usize;
    let mut k = 0;
    while k < resolved.len() {
        let (g, d, mut amount) = resolved[k];
        k += 1;
        while k < resolved.len() && resolved[k].0 == g && resolved[k].1 == d {
            amount += resolved[k].2;
            k += 1;
        }
        out_adj[g as usize].push((d, amount));
        in_adj[d as usize].push((g, amount));
        edge_count += 1;
    }
    // out_adj rows are already sorted by debtor (sort order above); in_adj rows
    // received guarantors in ascending order for the same reason.

    Ok(NetworkSnapshot {
        month,
        enterprises,
        index_by_id,
        out_adj,
        in_adj,
        edge_count,
    })
}

/// Adjacency of one enterprise by id: its debtors or its guarantors, as
/// `(neighbor id, amount)` pairs sorted by neighbor index.
pub fn neighbors<'a>(
    snapshot: &'a NetworkSnapshot,
    id: &str,
    direction: Direction,
) -> Result<Vec<(&'a str, f64)>, GraphError> {
    let node = snapshot
        .index_of(id)
        .ok_or_else(|| GraphError::UnknownId { id: id.to_string() })?;
    let list = match direction {
        Direction::Debtors => snapshot.debtors_of(node),
        Direction::Guarantors => snapshot.guarantors_of(node),
    };
    Ok(list
        .iter()
        .map(|&(other, amount)| (snapshot.id(other as usize), amount))
        .collect())
}

/// A strictly month-ordered series of snapshots. Enterprise ids are stable
/// across months: the same id always denotes the same enterprise.
#[derive(Clone, Debug, Default)]
pub struct DynamicNetwork {
    snapshots: Vec<NetworkSnapshot>,
}

impl DynamicNetwork {
    pub fn new(snapshots: Vec<NetworkSnapshot>) -> Result<Self, GraphError> {
        for pair in snapshots.windows(2) {
            if pair[0].month() >= pair[1].month() {
                return Err(GraphError::UnorderedMonths {
                    prev: pair[0].month(),
                    next: pair[1].month(),
                });
            }
        }
        Ok(DynamicNetwork { snapshots })
    }

    pub fn snapshots(&self) -> &[NetworkSnapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn months(&self) -> impl Iterator<Item = Month> + '_ {
        self.snapshots.iter().map(|s| s.month())
    }
}

/// Snapshot indices grouped by phase window, plus the months no window claims.
#[derive(Clone, Debug)]
pub struct PhasePartition {
    pub windows: Vec<PhaseWindow>,
    /// `members[w]` = indices into the dynamic network, month-ascending,
    /// parallel to `windows`.
    pub members: Vec<Vec<usize>>,
    /// Months present in the series but outside every window.
    pub unassigned: Vec<Month>,
}

/// Assigns each snapshot to the unique window containing its month.
///
/// Windows must be pairwise non-overlapping. Snapshots outside every window
/// are reported in [`PhasePartition::unassigned`], not dropped silently.
pub fn phase_partition(
    dynamic: &DynamicNetwork,
    windows: &[PhaseWindow],
) -> Result<PhasePartition, GraphError> {
    for (i, a) in windows.iter().enumerate() {
        for b in &windows[i + 1..] {
            if a.overlaps(b) {
                return Err(GraphError::OverlappingWindows {
                    a: a.label.clone(),
                    b: b.label.clone(),
                });
            }
        }
    }
    let mut members = vec![Vec::new(); windows.len()];
    let mut unassigned = Vec::new();
    for (idx, snapshot) in dynamic.snapshots().iter().enumerate() {
        match windows.iter().position(|w| w.contains(snapshot.month())) {
            Some(w) => members[w].push(idx),
            None => unassigned.push(snapshot.month()),
        }
    }
    Ok(PhasePartition {
        windows: windows.to_vec(),
        members,
        unassigned,
    })
}
