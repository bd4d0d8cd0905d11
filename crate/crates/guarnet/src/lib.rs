//! Analytics toolkit for directed loan-guarantee networks.
//!
//! A guarantee network is a directed graph over enterprises: an arc `g -> d`
//! records that enterprise `g` guarantees a bank loan of enterprise `d` for a
//! given amount. The crate provides four building blocks:
//!
//! - [`graph`] — immutable monthly snapshots ([`graph::NetworkSnapshot`]) and
//!   month-ordered series ([`graph::DynamicNetwork`]) with validation;
//! - [`metrics`] — the topology/financial indicator battery: degrees and
//!   density, discrete power-law tail fits, directed clustering, reciprocal
//!   couples and their rewired null model, weakly connected components, giant
//!   component geodesics, mutual triads, degree hubs, balance-sheet
//!   aggregates, and per-window time-series summaries;
//! - [`generator`] — calibrated synthetic snapshots and multi-month series
//!   (named presets included) for reproducible experiments;
//! - [`contagion`] — logistic (Fermi-rule) default cascades over guarantee
//!   arcs, seed-selection scenarios, node importance scores, and Monte Carlo
//!   sweeps.
//!
//! # Determinism
//!
//! Every randomized operation takes an explicit 64-bit seed and derives
//! per-month / per-run / per-node substreams from it ([`rng::derive_seed`]).
//! For a fixed seed and input, results are bitwise reproducible regardless of
//! thread count: parallel stages store per-unit results by index and reduce
//! sequentially.
//!
//! Monetary fields are denominated in units of ten thousand RMB.

pub mod contagion;
pub mod generator;
pub mod graph;
pub mod metrics;
pub mod month;
pub mod rng;

pub use contagion::{
    fermi_probability, importance_scores, monte_carlo, run_cascade, scenario_sweep, select_seeds,
    CascadeOutcome, ContagionError, ContagionParams, MonteCarloSummary, SeedScenario,
    ThresholdMode,
};
pub use graph::{
    build_snapshot, neighbors, phase_partition, Direction, DynamicNetwork, Enterprise, GraphError,
    GuaranteeEdge, NetworkSnapshot, PhasePartition,
};
pub use month::{canonical_windows, Month, MonthError, PhaseWindow};
