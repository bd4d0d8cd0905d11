//! Default-cascade simulation on guarantee networks.
//!
//! An enterprise defaults with logistic probability
//! `P = 1 / (1 + exp(-k * ((L + S) / A - delta)))` where `L` and `A` are its
//! liability and asset, `S` is the stress inherited from defaulted debtors it
//! guarantees (the sum of those guarantee amounts), `k` is the steepness and
//! `delta` the leverage threshold. Defaults propagate *against* arc
//! direction: when a debtor fails, each of its guarantors is re-evaluated
//! with the debtor's guaranteed amount added to its stress.
//!
//! A cascade starts from an explicit seed set (plus any enterprises already
//! flagged defaulted in the snapshot) and proceeds in synchronous steps:
//! every candidate is evaluated against the stress accumulated through the
//! previous step, in ascending node order, one uniform draw per evaluation.
//! The run stops at the first step that produces no new default, which bounds
//! the step count by the node count.
//!
//! Two switches vary the evaluation rule:
//!
//! - [`ContagionParams::evaluate_all`] re-evaluates *every* still-solvent
//!   enterprise each step instead of only the guarantors of fresh defaults,
//!   so defaults can arise spontaneously from baseline leverage alone;
//! - [`ContagionParams::coupled`] draws one uniform per node up front and
//!   reuses it at every evaluation of that node. Because the default
//!   probability is non-decreasing in stress, coupled runs are monotone in
//!   the seed set: growing the seeds can only grow the final defaulted set.
//!
//! Seeds are picked by [`select_seeds`] under four scenarios (uniform random,
//! highest in-degree, largest loan, highest cascade importance), and
//! [`monte_carlo`] / [`scenario_sweep`] aggregate final default ratios over
//! repeated runs with per-run derived seeds, reducing in run order so results
//! are bitwise reproducible regardless of thread count.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NetworkSnapshot;
use crate::metrics::financial_aggregates;
use crate::month::Month;
use crate::rng::{derive_seed, rng_from_seed};

/// Default logistic steepness `k`.
pub const DEFAULT_STEEPNESS: f64 = 1.0;
/// Default leverage threshold `delta`.
pub const DEFAULT_THRESHOLD: f64 = 0.5;
/// Default number of single-seed cascades averaged per node by
/// [`importance_scores`].
pub const DEFAULT_IMPORTANCE_RUNS: u32 = 50;

const TAG_RUN: u64 = 1;
const TAG_SEED_PICK: u64 = 2;
const TAG_IMPORTANCE: u64 = 3;
const TAG_SCENARIO: u64 = 4;

/// Failure modes of cascade configuration and execution.
#[derive(Debug, Error)]
pub enum ContagionError {
    #[error("cascade seed index {index} is out of range for {node_count} nodes")]
    SeedOutOfRange { index: usize, node_count: usize },
    #[error("seed fraction must be in (0, 1], got {fraction}")]
    InvalidSeedFraction { fraction: f64 },
    #[error("steepness must be a positive finite number, got {value}")]
    InvalidSteepness { value: f64 },
    #[error("fixed default threshold must be finite, got {value}")]
    InvalidThreshold { value: f64 },
    #[error("scenario `top_importance` needs a precomputed importance table")]
    MissingImportance,
    #[error("importance table covers {actual} nodes but the snapshot has {expected}")]
    ImportanceLength { expected: usize, actual: usize },
    #[error("at least one run is required")]
    ZeroRuns,
    #[error("snapshot for {month} has no enterprises")]
    EmptySnapshot { month: Month },
    #[error(
        "unknown seed scenario `{name}` (expected one of: random, top_in_degree, top_loan, top_importance)"
    )]
    UnknownScenario { name: String },
}

/// How the leverage threshold `delta` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// A fixed threshold value.
    Fixed(f64),
    /// Use the snapshot's mean leverage (mean of per-node `L / A`).
    MeanLeverage,
}

impl Default for ThresholdMode {
    fn default() -> Self {
        ThresholdMode::Fixed(DEFAULT_THRESHOLD)
    }
}

/// Knobs of the cascade rule. `Default` gives the standard model: `k = 1`,
/// fixed threshold `0.5`, frontier evaluation, independent draws.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContagionParams {
    /// Logistic steepness `k`; large values make the rule near-deterministic.
    pub steepness: f64,
    /// Leverage threshold `delta`.
    pub threshold: ThresholdMode,
    /// Evaluate every still-solvent enterprise each step instead of only the
    /// guarantors of the newest defaults.
    pub evaluate_all: bool,
    /// Reuse one uniform per node across all of its evaluations, making the
    /// final defaulted set monotone in the seed set.
    pub coupled: bool,
}

impl Default for ContagionParams {
    fn default() -> Self {
        ContagionParams {
            steepness: DEFAULT_STEEPNESS,
            threshold: ThresholdMode::default(),
            evaluate_all: false,
            coupled: false,
        }
    }
}

impl ContagionParams {
    pub fn validate(&self) -> Result<(), ContagionError> {
        if !(self.steepness.is_finite() && self.steepness > 0.0) {
            return Err(ContagionError::InvalidSteepness {
                value: self.steepness,
            });
        }
        if let ThresholdMode::Fixed(value) = self.threshold {
            if !value.is_finite() {
                return Err(ContagionError::InvalidThreshold { value });
            }
        }
        Ok(())
    }

    /// The concrete threshold used on `snapshot`.
    pub fn resolve_threshold(&self, snapshot: &NetworkSnapshot) -> f64 {
        match self.threshold {
            ThresholdMode::Fixed(value) => value,
            ThresholdMode::MeanLeverage => financial_aggregates(snapshot).mean_leverage,
        }
    }
}

/// Logistic default probability `1 / (1 + exp(-k * (exposure - threshold)))`,
/// with `exposure = (L + S) / A`. Exactly `0.5` when the exposure sits on the
/// threshold, non-decreasing in the exposure, and saturating to `1.0` in
/// 64-bit arithmetic once `k * (exposure - threshold)` exceeds about 37.
pub fn fermi_probability(steepness: f64, exposure: f64, threshold: f64) -> f64 {
    1.0 / (1.0 + (-steepness * (exposure - threshold)).exp())
}

/// Result of one cascade: the final state and the per-step default counts.
///
/// `per_step[0]` counts the initial defaults (explicit seeds plus enterprises
/// already flagged in the snapshot); `per_step[t]` for `t >= 1` counts the
/// defaults produced at step `t`. The entries sum to the final default count
/// and no trailing zero entry is recorded.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeOutcome {
    /// Final default flag per node index.
    pub defaulted: Vec<bool>,
    /// Default counts per step, starting from the initial state.
    pub per_step: Vec<usize>,
}

impl CascadeOutcome {
    /// Number of nodes defaulted before any contagion step.
    pub fn initial_count(&self) -> usize {
        self.per_step.first().copied().unwrap_or(0)
    }

    /// Total number of defaulted nodes at termination.
    pub fn final_count(&self) -> usize {
        self.per_step.iter().sum()
    }

    /// Number of contagion steps executed (excludes the initial state).
    pub fn cascade_steps(&self) -> usize {
        self.per_step.len().saturating_sub(1)
    }

    /// Defaults caused by contagion, i.e. beyond the initial state.
    pub fn new_default_count(&self) -> usize {
        self.final_count() - self.initial_count()
    }
}

/// Runs one default cascade from `seeds` (node indices) on top of any
/// enterprises already flagged defaulted in the snapshot.
///
/// Candidates are evaluated in ascending node order against the stress
/// accumulated through the previous step; defaults within a step do not
/// stress their guarantors until the next step. Execution is fully
/// deterministic given `(snapshot, seeds, params, seed)`.
pub fn run_cascade(
    snapshot: &NetworkSnapshot,
    seeds: &[usize],
    params: &ContagionParams,
    seed: u64,
) -> Result<CascadeOutcome, ContagionError> {
    params.validate()?;
    let n = snapshot.node_count();
    for &s in seeds {
        if s >= n {
            return Err(ContagionError::SeedOutOfRange {
                index: s,
                node_count: n,
            });
        }
    }
    let threshold = params.resolve_threshold(snapshot);
    let mut rng = rng_from_seed(seed);
    // In coupled mode every node gets its uniform up front, so the draw a
    // node sees never depends on the seed set or on evaluation order.
    let coupled_uniforms: Option<Vec<f64>> = params
        .coupled
        .then(|| (0..n).map(|_| rng.gen::<f64>()).collect());

    let mut defaulted: Vec<bool> = (0..n).map(|i| snapshot.enterprise(i).defaulted).collect();
    for &s in seeds {
        defaulted[s] = true;
    }
    let mut frontier: Vec<usize> = (0..n).filter(|&i| defaulted[i]).collect();
    let mut per_step = vec![frontier.len()];

    let mut stress = vec![0.0f64; n];
    for (g, d, amount) in snapshot.arcs() {
        if defaulted[d] {
            stress[g] += amount;
        }
    }

    loop {
        let candidates: Vec<usize> = if params.evaluate_all {
            (0..n).filter(|&i| !defaulted[i]).collect()
        } else {
            let mut c: Vec<usize> = frontier
                .iter()
                .flat_map(|&d| snapshot.guarantors_of(d).iter().map(|&(g, _)| g as usize))
                .filter(|&g| !defaulted[g])
                .collect();
            c.sort_unstable();
            c.dedup();
            c
        };
        if candidates.is_empty() {
            break;
        }

        let mut newly = Vec::new();
        for &i in &candidates {
            let e = snapshot.enterprise(i);
            let exposure = (e.liability + stress[i]) / e.asset;
            let p = fermi_probability(params.steepness, exposure, threshold);
            let hit = match &coupled_uniforms {
                Some(uniforms) => uniforms[i] < p,
                None => rng.gen::<f64>() < p,
            };
            if hit {
                newly.push(i);
            }
        }
        if newly.is_empty() {
            break;
        }
        for &i in &newly {
            defaulted[i] = true;
        }
        for &i in &newly {
            for &(g, amount) in snapshot.guarantors_of(i) {
                stress[g as usize] += amount;
            }
        }
        per_step.push(newly.len());
        frontier = newly;
    }

    Ok(CascadeOutcome {
        defaulted,
        per_step,
    })
}

/// How initial defaulters are picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedScenario {
    /// Uniformly without replacement.
    Random,
    /// Enterprises with the most guarantors.
    TopInDegree,
    /// Enterprises with the largest bank loan.
    TopLoan,
    /// Enterprises whose lone default drags down the most others, per a
    /// precomputed [`importance_scores`] table.
    TopImportance,
}

impl SeedScenario {
    /// All scenarios, in sweep order.
    pub fn all() -> [SeedScenario; 4] {
        [
            SeedScenario::Random,
            SeedScenario::TopInDegree,
            SeedScenario::TopLoan,
            SeedScenario::TopImportance,
        ]
    }

    pub fn label(&self) -> &'static str {
        match self {
            SeedScenario::Random => "random",
            SeedScenario::TopInDegree => "top_in_degree",
            SeedScenario::TopLoan => "top_loan",
            SeedScenario::TopImportance => "top_importance",
        }
    }
}

impl fmt::Display for SeedScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SeedScenario {
    type Err = ContagionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(SeedScenario::Random),
            "top_in_degree" => Ok(SeedScenario::TopInDegree),
            "top_loan" => Ok(SeedScenario::TopLoan),
            "top_importance" => Ok(SeedScenario::TopImportance),
            other => Err(ContagionError::UnknownScenario {
                name: other.to_string(),
            }),
        }
    }
}

/// Number of seeds a fraction selects: `ceil(fraction * n)`, capped at `n`.
pub fn seed_count_for(fraction: f64, node_count: usize) -> usize {
    ((fraction * node_count as f64).ceil() as usize).min(node_count)
}

/// Picks `ceil(fraction * n)` seed nodes under `scenario`, returned in
/// ascending index order.
///
/// Ranked scenarios break score ties by ascending node index (node indices
/// follow ascending enterprise id). `importance` is consulted only by
/// [`SeedScenario::TopImportance`] and must then cover every node; `seed`
/// is consumed only by [`SeedScenario::Random`].
pub fn select_seeds(
    snapshot: &NetworkSnapshot,
    scenario: SeedScenario,
    fraction: f64,
    importance: Option<&[f64]>,
    seed: u64,
) -> Result<Vec<usize>, ContagionError> {
    if !(fraction.is_finite() && 0.0 < fraction && fraction <= 1.0) {
        return Err(ContagionError::InvalidSeedFraction { fraction });
    }
    let n = snapshot.node_count();
    let count = seed_count_for(fraction, n);
    let mut picked = match scenario {
        SeedScenario::Random => {
            let mut rng = rng_from_seed(seed);
            let mut indices: Vec<usize> = (0..n).collect();
            for i in 0..count {
                let j = rng.gen_range(i..n);
                indices.swap(i, j);
            }
            indices.truncate(count);
            indices
        }
        SeedScenario::TopInDegree => {
            let mut indices: Vec<usize> = (0..n).collect();
            indices.sort_unstable_by_key(|&i| (Reverse(snapshot.in_degree(i)), i));
            indices.truncate(count);
            indices
        }
        SeedScenario::TopLoan => {
            let mut indices: Vec<usize> = (0..n).collect();
            indices.sort_unstable_by(|&a, &b| {
                snapshot
                    .enterprise(b)
                    .loan
                    .total_cmp(&snapshot.enterprise(a).loan)
                    .then(a.cmp(&b))
            });
            indices.truncate(count);
            indices
        }
        SeedScenario::TopImportance => {
            let scores = importance.ok_or(ContagionError::MissingImportance)?;
            if scores.len() != n {
                return Err(ContagionError::ImportanceLength {
                    expected: n,
                    actual: scores.len(),
                });
            }
            let mut indices: Vec<usize> = (0..n).collect();
            indices.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
            indices.truncate(count);
            indices
        }
    };
    picked.sort_unstable();
    Ok(picked)
}

/// Mean contagion damage of each node: the average, over `runs_per_node`
/// single-seed cascades, of how many *additional* enterprises default when
/// that node alone is seeded.
///
/// Nodes are processed in parallel but every cascade seed is derived from
/// `(seed, node, run)`, so the table is bitwise reproducible.
pub fn importance_scores(
    snapshot: &NetworkSnapshot,
    params: &ContagionParams,
    runs_per_node: u32,
    seed: u64,
) -> Result<Vec<f64>, ContagionError> {
    params.validate()?;
    if runs_per_node == 0 {
        return Err(ContagionError::ZeroRuns);
    }
    (0..snapshot.node_count())
        .into_par_iter()
        .map(|v| {
            let mut total = 0usize;
            for r in 0..runs_per_node {
                let run_seed = derive_seed(seed, &[TAG_IMPORTANCE, v as u64, u64::from(r)]);
                let outcome = run_cascade(snapshot, &[v], params, run_seed)?;
                total += outcome.new_default_count();
            }
            Ok(total as f64 / f64::from(runs_per_node))
        })
        .collect()
}

/// Aggregate of repeated cascades under one seeding scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub scenario: SeedScenario,
    /// Requested seed fraction of the node count.
    pub seed_fraction: f64,
    /// Seeds per run, `ceil(seed_fraction * n)`.
    pub seed_count: usize,
    pub runs: u32,
    /// Mean over runs of `final defaults / n`.
    pub mean_final_ratio: f64,
    /// Sample standard deviation of the final ratio; `None` for a single run.
    pub sd_final_ratio: Option<f64>,
    /// Mean over runs of `(final defaults - initial defaults) / n`.
    pub mean_net_ratio: f64,
}

/// Runs `runs` cascades under `scenario` and aggregates final default ratios.
///
/// Ranked scenarios reuse one fixed seed set; the random scenario redraws
/// seeds every run from a per-run derived stream. Runs execute in parallel,
/// results are stored by run index and reduced sequentially, so the summary
/// is bitwise reproducible for a fixed `(snapshot, arguments, seed)`.
pub fn monte_carlo(
    snapshot: &NetworkSnapshot,
    scenario: SeedScenario,
    fraction: f64,
    runs: u32,
    params: &ContagionParams,
    importance: Option<&[f64]>,
    seed: u64,
) -> Result<MonteCarloSummary, ContagionError> {
    params.validate()?;
    if runs == 0 {
        return Err(ContagionError::ZeroRuns);
    }
    let n = snapshot.node_count();
    if n == 0 {
        return Err(ContagionError::EmptySnapshot {
            month: snapshot.month(),
        });
    }
    let fixed_seeds = match scenario {
        SeedScenario::Random => None,
        _ => Some(select_seeds(snapshot, scenario, fraction, importance, 0)?),
    };
    if fixed_seeds.is_none() {
        // Surface a bad fraction before spawning any runs.
        seed_count_checked(fraction, n)?;
    }

    let ratios: Vec<(f64, f64)> = (0..runs)
        .into_par_iter()
        .map(|r| -> Result<(f64, f64), ContagionError> {
            let run_seeds;
            let seeds: &[usize] = match &fixed_seeds {
                Some(s) => s,
                None => {
                    run_seeds = select_seeds(
                        snapshot,
                        SeedScenario::Random,
                        fraction,
                        None,
                        derive_seed(seed, &[TAG_SEED_PICK, u64::from(r)]),
                    )?;
                    &run_seeds
                }
            };
            let outcome = run_cascade(
                snapshot,
                seeds,
                params,
                derive_seed(seed, &[TAG_RUN, u64::from(r)]),
            )?;
            Ok((
                outcome.final_count() as f64 / n as f64,
                outcome.new_default_count() as f64 / n as f64,
            ))
        })
        .collect::<Result<_, _>>()?;

    let runs_f = f64::from(runs);
    let mean_final_ratio = ratios.iter().map(|&(f, _)| f).sum::<f64>() / runs_f;
    let mean_net_ratio = ratios.iter().map(|&(_, net)| net).sum::<f64>() / runs_f;
    let sd_final_ratio = (runs >= 2).then(|| {
        let ss: f64 = ratios
            .iter()
            .map(|&(f, _)| (f - mean_final_ratio).powi(2))
            .sum();
        (ss / (runs_f - 1.0)).sqrt()
    });

    Ok(MonteCarloSummary {
        scenario,
        seed_fraction: fraction,
        seed_count: seed_count_for(fraction, n),
        runs,
        mean_final_ratio,
        sd_final_ratio,
        mean_net_ratio,
    })
}

fn seed_count_checked(fraction: f64, n: usize) -> Result<usize, ContagionError> {
    if !(fraction.is_finite() && 0.0 < fraction && fraction <= 1.0) {
        return Err(ContagionError::InvalidSeedFraction { fraction });
    }
    Ok(seed_count_for(fraction, n))
}

/// Runs [`monte_carlo`] for every scenario in [`SeedScenario::all`] order,
/// computing the importance table once and giving each scenario its own
/// derived seed stream.
pub fn scenario_sweep(
    snapshot: &NetworkSnapshot,
    fraction: f64,
    runs: u32,
    params: &ContagionParams,
    importance_runs: u32,
    seed: u64,
) -> Result<Vec<MonteCarloSummary>, ContagionError> {
    let importance = importance_scores(
        snapshot,
        params,
        importance_runs,
        derive_seed(seed, &[TAG_IMPORTANCE]),
    )?;
    SeedScenario::all()
        .iter()
        .enumerate()
        .map(|(i, &scenario)| {
            monte_carlo(
                snapshot,
                scenario,
                fraction,
                runs,
                params,
                Some(&importance),
                derive_seed(seed, &[TAG_SCENARIO, i as u64]),
            )
        })
        .collect()
}
