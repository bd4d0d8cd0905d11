//! Synthetic guarantee-network generation.
//!
//! A generated snapshot is assembled from three layers:
//!
//! 1. **Reciprocal couples** — a configured share of nodes is reserved for
//!    isolated mutually-guaranteeing pairs, placed first in the id space.
//! 2. **A heavy-tailed core** — every other node draws an out-degree (and,
//!    independently, an in-degree) that is 0 with some probability and
//!    zeta-distributed otherwise; the zero probability is solved so the
//!    expected total matches the arc budget, and small promotions and
//!    demotions between degree 0 and 1 make both totals hit the budget
//!    exactly without touching the tail. Arcs come from uniform stub
//!    matching with self-loops and duplicates erased. A coupling knob
//!    rank-matches the largest in-degree values onto the largest
//!    guarantors so the two hub sets overlap.
//! 3. **Balance sheets** — log-normal liabilities, loans, and credit
//!    lines; a log-normal leverage ratio sets assets via
//!    `asset = liability / leverage`, recalibrated until the mean
//!    leverage lands near its target. Each arc carries an equal share of
//!    the debtor's loan. All currency values are rounded to six
//!    significant digits when created, so text round-trips are exact.
//!
//! Everything is driven by one master seed through tagged sub-streams:
//! the same `(config, seed)` pair always yields the same network.

use std::collections::HashSet;

use rand::distributions::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, Zipf};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    build_snapshot, DynamicNetwork, Enterprise, GraphError, GuaranteeEdge, NetworkSnapshot,
};
use crate::metrics::powerlaw::hurwitz_zeta;
use crate::month::{canonical_windows, Month};
use crate::rng::{derive_seed, rng_from_seed};

/// Upper support bound for the zeta-tail degree draws. Far beyond any
/// realizable degree; the exact totals are enforced afterwards anyway.
const ZIPF_SUPPORT: u64 = 1_000_000_000;

/// Attempt budget for the leverage recalibration loop.
const MAX_CALIBRATION_ATTEMPTS: usize = 100;

// Sub-stream tags for seed derivation. Each randomized stage gets its own
// stream so stages stay decorrelated and insertion of a new stage never
// shifts the draws of an existing one.
const S_OUT_DEGREES: u64 = 1;
const S_IN_DEGREES: u64 = 2;
const S_EQUALIZE_OUT: u64 = 3;
const S_EQUALIZE_IN: u64 = 4;
const S_HUB_MATCH: u64 = 5;
const S_STUBS: u64 = 6;
const S_LIABILITY: u64 = 7;
const S_LEVERAGE: u64 = 8;
const S_LOAN: u64 = 9;
const S_CREDIT: u64 = 10;
const S_LISTED: u64 = 11;
const S_MONTH: u64 = 12;

/// Everything needed to synthesize one monthly snapshot.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Preset or scenario name, carried into diagnostics.
    pub label: String,
    /// Month stamped on the snapshot.
    pub month: Month,
    /// Number of enterprises.
    pub node_count: usize,
    /// Target arcs per node `E / N`.
    pub avg_degree: f64,
    /// Tail exponent of the in-degree distribution (must exceed 2).
    pub lambda_in: f64,
    /// Tail exponent of the out-degree distribution (must exceed 2).
    pub lambda_out: f64,
    /// Share of nodes reserved for isolated mutual-guarantee pairs.
    pub couple_ratio: f64,
    /// How strongly the biggest guarantors also attract guarantees:
    /// the fraction of top-percentile hub slots that are rank-matched
    /// between the out- and in-degree sequences (0 = independent).
    pub hub_coupling: f64,
    /// Mean liability per enterprise (ten-thousand-unit currency).
    pub mean_liability: f64,
    /// Mean outstanding loan per enterprise.
    pub mean_loan: f64,
    /// Mean credit line per enterprise.
    pub mean_credit_line: f64,
    /// Target mean of the per-enterprise liability/asset ratio.
    pub target_leverage: f64,
    /// Fraction of enterprises flagged as listed companies.
    pub listed_share: f64,
    /// Log-scale spread of the liability distribution.
    pub sigma_liability: f64,
    /// Log-scale spread of the loan distribution.
    pub sigma_loan: f64,
    /// Log-scale spread of the credit-line distribution.
    pub sigma_credit: f64,
    /// Log-scale spread of the leverage distribution.
    pub sigma_leverage: f64,
}

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("{field} must be a positive finite number, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("{field} must lie in [0, 1), got {value}")]
    OutOfUnitRange { field: &'static str, value: f64 },
    #[error("node_count must be at least 10, got {node_count}")]
    TooFewNodes { node_count: usize },
    #[error("{field} must exceed 2 so the degree mean is finite, got {value}")]
    ExponentTooSmall { field: &'static str, value: f64 },
    #[error(
        "avg_degree {avg_degree} cannot cover the couple share {couple_ratio}: \
         couples alone already exceed the arc budget"
    )]
    DegreeBelowCoupleShare { avg_degree: f64, couple_ratio: f64 },
    #[error(
        "residual mean degree {target:.4} exceeds the zeta-tail ceiling {ceiling:.4} \
         for {field}; raise the exponent or lower avg_degree"
    )]
    MeanDegreeUnreachable {
        field: &'static str,
        target: f64,
        ceiling: f64,
    },
    #[error("mean leverage missed its target in {attempts} calibration attempts")]
    LeverageCalibration { attempts: usize },
    #[error("unknown preset {name:?}; available: {available:?}")]
    UnknownPreset {
        name: String,
        available: Vec<&'static str>,
    },
    #[error("preset is not valid JSON: {0}")]
    PresetParse(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Rounds to six significant digits. Applied to every generated currency
/// value so that decimal text serialization round-trips bit-exactly.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    // Round via the decimal text form: scaling by a power of ten in binary
    // (e.g. `x * 1e-5`) injects up to an ulp of error, which would leave the
    // result off by one bit from what parsing the printed value yields.
    format!("{x:.5e}")
        .parse()
        .expect("formatted float reparses")
}

/// Mean of the zeta distribution `P(k) ∝ k^{−λ}` on `k ≥ 1`:
/// `ζ(λ−1) / ζ(λ)`. Finite only for `λ > 2`.
fn zeta_mean(lambda: f64) -> f64 {
    hurwitz_zeta(lambda - 1.0, 1.0) / hurwitz_zeta(lambda, 1.0)
}

impl GeneratorConfig {
    /// Validates ranges and cross-field feasibility.
    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.node_count < 10 {
            return Err(GeneratorError::TooFewNodes {
                node_count: self.node_count,
            });
        }
        for (field, value) in [
            ("avg_degree", self.avg_degree),
            ("mean_liability", self.mean_liability),
            ("mean_loan", self.mean_loan),
            ("mean_credit_line", self.mean_credit_line),
            ("target_leverage", self.target_leverage),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(GeneratorError::NonPositive { field, value });
            }
        }
        for (field, value) in [
            ("couple_ratio", self.couple_ratio),
            ("hub_coupling", self.hub_coupling),
            ("listed_share", self.listed_share),
        ] {
            if !(0.0..1.0).contains(&value) {
                return Err(GeneratorError::OutOfUnitRange { field, value });
            }
        }
        for (field, value) in [
            ("sigma_liability", self.sigma_liability),
            ("sigma_loan", self.sigma_loan),
            ("sigma_credit", self.sigma_credit),
            ("sigma_leverage", self.sigma_leverage),
        ] {
            if value < 0.0 || !value.is_finite() {
                return Err(GeneratorError::NonPositive { field, value });
            }
        }
        for (field, value) in [
            ("lambda_in", self.lambda_in),
            ("lambda_out", self.lambda_out),
        ] {
            if !value.is_finite() || value <= 2.0 {
                return Err(GeneratorError::ExponentTooSmall { field, value });
            }
        }
        let plan = DegreePlan::from_config(self)?;
        for (field, lambda) in [
            ("lambda_out", self.lambda_out),
            ("lambda_in", self.lambda_in),
        ] {
            let ceiling = zeta_mean(lambda);
            if plan.residual_mean() > ceiling {
                return Err(GeneratorError::MeanDegreeUnreachable {
                    field,
                    target: plan.residual_mean(),
                    ceiling,
                });
            }
        }
        Ok(())
    }
}

/// Integer arc budget derived from a config: how many nodes form couples
/// and how many arcs the heavy-tailed core must carry.
struct DegreePlan {
    couple_nodes: usize,
    core_nodes: usize,
    core_arcs: u64,
}

impl DegreePlan {
    fn from_config(config: &GeneratorConfig) -> Result<Self, GeneratorError> {
        let n = config.node_count;
        let pairs = (config.couple_ratio * n as f64 / 2.0).round() as usize;
        let couple_nodes = 2 * pairs;
        let total_arcs = (config.avg_degree * n as f64).round() as u64;
        // Each couple pair carries exactly two arcs.
        if (couple_nodes as u64) > total_arcs || couple_nodes >= n {
            return Err(GeneratorError::DegreeBelowCoupleShare {
                avg_degree: config.avg_degree,
                couple_ratio: config.couple_ratio,
            });
        }
        Ok(DegreePlan {
            couple_nodes,
            core_nodes: n - couple_nodes,
            core_arcs: total_arcs - couple_nodes as u64,
        })
    }

    fn residual_mean(&self) -> f64 {
        self.core_arcs as f64 / self.core_nodes as f64
    }
}

/// Per-draw cap: the expected maximum of the batch, `(thin·m)^{1/(λ−1)}`.
///
/// A zeta tail with `λ < 3` has infinite variance, so an uncapped batch
/// occasionally lands a hub far beyond the typical maximum. Such a hub
/// self-collides heavily during stub matching and the erased arcs drag
/// the realized average degree well below target. Capping at the expected
/// maximum clips about one draw per batch — invisible to the tail fit —
/// and keeps the erasure loss a small fraction of the arc budget.
fn draw_cap(m: usize, thin: f64, lambda: f64) -> u64 {
    let expected_draws = (thin * m as f64).max(1.0);
    let expected_max = expected_draws.powf(1.0 / (lambda - 1.0)).ceil();
    (expected_max as u64).clamp(1, (m as u64).saturating_sub(1).max(1))
}

/// Draws one side's degree sequence for the core: zero with probability
/// `1 − thin`, zeta-tail otherwise, capped at `cap`.
fn draw_degrees(count: usize, lambda: f64, thin: f64, cap: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let zipf = Zipf::new(ZIPF_SUPPORT, lambda).expect("validated exponent");
    (0..count)
        .map(|_| {
            if rng.gen_bool(thin) {
                (zipf.sample(rng) as u64).min(cap)
            } else {
                0
            }
        })
        .collect()
}

/// Forces `Σ degrees == target` by promoting 0→1 or demoting 1→0 on
/// randomly chosen nodes, leaving the tail untouched. Falls back to
/// trimming the largest entries only if the degree-one pool runs dry
/// (practically unreachable at realistic sizes).
fn equalize_total(degrees: &mut [u64], target: u64, rng: &mut ChaCha8Rng) {
    let sum: u64 = degrees.iter().sum();
    if sum > target {
        let mut need = sum - target;
        let mut ones: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == 1).collect();
        ones.shuffle(rng);
        for &i in ones.iter().take(need as usize) {
            degrees[i] = 0;
        }
        need = need.saturating_sub(ones.len() as u64);
        while need > 0 {
            let (imax, &dmax) = degrees
                .iter()
                .enumerate()
                .max_by_key(|&(i, &d)| (d, std::cmp::Reverse(i)))
                .expect("non-empty degree sequence");
            let cut = need.min(dmax);
            degrees[imax] = dmax - cut;
            need -= cut;
        }
    } else if sum < target {
        let mut need = target - sum;
        let mut zeros: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == 0).collect();
        zeros.shuffle(rng);
        for &i in zeros.iter().take(need as usize) {
            degrees[i] = 1;
        }
        need = need.saturating_sub(zeros.len() as u64);
        // Residual spill (only when nearly every node already has degree):
        // spread +1 increments round-robin.
        let mut i = 0;
        while need > 0 {
            degrees[i % degrees.len()] += 1;
            i += 1;
            need -= 1;
        }
    }
}

/// Rank-matches the largest in-degree values onto the largest guarantors.
///
/// `coupling` of the top-percentile slots get their in-degree assigned by
/// rank (largest onto largest); every other in-degree value is dealt out
/// uniformly. Both marginal sequences are preserved exactly — only the
/// pairing between a node's out- and in-degree changes.
fn couple_hub_degrees(
    out_degrees: &[u64],
    in_degrees: &[u64],
    coupling: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<u64> {
    let m = out_degrees.len();
    let hub_slots = ((0.01 * m as f64).ceil() as usize).clamp(1, m);
    let matched = ((coupling * hub_slots as f64).round() as usize).min(m);

    // Nodes by descending out-degree, index ascending on ties.
    let mut by_out: Vec<usize> = (0..m).collect();
    by_out.sort_by_key(|&i| (std::cmp::Reverse(out_degrees[i]), i));
    // In-degree values descending.
    let mut values: Vec<u64> = in_degrees.to_vec();
    values.sort_unstable_by(|a, b| b.cmp(a));

    let mut assigned = vec![0u64; m];
    for rank in 0..matched {
        assigned[by_out[rank]] = values[rank];
    }
    let mut rest: Vec<u64> = values.split_off(matched);
    rest.shuffle(rng);
    let mut rest_iter = rest.into_iter();
    for &node in by_out.iter().skip(matched) {
        assigned[node] = rest_iter.next().expect("value count matches node count");
    }
    assigned
}

/// Uniform stub matching into a simple digraph. Self-loops and duplicate
/// arcs are erased, so slightly fewer arcs can come out than went in.
/// Node indices in the result are core-local (0-based).
fn match_stubs(out_degrees: &[u64], in_degrees: &[u64], rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let total: u64 = out_degrees.iter().sum();
    debug_assert_eq!(total, in_degrees.iter().sum::<u64>());
    let mut out_stubs: Vec<u32> = Vec::with_capacity(total as usize);
    let mut in_stubs: Vec<u32> = Vec::with_capacity(total as usize);
    for (i, &d) in out_degrees.iter().enumerate() {
        out_stubs.extend(std::iter::repeat_n(i as u32, d as usize));
    }
    for (i, &d) in in_degrees.iter().enumerate() {
        in_stubs.extend(std::iter::repeat_n(i as u32, d as usize));
    }
    in_stubs.shuffle(rng);

    let mut seen: HashSet<u64> = HashSet::with_capacity(total as usize);
    let mut arcs = Vec::with_capacity(total as usize);
    for (&g, &d) in out_stubs.iter().zip(&in_stubs) {
        if g == d {
            continue;
        }
        let key = (u64::from(g) << 32) | u64::from(d);
        if seen.insert(key) {
            arcs.push((g, d));
        }
    }
    arcs
}

/// Log-normal sampler with a prescribed mean and log-scale spread.
/// `sigma == 0` degenerates to the constant `mean`.
fn lognormal_with_mean(mean: f64, sigma: f64) -> LogNormal<f64> {
    let mu = mean.ln() - sigma * sigma / 2.0;
    LogNormal::new(mu, sigma).expect("validated sigma")
}

fn node_id(index: usize) -> String {
    format!("e{index:06}")
}

/// Synthesizes one snapshot from a validated config and a master seed.
///
/// Equal `(config, seed)` pairs produce identical snapshots, including
/// arc order and every balance-sheet value.
pub fn generate_snapshot(
    config: &GeneratorConfig,
    seed: u64,
) -> Result<NetworkSnapshot, GeneratorError> {
    config.validate()?;
    let n = config.node_count;
    let plan = DegreePlan::from_config(config)?;
    let m = plan.core_nodes;

    // --- Degree sequences for the heavy-tailed core ---
    let residual_mean = plan.residual_mean();
    let thin_out = (residual_mean / zeta_mean(config.lambda_out)).min(1.0);
    let thin_in = (residual_mean / zeta_mean(config.lambda_in)).min(1.0);
    let cap_out = draw_cap(m, thin_out, config.lambda_out);
    let cap_in = draw_cap(m, thin_in, config.lambda_in);

    let mut out_degrees = draw_degrees(
        m,
        config.lambda_out,
        thin_out,
        cap_out,
        &mut rng_from_seed(derive_seed(seed, &[S_OUT_DEGREES])),
    );
    let mut in_degrees = draw_degrees(
        m,
        config.lambda_in,
        thin_in,
        cap_in,
        &mut rng_from_seed(derive_seed(seed, &[S_IN_DEGREES])),
    );
    equalize_total(
        &mut out_degrees,
        plan.core_arcs,
        &mut rng_from_seed(derive_seed(seed, &[S_EQUALIZE_OUT])),
    );
    equalize_total(
        &mut in_degrees,
        plan.core_arcs,
        &mut rng_from_seed(derive_seed(seed, &[S_EQUALIZE_IN])),
    );
    let in_degrees = couple_hub_degrees(
        &out_degrees,
        &in_degrees,
        config.hub_coupling,
        &mut rng_from_seed(derive_seed(seed, &[S_HUB_MATCH])),
    );

    let core_arcs = match_stubs(
        &out_degrees,
        &in_degrees,
        &mut rng_from_seed(derive_seed(seed, &[S_STUBS])),
    );

    // --- Balance sheets ---
    let mut liabilities = Vec::with_capacity(n);
    {
        let dist = lognormal_with_mean(config.mean_liability, config.sigma_liability);
        let mut rng = rng_from_seed(derive_seed(seed, &[S_LIABILITY]));
        liabilities.extend((0..n).map(|_| round_sig6(dist.sample(&mut rng))));
    }
    let mut loans = Vec::with_capacity(n);
    {
        let dist = lognormal_with_mean(config.mean_loan, config.sigma_loan);
        let mut rng = rng_from_seed(derive_seed(seed, &[S_LOAN]));
        loans.extend((0..n).map(|_| round_sig6(dist.sample(&mut rng))));
    }
    let mut credit_lines = Vec::with_capacity(n);
    {
        let dist = lognormal_with_mean(config.mean_credit_line, config.sigma_credit);
        let mut rng = rng_from_seed(derive_seed(seed, &[S_CREDIT]));
        credit_lines.extend((0..n).map(|_| round_sig6(dist.sample(&mut rng))));
    }
    let listed: Vec<bool> = {
        let mut rng = rng_from_seed(derive_seed(seed, &[S_LISTED]));
        (0..n).map(|_| rng.gen_bool(config.listed_share)).collect()
    };

    // Leverage is recalibrated as a whole until the realized mean lands
    // within 0.02 of target (a wide net: the Monte Carlo error of one
    // batch is already far smaller at realistic node counts).
    let mut assets = Vec::new();
    let mut calibrated = false;
    for attempt in 0..MAX_CALIBRATION_ATTEMPTS {
        let dist = lognormal_with_mean(config.target_leverage, config.sigma_leverage);
        let mut rng = rng_from_seed(derive_seed(seed, &[S_LEVERAGE, attempt as u64]));
        assets.clear();
        assets.extend(
            liabilities
                .iter()
                .map(|&l| round_sig6(l / dist.sample(&mut rng))),
        );
        let mean_leverage: f64 = liabilities
            .iter()
            .zip(&assets)
            .map(|(&l, &a)| l / a)
            .sum::<f64>()
            / n as f64;
        if (mean_leverage - config.target_leverage).abs() <= 0.02 {
            calibrated = true;
            break;
        }
    }
    if !calibrated {
        return Err(GeneratorError::LeverageCalibration {
            attempts: MAX_CALIBRATION_ATTEMPTS,
        });
    }

    let enterprises: Vec<Enterprise> = (0..n)
        .map(|i| {
            Enterprise::new(
                node_id(i),
                assets[i],
                liabilities[i],
                loans[i],
                credit_lines[i],
                listed[i],
            )
        })
        .collect();

    // --- Arcs with guarantee amounts: each debtor's loan splits equally
    // over its guarantors ---
    let month = config.month;
    let mut edges: Vec<GuaranteeEdge> = Vec::with_capacity(core_arcs.len() + plan.couple_nodes);
    // Couples occupy indices 0..couple_nodes, paired consecutively.
    for p in 0..plan.couple_nodes / 2 {
        let (u, v) = (2 * p, 2 * p + 1);
        edges.push(GuaranteeEdge::new(
            node_id(u),
            node_id(v),
            round_sig6(loans[v]),
            month,
        ));
        edges.push(GuaranteeEdge::new(
            node_id(v),
            node_id(u),
            round_sig6(loans[u]),
            month,
        ));
    }
    let mut guarantor_count = vec![0u32; m];
    for &(_, d) in &core_arcs {
        guarantor_count[d as usize] += 1;
    }
    for &(g, d) in &core_arcs {
        let global_g = plan.couple_nodes + g as usize;
        let global_d = plan.couple_nodes + d as usize;
        let amount = round_sig6(loans[global_d] / f64::from(guarantor_count[d as usize]));
        edges.push(GuaranteeEdge::new(
            node_id(global_g),
            node_id(global_d),
            amount,
            month,
        ));
    }

    Ok(build_snapshot(month, enterprises, &edges)?)
}

// --- Presets ---

const PRESET_FILES: [(&str, &str); 4] = [
    ("phase1", include_str!("../presets/phase1.json")),
    ("phase2", include_str!("../presets/phase2.json")),
    ("phase3", include_str!("../presets/phase3.json")),
    ("phase4", include_str!("../presets/phase4.json")),
];

/// Names of the built-in single-snapshot presets.
pub fn preset_names() -> Vec<&'static str> {
    PRESET_FILES.iter().map(|&(name, _)| name).collect()
}

/// Loads a built-in preset by name.
pub fn preset(name: &str) -> Result<GeneratorConfig, GeneratorError> {
    match PRESET_FILES.iter().find(|&&(n, _)| n == name) {
        Some(&(_, json)) => {
            let config: GeneratorConfig = serde_json::from_str(json)?;
            config.validate()?;
            Ok(config)
        }
        None => Err(GeneratorError::UnknownPreset {
            name: name.to_string(),
            available: preset_names(),
        }),
    }
}

// --- The canonical 63-month series ---

/// Node-count anchors, one segment per phase window, chosen so each
/// window's mean node count matches its preset. Phase 2 dips, the others
/// grow linearly.
const PHASE_SIZE_SEGMENTS: [(f64, f64); 4] = [
    (34_800.0, 39_736.0),
    (39_200.0, 38_806.0),
    (39_500.0, 56_624.0),
    (58_000.0, 76_262.0),
];

/// Node count of a canonical month at the given scale (`1.0` = full size).
///
/// Returns `None` for months outside the canonical observation span.
pub fn canonical_node_count(month: Month, scale: f64) -> Option<usize> {
    let windows = canonical_windows();
    let (segment, window) = windows
        .iter()
        .enumerate()
        .find(|(_, w)| w.contains(month))
        .map(|(i, w)| (PHASE_SIZE_SEGMENTS[i], w))?;
    let span = (window.len() - 1).max(1) as f64;
    let t = month.months_since(window.start) as f64 / span;
    let raw = segment.0 + (segment.1 - segment.0) * t;
    Some(((raw * scale).round() as usize).max(10))
}

/// Generates the full canonical monthly series: one snapshot per month of
/// the observation span, sized by [`canonical_node_count`], with each
/// month's structural and financial parameters taken from its phase
/// preset. `scale` shrinks every month proportionally (handy for tests
/// and quick runs); `1.0` reproduces the full size.
pub fn generate_canonical_dynamic(
    master_seed: u64,
    scale: f64,
) -> Result<DynamicNetwork, GeneratorError> {
    if !scale.is_finite() || scale <= 0.0 {
        return Err(GeneratorError::NonPositive {
            field: "scale",
            value: scale,
        });
    }
    let windows = canonical_windows();
    let presets: Vec<GeneratorConfig> = ["phase1", "phase2", "phase3", "phase4"]
        .iter()
        .map(|name| preset(name))
        .collect::<Result<_, _>>()?;
    let mut snapshots = Vec::new();
    for (window, base) in windows.iter().zip(&presets) {
        for month in window.months() {
            let mut config = base.clone();
            config.month = month;
            config.node_count =
                canonical_node_count(month, scale).expect("canonical month in window");
            let seed = derive_seed(master_seed, &[S_MONTH, u64::from(month.index())]);
            snapshots.push(generate_snapshot(&config, seed)?);
        }
    }
    Ok(DynamicNetwork::new(snapshots)?)
}
