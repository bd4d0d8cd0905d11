//! The per-snapshot metric battery and its aggregation across months.
//!
//! [`compute_report`] runs every structural and balance-sheet metric on one
//! snapshot; [`metrics_timeseries`] maps it over a [`DynamicNetwork`] and
//! folds the per-month scalars into labeled window summaries (mean and
//! sample standard deviation per metric). Randomized pieces (path sampling,
//! the rewiring null model) draw their seeds from a single master seed via
//! per-month derivation, so a whole time series is reproducible from one
//! number.

pub mod clustering;
pub mod components;
pub mod degree;
pub mod financial;
pub mod hubs;
pub mod nullmodel;
pub mod paths;
pub mod powerlaw;

pub use clustering::{clustering_directed, ClusteringReport};
pub use components::{components, mutual_triad_ratio, reciprocal_couple_ratio, ComponentSummary};
pub use degree::{degree_stats, density, DegreeStats};
pub use financial::{financial_aggregates, FinancialAggregates};
pub use hubs::{hub_report, HubReport};
pub use nullmodel::null_model_couple_ratio;
pub use paths::{giant_path_stats, PathOptions, PathStats};
pub use powerlaw::{powerlaw_fit, PowerLawFit, XminMode};

use thiserror::Error;

use crate::graph::{DynamicNetwork, NetworkSnapshot};
use crate::month::{Month, PhaseWindow};
use crate::rng::derive_seed;

/// Seed-stream tags keeping independent randomized metrics decorrelated
/// even though they share one master seed.
const SEED_STREAM_PATHS: u64 = 1;
const SEED_STREAM_NULL_MODEL: u64 = 2;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("snapshot {month} has no enterprises")]
    EmptySnapshot { month: Month },
    #[error("density needs at least 2 nodes, snapshot has {n}")]
    TooFewNodes { n: usize },
    #[error("tail at x_min={x_min} has {available} samples, need {required}")]
    InsufficientTail {
        x_min: u64,
        available: usize,
        required: usize,
    },
    #[error("tail at x_min={x_min} is degenerate: all {count} samples are equal")]
    DegenerateTail { x_min: u64, count: usize },
    #[error("x_min must be at least 1, got {x_min}")]
    InvalidXmin { x_min: u64 },
    #[error("edge rewiring needs at least 2 arcs, snapshot has {e}")]
    TooFewEdges { e: usize },
    #[error("snapshot has no nodes, so no giant component")]
    EmptyGiant,
    #[error("hub percentile must lie in (0, 1], got {percentile}")]
    InvalidPercentile { percentile: f64 },
}

/// Knobs for [`compute_report`] / [`metrics_timeseries`].
#[derive(Clone, Copy, Debug)]
pub struct MetricsOptions {
    /// Tail-start selection for the degree-distribution fits.
    pub xmin_mode: XminMode,
    /// Exact/sampled switch and sampling budget for geodesic statistics.
    pub path_options: PathOptions,
    /// Fraction of nodes forming each hub set (ties included).
    pub hub_percentile: f64,
    /// Attempted degree-preserving swaps per arc for the couple-share null
    /// model; `None` skips the null model entirely.
    pub null_model_swaps_per_edge: Option<u64>,
    /// Master seed; each month and each randomized metric derives its own
    /// sub-seed from it.
    pub seed: u64,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        MetricsOptions {
            xmin_mode: XminMode::Scan,
            path_options: PathOptions::default(),
            hub_percentile: 0.01,
            null_model_swaps_per_edge: None,
            seed: 0,
        }
    }
}

/// Everything the battery measures on one snapshot.
#[derive(Clone, Debug)]
pub struct MetricsReport {
    pub month: Month,
    pub degrees: DegreeStats,
    /// Arc density `E / (N·(N−1))`.
    pub density: f64,
    /// In-degree tail fit; `None` when the tail is too small or degenerate.
    pub powerlaw_in: Option<PowerLawFit>,
    /// Out-degree tail fit; `None` when the tail is too small or degenerate.
    pub powerlaw_out: Option<PowerLawFit>,
    /// Snapshot-average directed clustering coefficient.
    pub clustering: f64,
    /// Share of nodes living in isolated mutual-guarantee pairs.
    pub reciprocal_couple_ratio: f64,
    pub components: ComponentSummary,
    /// Geodesic statistics of the giant weak component.
    pub paths: PathStats,
    /// Share of connected triples that are fully mutual triangles.
    pub mutual_triad_ratio: f64,
    pub hubs: HubReport,
    pub financial: FinancialAggregates,
    /// Couple share after degree-preserving rewiring, when requested.
    pub null_couple_ratio: Option<f64>,
}

/// Column order of the flattened per-month metric table; shared by
/// [`MetricsReport::scalar_metrics`] and every consumer that writes or
/// aggregates the table.
pub const SCALAR_METRIC_NAMES: [&str; 22] = [
    "node_count",
    "edge_count",
    "avg_degree",
    "density",
    "lambda_in",
    "lambda_out",
    "clustering",
    "reciprocal_couple_ratio",
    "component_count",
    "giant_size",
    "giant_share",
    "mean_distance",
    "diameter",
    "mutual_triad_ratio",
    "hub_overlap",
    "mean_asset",
    "mean_liability",
    "mean_loan",
    "mean_credit_line",
    "mean_leverage",
    "listed_share",
    "null_couple_ratio",
];

impl MetricsReport {
    /// Scalar values in [`SCALAR_METRIC_NAMES`] order. Metrics that are not
    /// defined for this snapshot (failed tail fits, skipped null model)
    /// appear as `None`.
    pub fn scalar_values(&self) -> Vec<Option<f64>> {
        vec![
            Some(self.degrees.node_count as f64),
            Some(self.degrees.edge_count as f64),
            Some(self.degrees.avg_degree()),
            Some(self.density),
            self.powerlaw_in.map(|f| f.exponent),
            self.powerlaw_out.map(|f| f.exponent),
            Some(self.clustering),
            Some(self.reciprocal_couple_ratio),
            Some(self.components.count as f64),
            Some(self.components.giant_size as f64),
            Some(self.components.giant_share),
            Some(self.paths.mean_distance),
            Some(self.paths.diameter as f64),
            Some(self.mutual_triad_ratio),
            Some(self.hubs.overlap),
            Some(self.financial.mean_asset),
            Some(self.financial.mean_liability),
            Some(self.financial.mean_loan),
            Some(self.financial.mean_credit_line),
            Some(self.financial.mean_leverage),
            Some(self.financial.listed_share),
            self.null_couple_ratio,
        ]
    }

    /// Flattens the report into named scalars, in a fixed order shared by
    /// the per-month table and the window summaries.
    pub fn scalar_metrics(&self) -> Vec<(&'static str, Option<f64>)> {
        SCALAR_METRIC_NAMES
            .iter()
            .copied()
            .zip(self.scalar_values())
            .collect()
    }
}

/// Tail fit that treats "not enough data" as the absence of a fit rather
/// than a failure of the whole report; configuration errors still surface.
fn optional_fit(degrees: &[u64], mode: XminMode) -> Result<Option<PowerLawFit>, MetricsError> {
    match powerlaw_fit(degrees, mode) {
        Ok(fit) => Ok(Some(fit)),
        Err(MetricsError::InsufficientTail { .. }) | Err(MetricsError::DegenerateTail { .. }) => {
            Ok(None)
        }
        Err(other) => Err(other),
    }
}

/// Runs the whole metric battery on one snapshot.
///
/// Randomized stages (geodesic sampling on a large giant, the optional
/// rewiring null model) use sub-seeds derived from `options.seed` and the
/// snapshot's month, so equal inputs give bitwise-equal reports.
pub fn compute_report(
    snapshot: &NetworkSnapshot,
    options: &MetricsOptions,
) -> Result<MetricsReport, MetricsError> {
    let month = snapshot.month();
    let degrees = degree_stats(snapshot)?;
    let arc_density = density(snapshot)?;
    let powerlaw_in = optional_fit(&degrees.in_degrees(), options.xmin_mode)?;
    let powerlaw_out = optional_fit(&degrees.out_degrees(), options.xmin_mode)?;

    let mut path_options = options.path_options;
    path_options.seed = derive_seed(options.seed, &[SEED_STREAM_PATHS, u64::from(month.index())]);
    let paths = giant_path_stats(snapshot, &path_options)?;

    let null_couple_ratio = match options.null_model_swaps_per_edge {
        None => None,
        Some(per_edge) => {
            let rewires = per_edge.saturating_mul(degrees.edge_count as u64);
            let seed = derive_seed(
                options.seed,
                &[SEED_STREAM_NULL_MODEL, u64::from(month.index())],
            );
            Some(null_model_couple_ratio(snapshot, rewires, seed)?)
        }
    };

    Ok(MetricsReport {
        month,
        density: arc_density,
        powerlaw_in,
        powerlaw_out,
        clustering: clustering_directed(snapshot).average,
        reciprocal_couple_ratio: reciprocal_couple_ratio(snapshot),
        components: components(snapshot),
        paths,
        mutual_triad_ratio: mutual_triad_ratio(snapshot),
        hubs: hub_report(snapshot, options.hub_percentile)?,
        financial: financial_aggregates(snapshot),
        null_couple_ratio,
        degrees,
    })
}

/// Mean and sample standard deviation of one metric inside one window.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSummary {
    pub name: &'static str,
    /// Months in the window where the metric was defined.
    pub samples: usize,
    /// `None` when no month defined the metric.
    pub mean: Option<f64>,
    /// Sample standard deviation (n − 1); `None` below 2 samples.
    pub sd: Option<f64>,
}

/// Per-window aggregation of the scalar metrics.
#[derive(Clone, Debug)]
pub struct PhaseSummary {
    pub label: String,
    /// Months of the window that produced a report.
    pub report_count: usize,
    pub metrics: Vec<MetricSummary>,
}

/// Full output of a time-series run: one report per analyzable month,
/// per-month failures (the run continues past them), and one summary per
/// window that captured at least one report.
#[derive(Debug)]
pub struct MetricsTimeSeries {
    pub reports: Vec<MetricsReport>,
    pub failures: Vec<(Month, MetricsError)>,
    pub phase_summaries: Vec<PhaseSummary>,
}

fn mean_and_sd(values: &[f64]) -> (Option<f64>, Option<f64>) {
    match values.len() {
        0 => (None, None),
        1 => (Some(values[0]), None),
        n => {
            let mean = values.iter().sum::<f64>() / n as f64;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            (Some(mean), Some(var.sqrt()))
        }
    }
}

fn summarize_window(window: &PhaseWindow, reports: &[&MetricsReport]) -> PhaseSummary {
    let tables: Vec<Vec<(&'static str, Option<f64>)>> =
        reports.iter().map(|r| r.scalar_metrics()).collect();
    let metrics = (0..tables[0].len())
        .map(|col| {
            let name = tables[0][col].0;
            let values: Vec<f64> = tables.iter().filter_map(|row| row[col].1).collect();
            let (mean, sd) = mean_and_sd(&values);
            MetricSummary {
                name,
                samples: values.len(),
                mean,
                sd,
            }
        })
        .collect();
    PhaseSummary {
        label: window.label.clone(),
        report_count: reports.len(),
        metrics,
    }
}

/// Runs [`compute_report`] over every snapshot and aggregates the scalar
/// metrics per window.
///
/// A month that errors is recorded in `failures` and skipped; windows that
/// end up with no reports are omitted from `phase_summaries` (an all-empty
/// window has nothing to average). Windows may overlap or leave gaps; each
/// month is aggregated into every window containing it.
pub fn metrics_timeseries(
    network: &DynamicNetwork,
    windows: &[PhaseWindow],
    options: &MetricsOptions,
) -> MetricsTimeSeries {
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for snapshot in network.snapshots() {
        match compute_report(snapshot, options) {
            Ok(report) => reports.push(report),
            Err(err) => failures.push((snapshot.month(), err)),
        }
    }
    let phase_summaries = windows
        .iter()
        .filter_map(|window| {
            let members: Vec<&MetricsReport> = reports
                .iter()
                .filter(|r| window.contains(r.month))
                .collect();
            if members.is_empty() {
                None
            } else {
                Some(summarize_window(window, &members))
            }
        })
        .collect();
    MetricsTimeSeries {
        reports,
        failures,
        phase_summaries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_snapshot, Enterprise, GuaranteeEdge};

    /// A couple a↔b, a chain c→d→e, and isolated nodes up to `n` total.
    fn small_snapshot(month: &str, n: usize) -> NetworkSnapshot {
        assert!(n >= 5);
        let month: Month = month.parse().unwrap();
        let mut enterprises: Vec<Enterprise> = ["a", "b", "c", "d", "e"]
            .iter()
            .map(|id| Enterprise::new(*id, 100.0, 60.0, 30.0, 50.0, false))
            .collect();
        for i in 5..n {
            enterprises.push(Enterprise::new(
                format!("x{i:03}"),
                100.0,
                60.0,
                30.0,
                50.0,
                false,
            ));
        }
        let edges = [
            GuaranteeEdge::new("a", "b", 1.0, month),
            GuaranteeEdge::new("b", "a", 1.0, month),
            GuaranteeEdge::new("c", "d", 1.0, month),
            GuaranteeEdge::new("d", "e", 1.0, month),
        ];
        build_snapshot(month, enterprises, &edges).unwrap()
    }

    #[test]
    fn mean_and_sd_of_known_values() {
        let (mean, sd) = mean_and_sd(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert!((mean.unwrap() - 5.0).abs() < 1e-12);
        // Sample variance with n−1 denominator: 32/7.
        assert!((sd.unwrap() - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_and_sd(&[]), (None, None));
        assert_eq!(mean_and_sd(&[3.5]), (Some(3.5), None));
    }

    #[test]
    fn report_covers_the_battery_on_a_small_snapshot() {
        let s = small_snapshot("2007-03", 10);
        let r = compute_report(&s, &MetricsOptions::default()).unwrap();
        assert_eq!(r.month, "2007-03".parse().unwrap());
        assert_eq!(r.degrees.node_count, 10);
        assert_eq!(r.degrees.edge_count, 4);
        assert!((r.density - 4.0 / 90.0).abs() < 1e-15);
        // 10 nodes cannot carry a 50-sample tail; the fits are absent.
        assert!(r.powerlaw_in.is_none());
        assert!(r.powerlaw_out.is_none());
        assert!((r.reciprocal_couple_ratio - 0.2).abs() < 1e-15);
        // Components: {a,b}, {c,d,e}, and 5 singletons.
        assert_eq!(r.components.count, 7);
        assert_eq!(r.components.giant_size, 3);
        assert_eq!(r.paths.giant_size, 3);
        assert!(r.paths.exact);
        // Chain c–d–e: distances 1,1,2 each way → mean 8/6.
        assert!((r.paths.mean_distance - 8.0 / 6.0).abs() < 1e-12);
        assert_eq!(r.paths.diameter, 2);
        assert!(r.null_couple_ratio.is_none());
        let scalars = r.scalar_metrics();
        assert_eq!(scalars[0], ("node_count", Some(10.0)));
        assert_eq!(scalars.last().unwrap().0, "null_couple_ratio");
    }

    #[test]
    fn requested_null_model_lands_in_the_report() {
        let s = small_snapshot("2007-03", 10);
        let options = MetricsOptions {
            null_model_swaps_per_edge: Some(0),
            ..MetricsOptions::default()
        };
        let r = compute_report(&s, &options).unwrap();
        // Zero swaps per arc: the null ratio is the observed ratio.
        assert_eq!(r.null_couple_ratio, Some(r.reciprocal_couple_ratio));
    }

    #[test]
    fn identical_inputs_give_identical_reports() {
        let s = small_snapshot("2007-03", 12);
        let options = MetricsOptions {
            null_model_swaps_per_edge: Some(5),
            seed: 99,
            ..MetricsOptions::default()
        };
        let a = compute_report(&s, &options).unwrap();
        let b = compute_report(&s, &options).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn timeseries_skips_failed_months_and_empty_windows() {
        let good = small_snapshot("2007-01", 5);
        // A single enterprise: density is undefined, the month must fail.
        let lonely_month: Month = "2007-02".parse().unwrap();
        let lonely = build_snapshot(
            lonely_month,
            vec![Enterprise::new("solo", 100.0, 60.0, 30.0, 50.0, false)],
            &[],
        )
        .unwrap();
        let network = DynamicNetwork::new(vec![good, lonely]).unwrap();
        let windows = [
            PhaseWindow::new(
                "first",
                "2007-01".parse().unwrap(),
                "2007-01".parse().unwrap(),
            ),
            PhaseWindow::new(
                "second",
                "2007-02".parse().unwrap(),
                "2007-02".parse().unwrap(),
            ),
            PhaseWindow::new(
                "later",
                "2008-01".parse().unwrap(),
                "2008-06".parse().unwrap(),
            ),
        ];
        let ts = metrics_timeseries(&network, &windows, &MetricsOptions::default());
        assert_eq!(ts.reports.len(), 1);
        assert_eq!(ts.failures.len(), 1);
        assert_eq!(ts.failures[0].0, lonely_month);
        assert!(matches!(
            ts.failures[0].1,
            MetricsError::TooFewNodes { n: 1 }
        ));
        // Only the window that captured a report is summarized.
        assert_eq!(ts.phase_summaries.len(), 1);
        let summary = &ts.phase_summaries[0];
        assert_eq!(summary.label, "first");
        assert_eq!(summary.report_count, 1);
        let node_count = summary
            .metrics
            .iter()
            .find(|m| m.name == "node_count")
            .unwrap();
        assert_eq!(node_count.samples, 1);
        assert_eq!(node_count.mean, Some(5.0));
        assert_eq!(node_count.sd, None);
        // The tail fit never succeeded, so its row has no samples.
        let lambda = summary
            .metrics
            .iter()
            .find(|m| m.name == "lambda_out")
            .unwrap();
        assert_eq!(lambda.samples, 0);
        assert_eq!(lambda.mean, None);
    }

    #[test]
    fn window_statistics_average_over_member_months() {
        let months = ["2007-01", "2007-02"];
        let sizes = [8usize, 12];
        let snapshots: Vec<NetworkSnapshot> = months
            .iter()
            .zip(sizes)
            .map(|(m, n)| small_snapshot(m, n))
            .collect();
        let network = DynamicNetwork::new(snapshots).unwrap();
        let window = PhaseWindow::new(
            "both",
            "2007-01".parse().unwrap(),
            "2007-06".parse().unwrap(),
        );
        let ts = metrics_timeseries(&network, &[window], &MetricsOptions::default());
        assert_eq!(ts.phase_summaries.len(), 1);
        let summary = &ts.phase_summaries[0];
        assert_eq!(summary.report_count, 2);
        let node_count = summary
            .metrics
            .iter()
            .find(|m| m.name == "node_count")
            .unwrap();
        assert_eq!(node_count.mean, Some(10.0));
        // Two samples 8 and 12: sample SD is |8 − 12| / √2.
        assert!((node_count.sd.unwrap() - 4.0 / 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn overlapping_windows_both_capture_a_shared_month() {
        let network = DynamicNetwork::new(vec![small_snapshot("2007-01", 6)]).unwrap();
        let jan: Month = "2007-01".parse().unwrap();
        let windows = [
            PhaseWindow::new("w1", jan, jan),
            PhaseWindow::new("w2", jan, "2007-12".parse().unwrap()),
        ];
        let ts = metrics_timeseries(&network, &windows, &MetricsOptions::default());
        assert_eq!(ts.phase_summaries.len(), 2);
        assert_eq!(ts.phase_summaries[0].report_count, 1);
        assert_eq!(ts.phase_summaries[1].report_count, 1);
    }
}
