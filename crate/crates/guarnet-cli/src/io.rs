//! File formats: node/edge CSV parsing and writing, the on-disk snapshot
//! store, and the metric/simulation report writers.
//!
//! All floating-point output goes through [`fmt_sig6`] (six significant
//! digits), every CSV carries a header row, months serialize as `YYYY-MM`,
//! and files are written atomically (temp file in the target directory, then
//! rename) so a crashed run never leaves a half-written artifact.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use guarnet::contagion::MonteCarloSummary;
use guarnet::generator::round_sig6;
use guarnet::metrics::{MetricsReport, PhaseSummary, SCALAR_METRIC_NAMES};
use guarnet::{build_snapshot, DynamicNetwork, Enterprise, GuaranteeEdge, Month};
use serde::{Deserialize, Serialize};

/// Node table of a snapshot store.
pub const NODES_FILE: &str = "nodes.csv";
/// Edge table of a snapshot store.
pub const EDGES_FILE: &str = "edges.csv";
/// Store metadata.
pub const MANIFEST_FILE: &str = "manifest.json";

const NODE_COLUMNS: [&str; 7] = [
    "id",
    "month",
    "asset",
    "liability",
    "loan",
    "credit_line",
    "listed",
];
const EDGE_COLUMNS: [&str; 4] = ["guarantor_id", "debtor_id", "amount", "month"];

/// Formats a float with up to six significant digits: positional notation
/// for moderate magnitudes, scientific (`1.23457e8`) once the exponent
/// leaves `[-4, 5]`, trailing zeros trimmed. Values that already carry at
/// most six significant digits round-trip exactly through parse.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mut exp = x.abs().log10().floor() as i32;
    // log10 can land a hair on the wrong side of an integer; resettle.
    if x.abs() < 10f64.powi(exp) {
        exp -= 1;
    } else if x.abs() >= 10f64.powi(exp + 1) {
        exp += 1;
    }
    // Rounding to six digits can carry into the next decade (999999.5 -> 1e6).
    if (x.abs() / 10f64.powi(exp) * 1e5).round() >= 1e6 {
        exp += 1;
    }
    if !(-4..6).contains(&exp) {
        let formatted = format!("{x:.5e}");
        let (mantissa, exponent) = formatted
            .split_once('e')
            .expect("exponential format always contains `e`");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    } else {
        let decimals = (5 - exp).max(0) as usize;
        let formatted = format!("{x:.decimals$}");
        if formatted.contains('.') {
            formatted
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            formatted
        }
    }
}

/// Writes `bytes` to `path` via a temp file in the same directory plus an
/// atomic rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .with_context(|| format!("{}: not a file path", path.display()))?
        .to_string_lossy()
        .into_owned();
    let tmp = path.with_file_name(format!("{file_name}.tmp"));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming {} into place", tmp.display()))?;
    Ok(())
}

fn column_indices(
    headers: &csv::StringRecord,
    required: &[&'static str],
    path: &Path,
) -> Result<Vec<usize>> {
    required
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == *name)
                .with_context(|| format!("{}: missing column `{name}`", path.display()))
        })
        .collect()
}

fn field(record: &csv::StringRecord, idx: usize) -> &str {
    record.get(idx).unwrap_or("")
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_number(raw: &str, column: &str, path: &Path, line: u64) -> Result<f64> {
    raw.parse::<f64>().ok().with_context(|| {
        format!(
            "{}: line {line}: column `{column}`: invalid number `{raw}`",
            path.display()
        )
    })
}

fn parse_month_field(raw: &str, path: &Path, line: u64) -> Result<Month> {
    raw.parse::<Month>().with_context(|| {
        format!(
            "{}: line {line}: column `month`: invalid month `{raw}` (expected YYYY-MM)",
            path.display()
        )
    })
}

/// Parses a node CSV (`id,month,asset,liability,loan,credit_line,listed`)
/// into per-month enterprise groups, sorted by month.
///
/// Extra columns are ignored. Each `(id, month)` pair may appear once;
/// `listed` must be `0` or `1`. Financial plausibility (positive assets and
/// so on) is enforced when the snapshot is built, not here.
pub fn parse_nodes_csv(path: &Path) -> Result<Vec<(Month, Vec<Enterprise>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let headers = reader
        .headers()
        .with_context(|| format!("reading header of {}", path.display()))?
        .clone();
    let cols = column_indices(&headers, &NODE_COLUMNS, path)?;

    let mut groups: BTreeMap<Month, Vec<Enterprise>> = BTreeMap::new();
    let mut seen: HashSet<(Month, String)> = HashSet::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("reading {}", path.display()))?;
        let line = record_line(&record);
        let id = field(&record, cols[0]).to_string();
        if id.is_empty() {
            bail!("{}: line {line}: column `id`: empty id", path.display());
        }
        let month = parse_month_field(field(&record, cols[1]), path, line)?;
        let asset = parse_number(field(&record, cols[2]), "asset", path, line)?;
        let liability = parse_number(field(&record, cols[3]), "liability", path, line)?;
        let loan = parse_number(field(&record, cols[4]), "loan", path, line)?;
        let credit_line = parse_number(field(&record, cols[5]), "credit_line", path, line)?;
        let listed = match field(&record, cols[6]) {
            "0" => false,
            "1" => true,
            other => bail!(
                "{}: line {line}: column `listed`: expected 0 or 1, got `{other}`",
                path.display()
            ),
        };
        if !seen.insert((month, id.clone())) {
            bail!(
                "{}: line {line}: duplicate row for enterprise `{id}` in month {month}",
                path.display()
            );
        }
        groups.entry(month).or_default().push(Enterprise::new(
            id,
            asset,
            liability,
            loan,
            credit_line,
            listed,
        ));
    }
    Ok(groups.into_iter().collect())
}

/// Parses an edge CSV (`guarantor_id,debtor_id,amount,month`).
///
/// Self-guarantees and negative or non-numeric amounts are rejected with the
/// offending line; duplicate rows are allowed (snapshot construction merges
/// parallel arcs by summing their amounts).
pub fn parse_edges_csv(path: &Path) -> Result<Vec<GuaranteeEdge>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let headers = reader
        .headers()
        .with_context(|| format!("reading header of {}", path.display()))?
        .clone();
    let cols = column_indices(&headers, &EDGE_COLUMNS, path)?;

    let mut edges = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("reading {}", path.display()))?;
        let line = record_line(&record);
        let guarantor = field(&record, cols[0]).to_string();
        let debtor = field(&record, cols[1]).to_string();
        if guarantor.is_empty() || debtor.is_empty() {
            bail!("{}: line {line}: empty endpoint id", path.display());
        }
        if guarantor == debtor {
            bail!(
                "{}: line {line}: enterprise `{guarantor}` guarantees itself",
                path.display()
            );
        }
        let amount = parse_number(field(&record, cols[2]), "amount", path, line)?;
        if !amount.is_finite() || amount < 0.0 {
            bail!(
                "{}: line {line}: column `amount`: must be a non-negative number, got `{amount}`",
                path.display()
            );
        }
        let month = parse_month_field(field(&record, cols[3]), path, line)?;
        edges.push(GuaranteeEdge::new(guarantor, debtor, amount, month));
    }
    Ok(edges)
}

/// Assembles parsed node groups and edges into a validated month series.
///
/// Every edge month must have node rows; per-month snapshot validation
/// (unique ids, positive assets, resolvable endpoints, no self-loops) runs
/// through the graph layer.
pub fn build_dynamic(
    node_groups: Vec<(Month, Vec<Enterprise>)>,
    edges: Vec<GuaranteeEdge>,
) -> Result<DynamicNetwork> {
    let mut edge_groups: BTreeMap<Month, Vec<GuaranteeEdge>> = BTreeMap::new();
    for edge in edges {
        edge_groups.entry(edge.month).or_default().push(edge);
    }
    let node_months: HashSet<Month> = node_groups.iter().map(|(m, _)| *m).collect();
    for month in edge_groups.keys() {
        if !node_months.contains(month) {
            bail!("edges reference month {month} but the node table has no rows for it");
        }
    }
    let empty = Vec::new();
    let snapshots = node_groups
        .into_iter()
        .map(|(month, enterprises)| {
            build_snapshot(
                month,
                enterprises,
                edge_groups.get(&month).unwrap_or(&empty),
            )
            .with_context(|| format!("validating snapshot for {month}"))
        })
        .collect::<Result<Vec<_>>>()?;
    DynamicNetwork::new(snapshots).context("assembling month series")
}

/// Store metadata written next to the CSV tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StoreManifest {
    pub months: Vec<Month>,
    pub enterprise_rows: usize,
    pub arc_rows: usize,
    /// Where the store came from, e.g. `ingest` or `generate:phase1`.
    pub source: String,
    /// Master seed for generated stores.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

fn nodes_csv_bytes(network: &DynamicNetwork) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(NODE_COLUMNS)?;
    for snapshot in network.snapshots() {
        let month = snapshot.month().to_string();
        for i in 0..snapshot.node_count() {
            let e = snapshot.enterprise(i);
            writer.write_record([
                e.id.as_str(),
                &month,
                &fmt_sig6(e.asset),
                &fmt_sig6(e.liability),
                &fmt_sig6(e.loan),
                &fmt_sig6(e.credit_line),
                if e.listed { "1" } else { "0" },
            ])?;
        }
    }
    Ok(writer.into_inner()?)
}

fn edges_csv_bytes(network: &DynamicNetwork) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(EDGE_COLUMNS)?;
    for snapshot in network.snapshots() {
        let month = snapshot.month().to_string();
        for (g, d, amount) in snapshot.arcs() {
            writer.write_record([snapshot.id(g), snapshot.id(d), &fmt_sig6(amount), &month])?;
        }
    }
    Ok(writer.into_inner()?)
}

/// Writes `nodes.csv`, `edges.csv`, and `manifest.json` under `dir`
/// (created if missing). Rows are canonically ordered — months ascending,
/// ids ascending within a month — so equal networks produce byte-identical
/// stores.
pub fn write_store(
    dir: &Path,
    network: &DynamicNetwork,
    source: &str,
    seed: Option<u64>,
) -> Result<StoreManifest> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    atomic_write(&dir.join(NODES_FILE), &nodes_csv_bytes(network)?)?;
    atomic_write(&dir.join(EDGES_FILE), &edges_csv_bytes(network)?)?;
    let manifest = StoreManifest {
        months: network.months().collect(),
        enterprise_rows: network.snapshots().iter().map(|s| s.node_count()).sum(),
        arc_rows: network.snapshots().iter().map(|s| s.edge_count()).sum(),
        source: source.to_string(),
        seed,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    atomic_write(&dir.join(MANIFEST_FILE), json.as_bytes())?;
    Ok(manifest)
}

/// Reads a snapshot store (or any directory holding the two CSV tables)
/// back into a validated month series.
pub fn read_store(dir: &Path) -> Result<DynamicNetwork> {
    let nodes_path = dir.join(NODES_FILE);
    let edges_path = dir.join(EDGES_FILE);
    if !nodes_path.is_file() {
        bail!(
            "{}: not a snapshot store ({NODES_FILE} missing)",
            dir.display()
        );
    }
    let node_groups = parse_nodes_csv(&nodes_path)?;
    let edges = if edges_path.is_file() {
        parse_edges_csv(&edges_path)?
    } else {
        bail!(
            "{}: not a snapshot store ({EDGES_FILE} missing)",
            dir.display()
        );
    };
    build_dynamic(node_groups, edges)
}

fn value_cell(value: Option<f64>) -> String {
    value.map(fmt_sig6).unwrap_or_default()
}

/// Writes the per-month metric table: one row per analyzed month, one column
/// per scalar metric. The rewired-couple column appears only when the null
/// model was requested.
pub fn write_monthly_metrics_csv(
    path: &Path,
    reports: &[MetricsReport],
    include_null_model: bool,
) -> Result<()> {
    let keep = |name: &str| include_null_model || name != "null_couple_ratio";
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["month".to_string()];
    header.extend(
        SCALAR_METRIC_NAMES
            .iter()
            .filter(|n| keep(n))
            .map(|n| n.to_string()),
    );
    writer.write_record(&header)?;
    for report in reports {
        let mut row = vec![report.month.to_string()];
        for (name, value) in report.scalar_metrics() {
            if keep(name) {
                row.push(value_cell(value));
            }
        }
        writer.write_record(&row)?;
    }
    atomic_write(path, &writer.into_inner()?)
}

/// Writes the window summary table: one row per metric, a `<label>_mean`
/// and `<label>_sd` column pair per window that contained at least one
/// analyzed month.
pub fn write_phase_summary_csv(
    path: &Path,
    summaries: &[PhaseSummary],
    include_null_model: bool,
) -> Result<()> {
    let keep = |name: &str| include_null_model || name != "null_couple_ratio";
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["metric".to_string()];
    for summary in summaries {
        header.push(format!("{}_mean", summary.label));
        header.push(format!("{}_sd", summary.label));
    }
    writer.write_record(&header)?;
    for (pos, name) in SCALAR_METRIC_NAMES.iter().enumerate() {
        if !keep(name) {
            continue;
        }
        let mut row = vec![name.to_string()];
        for summary in summaries {
            let metric = &summary.metrics[pos];
            debug_assert_eq!(metric.name, *name);
            row.push(value_cell(metric.mean));
            row.push(value_cell(metric.sd));
        }
        writer.write_record(&row)?;
    }
    atomic_write(path, &writer.into_inner()?)
}

/// One simulation summary row: a scenario aggregated on one month.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationRow {
    pub month: Month,
    #[serde(flatten)]
    pub summary: MonteCarloSummary,
}

/// Writes the simulation summary CSV:
/// `month,scenario,p,mean_final_ratio,sd,runs,mean_net_ratio`.
pub fn write_simulation_csv(path: &Path, rows: &[SimulationRow]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "month",
        "scenario",
        "p",
        "mean_final_ratio",
        "sd",
        "runs",
        "mean_net_ratio",
    ])?;
    for row in rows {
        let s = &row.summary;
        writer.write_record([
            row.month.to_string(),
            s.scenario.label().to_string(),
            fmt_sig6(s.seed_fraction),
            fmt_sig6(s.mean_final_ratio),
            value_cell(s.sd_final_ratio),
            s.runs.to_string(),
            fmt_sig6(s.mean_net_ratio),
        ])?;
    }
    atomic_write(path, &writer.into_inner()?)
}

/// Writes the same rows as a JSON array, keeping the nested summary fields
/// (seed counts included) with floats rounded to six significant digits.
pub fn write_simulation_json(path: &Path, rows: &[SimulationRow]) -> Result<()> {
    let rounded: Vec<SimulationRow> = rows
        .iter()
        .map(|row| {
            let mut summary = row.summary.clone();
            summary.seed_fraction = round_sig6(summary.seed_fraction);
            summary.mean_final_ratio = round_sig6(summary.mean_final_ratio);
            summary.sd_final_ratio = summary.sd_final_ratio.map(round_sig6);
            summary.mean_net_ratio = round_sig6(summary.mean_net_ratio);
            SimulationRow {
                month: row.month,
                summary,
            }
        })
        .collect();
    let mut json = serde_json::to_string_pretty(&rounded)?;
    json.push('\n');
    atomic_write(path, json.as_bytes())
}
