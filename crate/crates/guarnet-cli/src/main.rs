//! `guarnet` — guarantee-network analytics and default-cascade simulation.
//!
//! Subcommands: `ingest` raw CSVs into a validated snapshot store,
//! `validate` inputs without writing, `generate` synthetic stores from
//! calibrated presets, `metrics` for the per-month indicator battery plus
//! window summaries, `simulate` for Monte Carlo cascade sweeps, and
//! `report` for both tables in one plot-ready directory.
//!
//! Exit codes: 0 on success, 1 on validation or runtime failures, 2 on
//! usage errors.

mod config;
mod io;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use guarnet::contagion::{importance_scores, monte_carlo, SeedScenario};
use guarnet::generator::{generate_canonical_dynamic, generate_snapshot, preset, preset_names};
use guarnet::metrics::{metrics_timeseries, MetricsOptions};
use guarnet::rng::derive_seed;
use guarnet::{DynamicNetwork, Month};

use config::{generation_source, GenerationSource, RunConfig};
use io::SimulationRow;

#[derive(Parser)]
#[command(
    name = "guarnet",
    version,
    about = "Guarantee-network analytics and default-cascade simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate raw node/edge CSVs and write a canonical snapshot store.
    Ingest(IngestArgs),
    /// Check input invariants without writing anything.
    Validate(ValidateArgs),
    /// Generate a synthetic store from a preset or custom configuration.
    Generate(GenerateArgs),
    /// Compute the per-month metric battery and window summaries.
    Metrics(MetricsArgs),
    /// Run Monte Carlo default-cascade sweeps over seeding scenarios.
    Simulate(SimulateArgs),
    /// Write metrics and simulation tables into one directory.
    Report(ReportArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Node CSV: id,month,asset,liability,loan,credit_line,listed.
    #[arg(long)]
    nodes: PathBuf,
    /// Edge CSV: guarantor_id,debtor_id,amount,month.
    #[arg(long)]
    edges: PathBuf,
    /// Store directory to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(group(
    clap::ArgGroup::new("source").required(true).args(["input", "nodes"])
))]
struct ValidateArgs {
    /// Snapshot store directory.
    #[arg(long = "in", value_name = "DIR")]
    input: Option<PathBuf>,
    /// Node CSV (with --edges) instead of a store.
    #[arg(long, requires = "edges", conflicts_with = "input")]
    nodes: Option<PathBuf>,
    /// Edge CSV accompanying --nodes.
    #[arg(long, requires = "nodes", conflicts_with = "input")]
    edges: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Preset name: phase1, phase2, phase3, phase4, or canonical63.
    #[arg(long)]
    preset: Option<String>,
    /// JSON run configuration (may carry a preset or a generator section).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Store directory to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Node-count scale factor (e.g. 0.05 for a quick small network).
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Snapshot store directory to analyze.
    #[arg(long = "in", value_name = "DIR")]
    input: PathBuf,
    /// Directory for the metric tables.
    #[arg(long)]
    out: PathBuf,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for the randomized metrics.
    #[arg(long)]
    seed: Option<u64>,
    /// Attempted degree-preserving swaps per arc; adds the rewired-couple
    /// column to both tables.
    #[arg(long)]
    null_model_swaps_per_edge: Option<u64>,
    /// Fixed tail start for the degree fits (KS scan when omitted).
    #[arg(long)]
    xmin: Option<u64>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Snapshot store directory to simulate on.
    #[arg(long = "in", value_name = "DIR")]
    input: PathBuf,
    /// Directory for the simulation summaries.
    #[arg(long)]
    out: PathBuf,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Seed fraction of the node count (repeatable).
    #[arg(long = "fraction")]
    fractions: Vec<f64>,
    /// Cascades per scenario.
    #[arg(long)]
    runs: Option<u32>,
    /// Scenario (repeatable): random, top_in_degree, top_loan,
    /// top_importance. All four when omitted.
    #[arg(long = "scenario")]
    scenarios: Vec<String>,
    /// Single-seed cascades per node for the importance table.
    #[arg(long)]
    importance_runs: Option<u32>,
    /// Restrict to these months (repeatable, YYYY-MM).
    #[arg(long = "month")]
    months: Vec<Month>,
}

#[derive(Args)]
struct ReportArgs {
    /// Snapshot store directory.
    #[arg(long = "in", value_name = "DIR")]
    input: PathBuf,
    /// Directory receiving every table.
    #[arg(long)]
    out: PathBuf,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed shared by metrics and simulation.
    #[arg(long)]
    seed: Option<u64>,
    /// Attempted degree-preserving swaps per arc for the couple null model.
    #[arg(long)]
    null_model_swaps_per_edge: Option<u64>,
    /// Fixed tail start for the degree fits (KS scan when omitted).
    #[arg(long)]
    xmin: Option<u64>,
    /// Seed fraction of the node count (repeatable).
    #[arg(long = "fraction")]
    fractions: Vec<f64>,
    /// Cascades per scenario.
    #[arg(long)]
    runs: Option<u32>,
    /// Scenario (repeatable). All four when omitted.
    #[arg(long = "scenario")]
    scenarios: Vec<String>,
    /// Single-seed cascades per node for the importance table.
    #[arg(long)]
    importance_runs: Option<u32>,
    /// Restrict the simulation to these months (repeatable).
    #[arg(long = "month")]
    months: Vec<Month>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

/// Prints a usage-level complaint and exits with the usage status code,
/// matching how argument parse failures behave.
fn usage_error(message: &str) -> ! {
    eprintln!("usage error: {message}");
    std::process::exit(2);
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest(args) => run_ingest(args),
        Command::Validate(args) => run_validate(args),
        Command::Generate(args) => run_generate(args),
        Command::Metrics(args) => run_metrics(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Report(args) => run_report(args),
    }
}

fn load_network_from_csvs(nodes: &Path, edges: &Path) -> Result<DynamicNetwork> {
    let node_groups = io::parse_nodes_csv(nodes)?;
    let edge_list = io::parse_edges_csv(edges)?;
    io::build_dynamic(node_groups, edge_list)
}

fn describe(network: &DynamicNetwork) {
    for snapshot in network.snapshots() {
        println!(
            "{}: {} enterprises, {} arcs",
            snapshot.month(),
            snapshot.node_count(),
            snapshot.edge_count()
        );
    }
}

fn run_ingest(args: IngestArgs) -> Result<()> {
    let network = load_network_from_csvs(&args.nodes, &args.edges)?;
    describe(&network);
    let manifest = io::write_store(&args.out, &network, "ingest", None)?;
    println!(
        "ingested {} month(s) into {}",
        manifest.months.len(),
        args.out.display()
    );
    Ok(())
}

fn run_validate(args: ValidateArgs) -> Result<()> {
    let network = match (&args.input, &args.nodes, &args.edges) {
        (Some(dir), _, _) => io::read_store(dir)?,
        (None, Some(nodes), Some(edges)) => load_network_from_csvs(nodes, edges)?,
        _ => usage_error("validate needs --in DIR or --nodes and --edges"),
    };
    describe(&network);
    println!("all {} snapshot(s) valid", network.len());
    Ok(())
}

fn scaled_node_count(node_count: usize, scale: f64) -> usize {
    ((node_count as f64 * scale).round() as usize).max(10)
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    let config = RunConfig::load_optional(args.config.as_deref())?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let scale = args.scale.or(config.scale).unwrap_or(1.0);
    let out = match args.out.or_else(|| config.out.clone()) {
        Some(out) => out,
        None => usage_error("generate needs --out DIR"),
    };
    let source = match generation_source(args.preset.as_deref(), &config) {
        Ok(source) => source,
        Err(err) => usage_error(&format!("{err:#}")),
    };

    let (network, label) = match source {
        GenerationSource::Preset(name) if name == "canonical63" => (
            generate_canonical_dynamic(seed, scale)?,
            "generate:canonical63".to_string(),
        ),
        GenerationSource::Preset(name) => {
            let mut generator_config = match preset(&name) {
                Ok(cfg) => cfg,
                Err(err) => usage_error(&format!("{err} (presets also include canonical63)")),
            };
            generator_config.node_count = scaled_node_count(generator_config.node_count, scale);
            let snapshot = generate_snapshot(&generator_config, seed)?;
            (
                DynamicNetwork::new(vec![snapshot])?,
                format!("generate:{name}"),
            )
        }
        GenerationSource::Custom(mut generator_config) => {
            generator_config.node_count = scaled_node_count(generator_config.node_count, scale);
            let snapshot = generate_snapshot(&generator_config, seed)?;
            (
                DynamicNetwork::new(vec![snapshot])?,
                format!("generate:{}", generator_config.label),
            )
        }
    };
    describe(&network);
    io::write_store(&out, &network, &label, Some(seed))?;
    println!(
        "generated {} month(s) into {} (seed {seed}, available presets: {}, canonical63)",
        network.len(),
        out.display(),
        preset_names().join(", ")
    );
    Ok(())
}

fn write_metric_tables(
    network: &DynamicNetwork,
    config: &RunConfig,
    options: &MetricsOptions,
    out: &Path,
) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let windows = config.windows();
    let series = metrics_timeseries(network, &windows, options);
    for (month, err) in &series.failures {
        eprintln!("warning: skipping {month}: {err}");
    }
    if series.reports.is_empty() {
        bail!("no snapshot produced a metrics report");
    }
    let include_null = options.null_model_swaps_per_edge.is_some();
    io::write_monthly_metrics_csv(
        &out.join("monthly_metrics.csv"),
        &series.reports,
        include_null,
    )?;
    io::write_phase_summary_csv(
        &out.join("phase_summary.csv"),
        &series.phase_summaries,
        include_null,
    )?;
    println!(
        "wrote monthly_metrics.csv ({} month(s)) and phase_summary.csv ({} window(s)) to {}",
        series.reports.len(),
        series.phase_summaries.len(),
        out.display()
    );
    Ok(())
}

fn run_metrics(args: MetricsArgs) -> Result<()> {
    let config = RunConfig::load_optional(args.config.as_deref())?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let options = config.metrics_options(seed, args.null_model_swaps_per_edge, args.xmin);
    let network = io::read_store(&args.input)?;
    write_metric_tables(&network, &config, &options, &args.out)
}

#[allow(clippy::too_many_arguments)]
fn write_simulation_tables(
    network: &DynamicNetwork,
    config: &RunConfig,
    seed: u64,
    fractions: &[f64],
    runs: u32,
    scenarios: &[SeedScenario],
    importance_runs: u32,
    months: &[Month],
    out: &Path,
) -> Result<()> {
    let selected: Vec<_> = network
        .snapshots()
        .iter()
        .filter(|s| months.is_empty() || months.contains(&s.month()))
        .collect();
    if selected.is_empty() {
        bail!("no snapshots match the requested months");
    }
    let params = config.contagion;
    let needs_importance = scenarios.contains(&SeedScenario::TopImportance);

    let mut rows = Vec::new();
    for snapshot in selected {
        let month = snapshot.month();
        let month_seed = derive_seed(seed, &[u64::from(month.index())]);
        let importance = if needs_importance {
            Some(importance_scores(
                snapshot,
                &params,
                importance_runs,
                derive_seed(month_seed, &[0]),
            )?)
        } else {
            None
        };
        for (fraction_index, &fraction) in fractions.iter().enumerate() {
            for (scenario_index, &scenario) in scenarios.iter().enumerate() {
                let summary = monte_carlo(
                    snapshot,
                    scenario,
                    fraction,
                    runs,
                    &params,
                    importance.as_deref(),
                    derive_seed(
                        month_seed,
                        &[1, fraction_index as u64, scenario_index as u64],
                    ),
                )
                .with_context(|| format!("simulating {month} under {scenario}"))?;
                rows.push(SimulationRow { month, summary });
            }
        }
    }

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    io::write_simulation_csv(&out.join("simulation_summary.csv"), &rows)?;
    io::write_simulation_json(&out.join("simulation_summary.json"), &rows)?;
    println!(
        "wrote simulation_summary.csv/.json ({} row(s)) to {}",
        rows.len(),
        out.display()
    );
    Ok(())
}

struct SimulationRequest {
    seed: u64,
    fractions: Vec<f64>,
    runs: u32,
    scenarios: Vec<SeedScenario>,
    importance_runs: u32,
    months: Vec<Month>,
}

impl SimulationRequest {
    fn resolve(
        config: &RunConfig,
        seed: Option<u64>,
        fractions: Vec<f64>,
        runs: Option<u32>,
        scenario_flags: &[String],
        importance_runs: Option<u32>,
        months: Vec<Month>,
    ) -> Result<SimulationRequest> {
        Ok(SimulationRequest {
            seed: seed.or(config.seed).unwrap_or(0),
            fractions: if fractions.is_empty() {
                config.simulation.fractions.clone()
            } else {
                fractions
            },
            runs: runs.unwrap_or(config.simulation.runs),
            scenarios: config.scenarios(scenario_flags)?,
            importance_runs: importance_runs.unwrap_or(config.simulation.importance_runs),
            months: if months.is_empty() {
                config.simulation.months.clone().unwrap_or_default()
            } else {
                months
            },
        })
    }
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let config = RunConfig::load_optional(args.config.as_deref())?;
    let request = SimulationRequest::resolve(
        &config,
        args.seed,
        args.fractions,
        args.runs,
        &args.scenarios,
        args.importance_runs,
        args.months,
    )?;
    let network = io::read_store(&args.input)?;
    write_simulation_tables(
        &network,
        &config,
        request.seed,
        &request.fractions,
        request.runs,
        &request.scenarios,
        request.importance_runs,
        &request.months,
        &args.out,
    )
}

fn run_report(args: ReportArgs) -> Result<()> {
    let config = RunConfig::load_optional(args.config.as_deref())?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let options = config.metrics_options(seed, args.null_model_swaps_per_edge, args.xmin);
    let request = SimulationRequest::resolve(
        &config,
        args.seed,
        args.fractions,
        args.runs,
        &args.scenarios,
        args.importance_runs,
        args.months,
    )?;
    let network = io::read_store(&args.input)?;
    write_metric_tables(&network, &config, &options, &args.out)?;
    write_simulation_tables(
        &network,
        &config,
        request.seed,
        &request.fractions,
        request.runs,
        &request.scenarios,
        request.importance_runs,
        &request.months,
        &args.out,
    )
}
