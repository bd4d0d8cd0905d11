//! Run configuration: a JSON file mirroring the command-line surface, plus
//! merge rules (explicit flags beat config values beat built-in defaults).

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use guarnet::contagion::{ContagionParams, SeedScenario, DEFAULT_IMPORTANCE_RUNS};
use guarnet::metrics::{MetricsOptions, XminMode};
use guarnet::{canonical_windows, Month, PhaseWindow};
use serde::Deserialize;

/// A window of months to aggregate in the phase-summary table.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub label: String,
    pub start: Month,
    pub end: Month,
}

/// Metric knobs; every field falls back to the library default when absent.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsConfig {
    /// Fixed tail start for the degree fits; scan mode when absent.
    pub xmin: Option<u64>,
    /// Giant-component size up to which geodesics are computed exactly.
    pub exact_path_threshold: Option<usize>,
    /// Sampled (source, target) pair budget above that threshold.
    pub sample_pairs: Option<u64>,
    /// Fraction of nodes forming each hub set.
    pub hub_percentile: Option<f64>,
    /// Attempted degree-preserving swaps per arc; omits the rewired-couple
    /// column when absent.
    pub null_model_swaps_per_edge: Option<u64>,
}

/// Simulation grid: every listed fraction is swept with every scenario.
#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub fractions: Vec<f64>,
    pub runs: u32,
    /// Scenario labels; all four when empty.
    pub scenarios: Vec<String>,
    /// Single-seed cascades per node for the importance table.
    pub importance_runs: u32,
    /// Restrict the sweep to these months; all store months when absent.
    pub months: Option<Vec<Month>>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            fractions: vec![0.05],
            runs: 500,
            scenarios: Vec::new(),
            importance_runs: DEFAULT_IMPORTANCE_RUNS,
            months: None,
        }
    }
}

/// The full run configuration accepted via `--config`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Node CSV to ingest (paired with `edges`).
    pub nodes: Option<PathBuf>,
    /// Edge CSV to ingest (paired with `nodes`).
    pub edges: Option<PathBuf>,
    /// Generator preset name; mutually exclusive with `nodes`/`edges` and
    /// `generator`.
    pub preset: Option<String>,
    /// Node-count scale applied to presets.
    pub scale: Option<f64>,
    /// A full custom generator configuration.
    pub generator: Option<guarnet::generator::GeneratorConfig>,
    /// Output directory.
    pub out: Option<PathBuf>,
    /// Master seed.
    pub seed: Option<u64>,
    /// Summary windows; the four standard phases when absent.
    pub phase_windows: Option<Vec<WindowConfig>>,
    pub metrics: MetricsConfig,
    pub contagion: ContagionParams,
    pub simulation: SimulationConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Loads `path` when given, otherwise yields the defaults.
    pub fn load_optional(path: Option<&Path>) -> Result<RunConfig> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(RunConfig::default()),
        }
    }

    /// The summary windows to aggregate: configured ones, else the four
    /// standard phases.
    pub fn windows(&self) -> Vec<PhaseWindow> {
        match &self.phase_windows {
            Some(windows) => windows
                .iter()
                .map(|w| PhaseWindow::new(w.label.clone(), w.start, w.end))
                .collect(),
            None => canonical_windows(),
        }
    }

    /// Assembles metric options from config plus explicit flag overrides.
    pub fn metrics_options(
        &self,
        seed: u64,
        null_swaps_flag: Option<u64>,
        xmin_flag: Option<u64>,
    ) -> MetricsOptions {
        let defaults = MetricsOptions::default();
        let mut path_options = defaults.path_options;
        if let Some(t) = self.metrics.exact_path_threshold {
            path_options.exact_threshold = t;
        }
        if let Some(p) = self.metrics.sample_pairs {
            path_options.sample_pairs = p;
        }
        MetricsOptions {
            xmin_mode: match xmin_flag.or(self.metrics.xmin) {
                Some(x) => XminMode::Fixed(x),
                None => XminMode::Scan,
            },
            path_options,
            hub_percentile: self
                .metrics
                .hub_percentile
                .unwrap_or(defaults.hub_percentile),
            null_model_swaps_per_edge: null_swaps_flag.or(self.metrics.null_model_swaps_per_edge),
            seed,
        }
    }

    /// Scenario list for the sweep: flag value, else config, else all four.
    pub fn scenarios(&self, flag: &[String]) -> Result<Vec<SeedScenario>> {
        let from_config;
        let labels: &[String] = if !flag.is_empty() {
            flag
        } else if !self.simulation.scenarios.is_empty() {
            &self.simulation.scenarios
        } else {
            from_config = SeedScenario::all()
                .iter()
                .map(|s| s.label().to_string())
                .collect::<Vec<_>>();
            &from_config
        };
        labels
            .iter()
            .map(|label| {
                label
                    .parse::<SeedScenario>()
                    .with_context(|| format!("scenario `{label}`"))
            })
            .collect()
    }
}

/// Validates the "exactly one input source" rule for `generate`.
pub fn generation_source(
    preset_flag: Option<&str>,
    config: &RunConfig,
) -> Result<GenerationSource> {
    let preset = preset_flag.or(config.preset.as_deref());
    match (preset, &config.generator) {
        (Some(_), Some(_)) => {
            bail!("choose either a preset or a custom generator section, not both")
        }
        (Some(name), None) => Ok(GenerationSource::Preset(name.to_string())),
        (None, Some(custom)) => Ok(GenerationSource::Custom(Box::new(custom.clone()))),
        (None, None) => {
            bail!("nothing to generate: pass --preset or a config with a `generator` section")
        }
    }
}

/// Where generated data comes from.
pub enum GenerationSource {
    Preset(String),
    Custom(Box<guarnet::generator::GeneratorConfig>),
}
