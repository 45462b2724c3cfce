//! Pipeline configuration file.

use std::fs;
use std::path::{Path, PathBuf};

use hdi_core::ann::{Activation, BatchMode, ErrorMetric, SweepConfig};
use hdi_core::features::{DatasetSpec, ScalingMethod, SplitSpec};
use hdi_core::ingest::WideCsvFormat;
use hdi_core::kmeans::{Init, KMeansConfig, Point};
use hdi_core::TrainConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CONFIG_VERSION: u32 = 1;

/// Everything a pipeline run depends on. Every stage seed is derived from
/// `seed`, so one number pins the whole run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub version: u32,
    pub input: Option<PathBuf>,
    /// Not echoed: the echo lives inside this directory.
    #[serde(skip_serializing)]
    pub output_dir: Option<PathBuf>,
    pub csv: WideCsvFormat,
    pub dataset: DatasetSpec,
    pub classification_year: i32,
    pub clustering_year: i32,
    pub scaling: ScalingMethod,
    pub split: SplitSettings,
    pub train: TrainSettings,
    pub sweep: SweepSettings,
    pub kmeans: KMeansSettings,
    pub seed: u64,
    /// Worker threads for the sweep; 0 uses every available core.
    pub jobs: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            input: None,
            output_dir: None,
            csv: WideCsvFormat::default(),
            dataset: DatasetSpec::default(),
            classification_year: 2010,
            clustering_year: 2012,
            scaling: ScalingMethod::default(),
            split: SplitSettings::default(),
            train: TrainSettings::default(),
            sweep: SweepSettings::default(),
            kmeans: KMeansSettings::default(),
            seed: 0,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSettings {
    pub test_fraction: f64,
    pub stratified: bool,
}

impl Default for SplitSettings {
    fn default() -> Self {
        let d = SplitSpec::default();
        Self {
            test_fraction: d.test_fraction,
            stratified: d.stratified,
        }
    }
}

/// Gradient descent plus the topology used by `classify train`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSettings {
    pub hidden_neurons: usize,
    pub hidden_activation: Activation,
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch: BatchMode,
    pub shuffle: bool,
}

impl Default for TrainSettings {
    fn default() -> Self {
        let d = TrainConfig::default();
        Self {
            hidden_neurons: 20,
            hidden_activation: Activation::default(),
            epochs: d.epochs,
            learning_rate: d.learning_rate,
            batch: d.batch,
            shuffle: d.shuffle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub hidden_sizes: Vec<usize>,
    pub runs_per_config: usize,
    pub metric: ErrorMetric,
}

impl Default for SweepSettings {
    fn default() -> Self {
        let d = SweepConfig::default();
        Self {
            hidden_sizes: d.hidden_sizes,
            runs_per_config: d.runs_per_config,
            metric: d.metric,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitMethod {
    #[default]
    #[serde(rename = "kmeans++")]
    KMeansPlusPlus,
    #[serde(rename = "random")]
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KMeansSettings {
    pub k: usize,
    pub init: InitMethod,
    /// Starting centroids; overrides `init` when set.
    pub centroids: Option<Vec<Point>>,
    pub n_init: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub scale: bool,
    pub allow_degenerate: bool,
}

impl Default for KMeansSettings {
    fn default() -> Self {
        let d = KMeansConfig::default();
        Self {
            k: d.k,
            init: InitMethod::default(),
            centroids: None,
            n_init: d.n_init,
            max_iters: d.max_iters,
            tol: d.tol,
            scale: d.scale,
            allow_degenerate: d.allow_degenerate,
        }
    }
}

/// Independent stream seeds derived from the global seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stream {
    Split = 1,
    Sweep = 2,
    Train = 3,
    KMeans = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Usage(format!("invalid configuration: {m}")));
        if self.version != CONFIG_VERSION {
            return bad(format!(
                "version {} is not supported (expected {CONFIG_VERSION})",
                self.version
            ));
        }
        for (name, year) in [
            ("classification_year", self.classification_year),
            ("clustering_year", self.clustering_year),
        ] {
            if year <= 0 {
                return bad(format!("{name} must be a positive year, got {year}"));
            }
        }
        let names = self.dataset.indicators.classification_indicators();
        for (i, name) in names.iter().enumerate() {
            if name.trim().is_empty() {
                return bad("indicator names must not be empty".into());
            }
            if names[..i].contains(name) {
                return bad(format!(
                    "indicator {name:?} is mapped to more than one variable"
                ));
            }
        }
        if let Err(e) = self.dataset.thresholds.validate() {
            return bad(e.to_string());
        }
        if let Err(e) = self.split_spec().test_size(2) {
            return bad(e.to_string());
        }
        if let Err(e) = self.gd(0).validate() {
            return bad(e.to_string());
        }
        if self.train.hidden_neurons == 0 {
            return bad("train.hidden_neurons must be at least 1".into());
        }
        if self.sweep.hidden_sizes.is_empty() || self.sweep.hidden_sizes.contains(&0) {
            return bad("sweep.hidden_sizes must be non-empty and positive".into());
        }
        if self.sweep.runs_per_config == 0 {
            return bad("sweep.runs_per_config must be at least 1".into());
        }
        if self.kmeans.k == 0 {
            return bad("kmeans.k must be at least 1".into());
        }
        if let Some(c) = &self.kmeans.centroids {
            if c.len() != self.kmeans.k {
                return bad(format!(
                    "{} centroids given for k = {}",
                    c.len(),
                    self.kmeans.k
                ));
            }
        }
        Ok(())
    }

    fn stream_seed(&self, stream: Stream) -> u64 {
        splitmix64(self.seed ^ splitmix64(stream as u64))
    }

    pub fn split_spec(&self) -> SplitSpec {
        SplitSpec {
            test_fraction: self.split.test_fraction,
            stratified: self.split.stratified,
            seed: self.stream_seed(Stream::Split),
        }
    }

    fn gd(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            epochs: self.train.epochs,
            learning_rate: self.train.learning_rate,
            batch: self.train.batch,
            seed,
            shuffle: self.train.shuffle,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        self.gd(self.stream_seed(Stream::Train))
    }

    /// Initialization seed for `classify train`.
    pub fn train_init_seed(&self) -> u64 {
        self.stream_seed(Stream::Train)
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            hidden_sizes: self.sweep.hidden_sizes.clone(),
            runs_per_config: self.sweep.runs_per_config,
            train: self.gd(0),
            metric: self.sweep.metric,
            hidden_activation: self.train.hidden_activation,
            seed_base: self.stream_seed(Stream::Sweep),
        }
    }

    pub fn kmeans_config(&self) -> KMeansConfig {
        let k = &self.kmeans;
        KMeansConfig {
            k: k.k,
            init: match (&k.centroids, k.init) {
                (Some(c), _) => Init::Provided(c.clone()),
                (None, InitMethod::KMeansPlusPlus) => Init::KMeansPlusPlus,
                (None, InitMethod::Random) => Init::Random,
            },
            seed: self.stream_seed(Stream::KMeans),
            max_iters: k.max_iters,
            tol: k.tol,
            n_init: k.n_init,
            scale: k.scale,
            allow_degenerate: k.allow_degenerate,
        }
    }

    pub fn jobs(&self) -> usize {
        match self.jobs {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            n => n,
        }
    }

    pub fn input(&self) -> Result<&Path> {
        self.input.as_deref().ok_or_else(|| {
            CliError::Usage("no input file: pass --input or set \"input\" in the config".into())
        })
    }

    pub fn output_dir(&self) -> Result<&Path> {
        self.output_dir
            .as_deref()
            .ok_or_else(|| CliError::Usage("no output directory: pass --out".into()))
    }

    /// Pretty JSON as echoed into output directories.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}
