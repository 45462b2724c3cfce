use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{InitMethod, PipelineConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "hdi",
    version,
    about = "Regional HDI classification and clustering from wide open-data exports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a wide CSV export and report indicator completeness
    Ingest(IngestArgs),
    /// Train, sweep or apply the HDI category classifier
    Classify {
        #[command(subcommand)]
        action: ClassifyAction,
    },
    /// Cluster regions on (HDI, GDP) and plot the result
    Cluster(ClusterArgs),
    /// Confusion matrix and error rates for category predictions
    Evaluate(EvaluateArgs),
    /// Run ingest, sweep, cluster and evaluate into one output tree
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum ClassifyAction {
    /// Train one network of a fixed size
    Train(TrainArgs),
    /// Train every hidden size several times and keep the best
    Sweep(SweepArgs),
    /// Predict HDI categories with a saved model
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Pipeline configuration (JSON); flags override its values
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Wide CSV export
    #[arg(short, long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output directory, created if needed
    #[arg(short, long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Global seed; every stage seed derives from it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for the sweep (0 = all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Field delimiter of the input CSV
    #[arg(long)]
    pub delimiter: Option<char>,
    /// Drop unparsable rows and exact duplicates instead of failing
    #[arg(long)]
    pub noise_removal: bool,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Year whose data builds the classification dataset
    #[arg(long)]
    pub year: Option<i32>,
    /// Full passes over the training rows
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Gradient-descent step size
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Fraction of regions held out for testing
    #[arg(long)]
    pub test_fraction: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Hidden-layer size
    #[arg(long)]
    pub hidden: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Hidden-layer sizes to try, comma separated
    #[arg(long, value_delimiter = ',')]
    pub hidden_sizes: Option<Vec<usize>>,
    /// Training runs per hidden size
    #[arg(long)]
    pub runs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub common: Common,
    /// Model file written by `classify train` or `classify sweep`
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Dataset CSV (`region,gdp,npp,niu,nl,np[,label]`) instead of a wide export
    #[arg(long, value_name = "FILE", conflicts_with = "input")]
    pub dataset: Option<PathBuf>,
    /// Year to read predictors from when using a wide export
    #[arg(long)]
    pub year: Option<i32>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub common: Common,
    /// Year whose HDI and GDP are clustered
    #[arg(long)]
    pub year: Option<i32>,
    /// Number of clusters
    #[arg(short)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub init: Option<InitFlag>,
    /// Starting centroids (a centroids.json from an earlier run)
    #[arg(long, value_name = "FILE")]
    pub centroids: Option<PathBuf>,
    /// Min-max scale both axes before clustering
    #[arg(long)]
    pub scale: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitFlag {
    #[value(name = "kmeans++")]
    KMeansPlusPlus,
    Random,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum OrderFlag {
    #[default]
    Descending,
    Ascending,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Output directory, created if needed
    #[arg(short, long, value_name = "DIR")]
    pub out: PathBuf,
    /// CSV with `actual,predicted` columns
    #[arg(long, value_name = "FILE", conflicts_with_all = ["predictions", "matrix"])]
    pub pairs: Option<PathBuf>,
    /// Prediction CSV from `classify predict`; needs --labels
    #[arg(
        long,
        value_name = "FILE",
        requires = "labels",
        conflicts_with = "matrix"
    )]
    pub predictions: Option<PathBuf>,
    /// CSV with `region,actual_category` columns
    #[arg(long, value_name = "FILE", requires = "predictions")]
    pub labels: Option<PathBuf>,
    /// Confusion-matrix counts: `actual,<class>...` header, one row per actual class
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    /// Total count stated alongside the matrix, checked against it
    #[arg(long, requires = "stated_correct")]
    pub stated_total: Option<u64>,
    /// Correct count stated alongside the matrix
    #[arg(long, requires = "stated_total")]
    pub stated_correct: Option<u64>,
    /// Class order in the rendered matrix
    #[arg(long, value_enum, default_value_t)]
    pub order: OrderFlag,
    /// Keep all-zero classes in the rendered matrix
    #[arg(long)]
    pub show_empty: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
}

impl Common {
    /// Config file (or defaults) with these flags applied on top.
    pub fn resolve(&self) -> Result<PipelineConfig> {
        let mut c = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(v) = &self.input {
            c.input = Some(v.clone());
        }
        if let Some(v) = &self.out {
            c.output_dir = Some(v.clone());
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.jobs {
            c.jobs = v;
        }
        if let Some(v) = self.delimiter {
            c.csv.delimiter = v;
        }
        if self.noise_removal {
            c.csv.noise_removal = true;
        }
        Ok(c)
    }
}

impl ModelArgs {
    pub fn apply(&self, c: &mut PipelineConfig) {
        if let Some(v) = self.year {
            c.classification_year = v;
        }
        if let Some(v) = self.epochs {
            c.train.epochs = v;
        }
        if let Some(v) = self.learning_rate {
            c.train.learning_rate = v;
        }
        if let Some(v) = self.test_fraction {
            c.split.test_fraction = v;
        }
    }
}

impl From<InitFlag> for InitMethod {
    fn from(f: InitFlag) -> Self {
        match f {
            InitFlag::KMeansPlusPlus => Self::KMeansPlusPlus,
            InitFlag::Random => Self::Random,
        }
    }
}

pub fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}
