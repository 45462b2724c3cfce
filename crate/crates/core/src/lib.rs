//! Regional development analytics.
//!
//! Reads wide-format indicator tables (one row per region and indicator, one
//! column per year), builds a labeled dataset that maps five socioeconomic
//! predictors to an HDI category, trains a feedforward classifier with a
//! hidden-size sweep, and clusters regions in (HDI, GDP) space with Lloyd's
//! K-means.
//!
//! Module map:
//!
//! * [`ingest`]: wide CSV parsing, completeness reports, row-complete slices.
//! * [`features`]: HDI categories, dataset assembly, scaling, train/test split.
//! * [`ann`]: the network, backprop training, sweep and model files.
//! * [`kmeans`]: Lloyd's algorithm, cluster summaries and range overlaps.
//! * [`eval`]: confusion matrices, metrics, partition agreement.
//! * [`synth`]: seeded synthetic fixtures shaped like the real exports.

pub mod ann;
pub mod error;
pub mod eval;
pub mod features;
pub mod ingest;
pub mod kmeans;
pub mod matrix;
pub mod rng;
mod serde_f64;
pub mod synth;

pub use ann::{NetworkModel, SweepResult, TrainConfig};
pub use error::{Error, Result};
pub use eval::ConfusionMatrix;
pub use features::{CategoryThresholds, HdiCategory, LabeledDataset};
pub use ingest::IndicatorTable;
pub use kmeans::{ClusterModel, ClusterSummary};
pub use matrix::Matrix;
