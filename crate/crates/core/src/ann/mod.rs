//! Feedforward classifier: one or more sigmoid (or tanh) hidden layers and a
//! softmax output, trained by plain gradient descent on cross-entropy.
//!
//! [`sweep`] repeats training over a grid of hidden-layer sizes with seeded
//! restarts and keeps the size with the lowest mean validation error.

mod io;
mod network;
mod sweep;
mod train;

use thiserror::Error;

pub use io::{load_model, model_to_string, save_model, MODEL_MAGIC, MODEL_VERSION};
pub use network::{init_network, Activation, Gradients, NetworkModel, OutputActivation};
pub use sweep::{
    evaluate_error, sweep, ErrorMetric, RunRecord, SweepConfig, SweepEntry, SweepOutcome,
    SweepResult,
};
pub use train::{predict, predict_indices, train, train_on, BatchMode, TrainConfig};

#[derive(Debug, Error)]
pub enum AnnError {
    #[error("bad topology: {0}")]
    BadTopology(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("non-finite input")]
    NonFiniteInput,
    #[error("label {label} out of range for {outputs} outputs")]
    LabelOutOfRange { label: usize, outputs: usize },
    #[error("loss diverged at epoch {epoch}")]
    DivergedLoss { epoch: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("hidden size {hidden}, run {run}: {source}")]
    Run {
        hidden: usize,
        run: usize,
        #[source]
        source: Box<AnnError>,
    },
    #[error("corrupt model file: {0}")]
    CorruptModelFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl AnnError {
    /// True when the failure (possibly inside a sweep run) is a divergence.
    pub fn is_divergence(&self) -> bool {
        match self {
            Self::DivergedLoss { .. } => true,
            Self::Run { source, .. } => source.is_divergence(),
            _ => false,
        }
    }
}
