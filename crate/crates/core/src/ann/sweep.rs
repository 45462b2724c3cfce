use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::train::{argmax, probabilities};
use super::{init_network, train_on, Activation, AnnError, NetworkModel, TrainConfig};
use crate::features::{HdiCategory, LabeledDataset};
use crate::matrix::Matrix;

/// What a sweep run is scored by on the validation rows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorMetric {
    /// Number of misclassified rows.
    #[default]
    MisclassificationCount,
    /// Sum over rows of the squared distance between the probability vector
    /// and the one-hot target.
    Sse,
    /// Mean cross-entropy.
    CrossEntropy,
}

pub fn evaluate_error(
    model: &NetworkModel,
    features: &Matrix,
    labels: &[usize],
    metric: ErrorMetric,
) -> Result<f64, AnnError> {
    if features.rows() != labels.len() {
        return Err(AnnError::DimensionMismatch {
            expected: features.rows(),
            actual: labels.len(),
        });
    }
    if features.cols() != model.input_size() {
        return Err(AnnError::DimensionMismatch {
            expected: model.input_size(),
            actual: features.cols(),
        });
    }
    Ok(match metric {
        ErrorMetric::MisclassificationCount => probabilities(model, features)?
            .iter()
            .zip(labels)
            .filter(|(p, &y)| argmax(p) != y)
            .count() as f64,
        ErrorMetric::Sse => probabilities(model, features)?
            .iter()
            .zip(labels)
            .map(|(p, &y)| {
                p.iter()
                    .enumerate()
                    .map(|(k, &pk)| {
                        let t = if k == y { 1.0 } else { 0.0 };
                        (pk - t) * (pk - t)
                    })
                    .sum::<f64>()
            })
            .sum(),
        ErrorMetric::CrossEntropy => model.loss(features, labels)?,
    })
}

/// Grid of hidden sizes and restarts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub hidden_sizes: Vec<usize>,
    pub runs_per_config: usize,
    pub train: TrainConfig,
    pub metric: ErrorMetric,
    pub hidden_activation: Activation,
    /// Run `i` of every hidden size initializes and shuffles with
    /// `seed_base + i`.
    pub seed_base: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            hidden_sizes: vec![10, 13, 16, 20],
            runs_per_config: 10,
            train: TrainConfig::default(),
            metric: ErrorMetric::default(),
            hidden_activation: Activation::default(),
            seed_base: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub seed: u64,
    /// `inf` when the run diverged.
    #[serde(with = "crate::serde_f64")]
    pub error: f64,
    pub diverged: bool,
    pub diverged_epoch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub hidden_neurons: usize,
    pub runs: Vec<RunRecord>,
    #[serde(with = "crate::serde_f64")]
    pub mean_error: f64,
}

impl SweepEntry {
    fn new(hidden_neurons: usize, runs: Vec<RunRecord>) -> Self {
        let mean_error = mean(&runs);
        Self {
            hidden_neurons,
            runs,
            mean_error,
        }
    }

    pub fn run_errors(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.error).collect()
    }
}

fn mean(runs: &[RunRecord]) -> f64 {
    runs.iter().map(|r| r.error).sum::<f64>() / runs.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metric: ErrorMetric,
    pub runs_per_config: usize,
    pub entries: Vec<SweepEntry>,
    /// Lowest mean error; ties resolved toward the smaller hidden size.
    pub best: SweepEntry,
    /// Lowest-error run inside `best` (lowest index on ties).
    pub best_run_index: usize,
    /// Hidden sizes sharing the best mean error, when more than one does.
    pub ties: Vec<usize>,
}

impl SweepResult {
    /// `hidden_neurons,run_index,error`
    pub fn write_runs_csv<W: Write>(&self, mut sink: W) -> std::io::Result<()> {
        writeln!(sink, "hidden_neurons,run_index,error")?;
        for e in &self.entries {
            for r in &e.runs {
                writeln!(sink, "{},{},{}", e.hidden_neurons, r.run_index, r.error)?;
            }
        }
        Ok(())
    }

    pub fn run_count(&self) -> usize {
        self.entries.iter().map(|e| e.runs.len()).sum()
    }
}

/// A sweep result together with the best run's trained model. The model is
/// `None` only if every run of the best entry diverged.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub result: SweepResult,
    pub best_model: Option<NetworkModel>,
}

/// Trains `runs_per_config` seeded restarts for each hidden size and scores
/// them on `validation`. `jobs > 1` runs restarts on a thread pool; output
/// order and values do not depend on it.
pub fn sweep(
    train: &LabeledDataset,
    validation: &LabeledDataset,
    config: &SweepConfig,
    jobs: usize,
) -> Result<SweepOutcome, AnnError> {
    if config.hidden_sizes.is_empty() {
        return Err(AnnError::InvalidConfig("no hidden sizes to sweep".into()));
    }
    if config.runs_per_config == 0 {
        return Err(AnnError::InvalidConfig(
            "runs_per_config must be at least 1".into(),
        ));
    }
    if let Some(&h) = config.hidden_sizes.iter().find(|&&h| h == 0) {
        return Err(AnnError::BadTopology(format!("hidden size {h}")));
    }
    config.train.validate()?;
    let inputs = train.features.cols();
    if validation.features.cols() != inputs {
        return Err(AnnError::DimensionMismatch {
            expected: inputs,
            actual: validation.features.cols(),
        });
    }

    let train_labels = train.label_indices();
    let val_labels = validation.label_indices();
    let tasks: Vec<(usize, usize)> = config
        .hidden_sizes
        .iter()
        .flat_map(|&h| (0..config.runs_per_config).map(move |r| (h, r)))
        .collect();

    let run = |&(hidden, run_index): &(usize, usize)| {
        single_run(
            train,
            &train_labels,
            validation,
            &val_labels,
            config,
            hidden,
            run_index,
        )
        .map_err(|e| AnnError::Run {
            hidden,
            run: run_index,
            source: Box::new(e),
        })
    };
    let outcomes: Vec<(RunRecord, Option<NetworkModel>)> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| AnnError::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| tasks.par_iter().map(run).collect::<Result<Vec<_>, _>>())?
    } else {
        tasks.iter().map(run).collect::<Result<Vec<_>, _>>()?
    };

    let mut outcomes = outcomes.into_iter();
    let mut entries = Vec::with_capacity(config.hidden_sizes.len());
    let mut models = Vec::with_capacity(config.hidden_sizes.len());
    for &hidden in &config.hidden_sizes {
        let (runs, run_models): (Vec<_>, Vec<_>) =
            outcomes.by_ref().take(config.runs_per_config).unzip();
        entries.push(SweepEntry::new(hidden, runs));
        models.push(run_models);
    }

    let best_idx = (0..entries.len())
        .min_by(|&a, &b| {
            let (ea, eb) = (&entries[a], &entries[b]);
            ea.mean_error
                .total_cmp(&eb.mean_error)
                .then(ea.hidden_neurons.cmp(&eb.hidden_neurons))
        })
        .expect("non-empty grid");
    let best = entries[best_idx].clone();
    let mut ties: Vec<usize> = entries
        .iter()
        .filter(|e| e.mean_error == best.mean_error)
        .map(|e| e.hidden_neurons)
        .collect();
    if ties.len() < 2 {
        ties.clear();
    }
    let best_run_index = (0..best.runs.len())
        .min_by(|&a, &b| best.runs[a].error.total_cmp(&best.runs[b].error))
        .expect("runs_per_config >= 1");
    let best_model = models.swap_remove(best_idx).swap_remove(best_run_index);

    Ok(SweepOutcome {
        result: SweepResult {
            metric: config.metric,
            runs_per_config: config.runs_per_config,
            entries,
            best,
            best_run_index,
            ties,
        },
        best_model,
    })
}

fn single_run(
    train: &LabeledDataset,
    train_labels: &[usize],
    validation: &LabeledDataset,
    val_labels: &[usize],
    config: &SweepConfig,
    hidden: usize,
    run_index: usize,
) -> Result<(RunRecord, Option<NetworkModel>), AnnError> {
    let seed = config.seed_base.wrapping_add(run_index as u64);
    let sizes = [train.features.cols(), hidden, HdiCategory::COUNT];
    let model = init_network(&sizes, config.hidden_activation, seed)?;
    let train_config = TrainConfig {
        seed,
        ..config.train
    };
    match train_on(&model, &train.features, train_labels, &train_config) {
        Ok((mut trained, _)) => {
            trained.set_scaling(Some(train.scaling.clone()));
            let error = evaluate_error(&trained, &validation.features, val_labels, config.metric)?;
            // a finite model can still overflow cross-entropy on validation rows
            let diverged = !error.is_finite();
            Ok((
                RunRecord {
                    run_index,
                    seed,
                    error: if diverged { f64::INFINITY } else { error },
                    diverged,
                    diverged_epoch: None,
                },
                Some(trained),
            ))
        }
        Err(AnnError::DivergedLoss { epoch }) => Ok((
            RunRecord {
                run_index,
                seed,
                error: f64::INFINITY,
                diverged: true,
                diverged_epoch: Some(epoch),
            },
            None,
        )),
        Err(e) => Err(e),
    }
}
