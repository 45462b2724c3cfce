use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::network::softmax;
use super::{AnnError, NetworkModel};
use crate::features::{HdiCategory, LabeledDataset};
use crate::matrix::Matrix;
use crate::rng;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum BatchMode {
    #[default]
    FullBatch,
    MiniBatch {
        size: usize,
    },
}

/// Gradient-descent settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    /// Zero is accepted and leaves the model unchanged.
    pub learning_rate: f64,
    pub batch: BatchMode,
    /// Seeds the row shuffle; unused when `shuffle` is off.
    pub seed: u64,
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            learning_rate: 0.5,
            batch: BatchMode::FullBatch,
            seed: 0,
            shuffle: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), AnnError> {
        if self.epochs == 0 {
            return Err(AnnError::InvalidConfig("epochs must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(AnnError::InvalidConfig(format!(
                "learning rate {} must be finite and non-negative",
                self.learning_rate
            )));
        }
        if self.batch == (BatchMode::MiniBatch { size: 0 }) {
            return Err(AnnError::InvalidConfig(
                "mini-batch size must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Trains a copy of `model` on the dataset's scaled features. The returned
/// model carries the dataset's scaling.
pub fn train(
    model: &NetworkModel,
    data: &LabeledDataset,
    config: &TrainConfig,
) -> Result<(NetworkModel, Vec<f64>), AnnError> {
    let (mut trained, trace) = train_on(model, &data.features, &data.label_indices(), config)?;
    trained.set_scaling(Some(data.scaling.clone()));
    Ok((trained, trace))
}

/// Trains a copy of `model` and returns it with the per-epoch mean loss.
///
/// The loss recorded for an epoch is the row-weighted mean of the batch
/// losses, each measured before that batch's update.
pub fn train_on(
    model: &NetworkModel,
    features: &Matrix,
    labels: &[usize],
    config: &TrainConfig,
) -> Result<(NetworkModel, Vec<f64>), AnnError> {
    config.validate()?;
    // validates shapes and labels once; the loop below runs unchecked
    model.loss(features, labels)?;

    let n = labels.len();
    let batch_size = match config.batch {
        BatchMode::FullBatch => n,
        BatchMode::MiniBatch { size } => size.min(n),
    }
    .max(1);
    let mut rng = rng::seeded(config.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut model = model.clone();
    let mut trace = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        if config.shuffle {
            order.shuffle(&mut rng);
        }
        let mut epoch_loss = 0.0;
        for batch in order.chunks(batch_size) {
            let (loss, grad) = model.batch_gradient(features, labels, batch.iter().copied());
            if !loss.is_finite() {
                return Err(AnnError::DivergedLoss { epoch });
            }
            epoch_loss += loss * batch.len() as f64;
            model.descend(&grad, config.learning_rate);
            if !model.all_finite() {
                return Err(AnnError::DivergedLoss { epoch });
            }
        }
        trace.push(epoch_loss / n.max(1) as f64);
    }
    Ok((model, trace))
}

/// Index of the most probable class per row; ties go to the lower index.
pub fn predict_indices(model: &NetworkModel, features: &Matrix) -> Result<Vec<usize>, AnnError> {
    if features.cols() != model.input_size() {
        return Err(AnnError::DimensionMismatch {
            expected: model.input_size(),
            actual: features.cols(),
        });
    }
    features
        .iter_rows()
        .map(|x| model.forward(x).map(|p| argmax(&p)))
        .collect()
}

pub(super) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// HDI category per row. The model must have four outputs.
pub fn predict(model: &NetworkModel, features: &Matrix) -> Result<Vec<HdiCategory>, AnnError> {
    if model.output_size() != HdiCategory::COUNT {
        return Err(AnnError::DimensionMismatch {
            expected: HdiCategory::COUNT,
            actual: model.output_size(),
        });
    }
    Ok(predict_indices(model, features)?
        .into_iter()
        .map(|i| HdiCategory::from_index(i).expect("four outputs"))
        .collect())
}

/// Probability rows, one per feature row.
pub(super) fn probabilities(
    model: &NetworkModel,
    features: &Matrix,
) -> Result<Vec<Vec<f64>>, AnnError> {
    features
        .iter_rows()
        .map(|x| model.logits(x).map(|z| softmax(&z)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ann::{init_network, Activation};
    use crate::matrix::Matrix;

    fn tiny() -> (Matrix, Vec<usize>) {
        let x = Matrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]).unwrap();
        (x, vec![0, 1, 1, 0])
    }

    #[test]
    fn zero_learning_rate_keeps_weights() {
        let (x, y) = tiny();
        let m = init_network(&[2, 3, 2], Activation::Sigmoid, 5).unwrap();
        let cfg = TrainConfig {
            epochs: 20,
            learning_rate: 0.0,
            ..Default::default()
        };
        let (trained, trace) = train_on(&m, &x, &y, &cfg).unwrap();
        assert_eq!(trained, m);
        assert_eq!(trace.len(), 20);
        assert!(trace.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn loss_decreases_on_full_batch() {
        let (x, y) = tiny();
        let m = init_network(&[2, 8, 2], Activation::Sigmoid, 5).unwrap();
        let cfg = TrainConfig {
            epochs: 200,
            learning_rate: 0.5,
            ..Default::default()
        };
        let (_, trace) = train_on(&m, &x, &y, &cfg).unwrap();
        assert!(trace.last().unwrap() < &trace[0]);
    }

    #[test]
    fn full_batch_is_deterministic() {
        let (x, y) = tiny();
        let m = init_network(&[2, 8, 2], Activation::Sigmoid, 5).unwrap();
        let cfg = TrainConfig::default();
        assert_eq!(
            train_on(&m, &x, &y, &cfg).unwrap(),
            train_on(&m, &x, &y, &cfg).unwrap()
        );
    }

    #[test]
    fn shuffled_minibatch_is_deterministic_per_seed() {
        let (x, y) = tiny();
        let m = init_network(&[2, 8, 2], Activation::Tanh, 5).unwrap();
        let cfg = TrainConfig {
            epochs: 30,
            batch: BatchMode::MiniBatch { size: 3 },
            shuffle: true,
            seed: 11,
            ..Default::default()
        };
        let a = train_on(&m, &x, &y, &cfg).unwrap();
        assert_eq!(a, train_on(&m, &x, &y, &cfg).unwrap());
        let other = TrainConfig { seed: 12, ..cfg };
        assert_ne!(a.0, train_on(&m, &x, &y, &other).unwrap().0);
    }

    #[test]
    fn divergence_is_reported() {
        let (x, y) = tiny();
        let m = init_network(&[2, 8, 2], Activation::Tanh, 5).unwrap();
        let cfg = TrainConfig {
            epochs: 50,
            learning_rate: f64::MAX,
            ..Default::default()
        };
        let err = train_on(&m, &x, &y, &cfg).unwrap_err();
        assert!(err.is_divergence(), "{err}");
    }

    #[test]
    fn config_validation() {
        let (x, y) = tiny();
        let m = init_network(&[2, 3, 2], Activation::Sigmoid, 5).unwrap();
        for cfg in [
            TrainConfig {
                epochs: 0,
                ..Default::default()
            },
            TrainConfig {
                learning_rate: -0.1,
                ..Default::default()
            },
            TrainConfig {
                batch: BatchMode::MiniBatch { size: 0 },
                ..Default::default()
            },
        ] {
            assert!(matches!(
                train_on(&m, &x, &y, &cfg),
                Err(AnnError::InvalidConfig(_))
            ));
        }
        assert!(matches!(
            train_on(&m, &x, &[0, 1, 2, 0], &TrainConfig::default()),
            Err(AnnError::LabelOutOfRange { label: 2, .. })
        ));
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax(&[0.0, 0.0, 1.0, 0.0]), 2);
        assert_eq!(argmax(&[0.4, 0.4, 0.1, 0.1]), 0);
        assert_eq!(argmax(&[0.1, 0.3, 0.3, 0.3]), 1);
    }

    #[test]
    fn one_hot_output_maps_to_high() {
        // hidden units saturate to ~1 and the output bias alone decides
        let w = vec![Matrix::zeros(2, 5), Matrix::zeros(4, 2)];
        let b = vec![vec![0.0; 2], vec![-50.0, -50.0, 50.0, -50.0]];
        let m = NetworkModel::from_parts(vec![5, 2, 4], w, b, Activation::Sigmoid, 0).unwrap();
        let x = Matrix::zeros(1, 5);
        assert_eq!(predict(&m, &x).unwrap(), vec![HdiCategory::High]);
        let two_out = init_network(&[5, 2, 2], Activation::Sigmoid, 0).unwrap();
        assert!(predict(&two_out, &x).is_err());
    }
}
