use rand::distributions::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use super::AnnError;
use crate::features::Scaler;
use crate::matrix::Matrix;
use crate::rng;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    #[default]
    #[serde(rename = "logistic-sigmoid")]
    Sigmoid,
    #[serde(rename = "tanh")]
    Tanh,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Self::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Self::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the activation value `a = f(z)`.
    fn slope(self, a: f64) -> f64 {
        match self {
            Self::Sigmoid => a * (1.0 - a),
            Self::Tanh => 1.0 - a * a,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputActivation {
    #[default]
    Softmax,
}

/// Layer sizes, weights and biases of a fully connected network.
///
/// `weights[l]` maps layer `l` to layer `l + 1` and has shape
/// `(layer_sizes[l + 1], layer_sizes[l])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkModel {
    layer_sizes: Vec<usize>,
    weights: Vec<Matrix>,
    biases: Vec<Vec<f64>>,
    hidden_activation: Activation,
    output_activation: OutputActivation,
    seed: u64,
    /// Input scaling the network was trained under, if known.
    scaling: Option<Scaler>,
}

fn check_topology(layer_sizes: &[usize]) -> Result<(), AnnError> {
    if layer_sizes.len() < 3 {
        return Err(AnnError::BadTopology(format!(
            "need input, hidden and output layers, got {layer_sizes:?}"
        )));
    }
    if layer_sizes.contains(&0) {
        return Err(AnnError::BadTopology(format!(
            "layer sizes must be positive, got {layer_sizes:?}"
        )));
    }
    Ok(())
}

/// Weights uniform in `±sqrt(6 / (fan_in + fan_out))`, biases zero.
pub fn init_network(
    layer_sizes: &[usize],
    hidden_activation: Activation,
    seed: u64,
) -> Result<NetworkModel, AnnError> {
    check_topology(layer_sizes)?;
    let mut rng = rng::seeded(seed);
    let weights = layer_sizes
        .windows(2)
        .map(|w| {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let dist = Uniform::new_inclusive(-limit, limit);
            let data = (0..fan_in * fan_out)
                .map(|_| dist.sample(&mut rng))
                .collect();
            Matrix::from_vec(fan_out, fan_in, data).expect("sized above")
        })
        .collect();
    let biases = layer_sizes[1..].iter().map(|&n| vec![0.0; n]).collect();
    Ok(NetworkModel {
        layer_sizes: layer_sizes.to_vec(),
        weights,
        biases,
        hidden_activation,
        output_activation: OutputActivation::Softmax,
        seed,
        scaling: None,
    })
}

/// Per-parameter gradient, shaped like the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    /// Same order as [`NetworkModel::parameters`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w.as_slice());
            out.extend_from_slice(b);
        }
        out
    }
}

pub(super) struct Trace {
    /// `activations[0]` is the input, the rest are hidden-layer outputs.
    activations: Vec<Vec<f64>>,
    logits: Vec<f64>,
}

pub(super) fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// `log(softmax(logits)[class])`, computed without forming the probabilities.
pub(super) fn log_softmax_at(logits: &[f64], class: usize) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + logits.iter().map(|z| (z - max).exp()).sum::<f64>().ln();
    logits[class] - lse
}

impl NetworkModel {
    /// Assembles a model from explicit parameters, checking every shape.
    pub fn from_parts(
        layer_sizes: Vec<usize>,
        weights: Vec<Matrix>,
        biases: Vec<Vec<f64>>,
        hidden_activation: Activation,
        seed: u64,
    ) -> Result<Self, AnnError> {
        let model = Self {
            layer_sizes,
            weights,
            biases,
            hidden_activation,
            output_activation: OutputActivation::Softmax,
            seed,
            scaling: None,
        };
        model.validate()?;
        Ok(model)
    }

    pub(super) fn validate(&self) -> Result<(), AnnError> {
        check_topology(&self.layer_sizes)?;
        let layers = self.layer_sizes.len() - 1;
        if self.weights.len() != layers || self.biases.len() != layers {
            return Err(AnnError::BadTopology(format!(
                "{} weight matrices and {} bias vectors for {layers} layers",
                self.weights.len(),
                self.biases.len()
            )));
        }
        for (l, pair) in self.layer_sizes.windows(2).enumerate() {
            if self.weights[l].shape() != (pair[1], pair[0]) || self.biases[l].len() != pair[1] {
                return Err(AnnError::BadTopology(format!(
                    "layer {l}: weights {:?}, bias {}, expected ({}, {}) and {}",
                    self.weights[l].shape(),
                    self.biases[l].len(),
                    pair[1],
                    pair[0],
                    pair[1]
                )));
            }
        }
        if !self.all_finite() {
            return Err(AnnError::BadTopology("non-finite parameter".into()));
        }
        Ok(())
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.layer_sizes.last().expect("validated topology")
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    pub fn hidden_activation(&self) -> Activation {
        self.hidden_activation
    }

    pub fn output_activation(&self) -> OutputActivation {
        self.output_activation
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn scaling(&self) -> Option<&Scaler> {
        self.scaling.as_ref()
    }

    pub fn set_scaling(&mut self, scaling: Option<Scaler>) {
        self.scaling = scaling;
    }

    pub fn parameter_count(&self) -> usize {
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| w.as_slice().len() + b.len())
            .sum()
    }

    /// All weights and biases, layer by layer: weights row-major, then biases.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w.as_slice());
            out.extend_from_slice(b);
        }
        out
    }

    pub fn set_parameters(&mut self, params: &[f64]) -> Result<(), AnnError> {
        if params.len() != self.parameter_count() {
            return Err(AnnError::DimensionMismatch {
                expected: self.parameter_count(),
                actual: params.len(),
            });
        }
        let mut rest = params;
        for (w, b) in self.weights.iter_mut().zip(&mut self.biases) {
            let (head, tail) = rest.split_at(w.as_slice().len());
            w.as_mut_slice().copy_from_slice(head);
            let (head, tail) = tail.split_at(b.len());
            b.copy_from_slice(head);
            rest = tail;
        }
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.weights.iter().all(Matrix::all_finite)
            && self.biases.iter().flatten().all(|v| v.is_finite())
    }

    fn check_input(&self, input: &[f64]) -> Result<(), AnnError> {
        if input.len() != self.input_size() {
            return Err(AnnError::DimensionMismatch {
                expected: self.input_size(),
                actual: input.len(),
            });
        }
        if input.iter().any(|v| !v.is_finite()) {
            return Err(AnnError::NonFiniteInput);
        }
        Ok(())
    }

    pub(super) fn trace(&self, input: &[f64]) -> Trace {
        let mut activations = vec![input.to_vec()];
        let last = self.weights.len() - 1;
        for (w, b) in self.weights[..last].iter().zip(&self.biases) {
            let z = w.mul_vec(activations.last().expect("non-empty"));
            let a = z
                .iter()
                .zip(b)
                .map(|(z, b)| self.hidden_activation.apply(z + b))
                .collect();
            activations.push(a);
        }
        let logits = self.weights[last]
            .mul_vec(activations.last().expect("non-empty"))
            .iter()
            .zip(&self.biases[last])
            .map(|(z, b)| z + b)
            .collect();
        Trace {
            activations,
            logits,
        }
    }

    /// Output-layer pre-activations.
    pub fn logits(&self, input: &[f64]) -> Result<Vec<f64>, AnnError> {
        self.check_input(input)?;
        Ok(self.trace(input).logits)
    }

    /// Class probabilities for one input row.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>, AnnError> {
        self.logits(input).map(|z| softmax(&z))
    }

    fn check_batch(&self, features: &Matrix, labels: &[usize]) -> Result<(), AnnError> {
        if features.cols() != self.input_size() {
            return Err(AnnError::DimensionMismatch {
                expected: self.input_size(),
                actual: features.cols(),
            });
        }
        if features.rows() != labels.len() {
            return Err(AnnError::DimensionMismatch {
                expected: features.rows(),
                actual: labels.len(),
            });
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= self.output_size()) {
            return Err(AnnError::LabelOutOfRange {
                label,
                outputs: self.output_size(),
            });
        }
        if !features.all_finite() {
            return Err(AnnError::NonFiniteInput);
        }
        Ok(())
    }

    /// Mean cross-entropy of `labels` under the model.
    pub fn loss(&self, features: &Matrix, labels: &[usize]) -> Result<f64, AnnError> {
        self.check_batch(features, labels)?;
        let n = labels.len().max(1) as f64;
        let total: f64 = features
            .iter_rows()
            .zip(labels)
            .map(|(x, &y)| -log_softmax_at(&self.trace(x).logits, y))
            .sum();
        Ok(total / n)
    }

    /// Mean cross-entropy and its gradient over all rows.
    pub fn loss_and_gradient(
        &self,
        features: &Matrix,
        labels: &[usize],
    ) -> Result<(f64, Gradients), AnnError> {
        self.check_batch(features, labels)?;
        Ok(self.batch_gradient(features, labels, 0..labels.len()))
    }

    /// Unchecked core of [`Self::loss_and_gradient`] over the rows in `rows`.
    pub(super) fn batch_gradient(
        &self,
        features: &Matrix,
        labels: &[usize],
        rows: impl ExactSizeIterator<Item = usize>,
    ) -> (f64, Gradients) {
        let mut grad = Gradients {
            weights: self
                .weights
                .iter()
                .map(|w| Matrix::zeros(w.rows(), w.cols()))
                .collect(),
            biases: self.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        };
        let n = rows.len().max(1) as f64;
        let mut total = 0.0;

        for r in rows {
            let x = features.row(r);
            let y = labels[r];
            let trace = self.trace(x);
            total -= log_softmax_at(&trace.logits, y);

            // softmax + cross-entropy: dL/dz = p - onehot(y)
            let mut delta = softmax(&trace.logits);
            delta[y] -= 1.0;

            for l in (0..self.weights.len()).rev() {
                let input = &trace.activations[l];
                let gw = &mut grad.weights[l];
                for (i, &d) in delta.iter().enumerate() {
                    for (g, &a) in gw.row_mut(i).iter_mut().zip(input) {
                        *g += d * a;
                    }
                    grad.biases[l][i] += d;
                }
                if l > 0 {
                    let back = self.weights[l].tr_mul_vec(&delta);
                    delta = back
                        .iter()
                        .zip(input)
                        .map(|(b, &a)| b * self.hidden_activation.slope(a))
                        .collect();
                }
            }
        }

        for w in &mut grad.weights {
            w.as_mut_slice().iter_mut().for_each(|g| *g /= n);
        }
        for b in &mut grad.biases {
            b.iter_mut().for_each(|g| *g /= n);
        }
        (total / n, grad)
    }

    /// `params -= step * grad`
    pub(super) fn descend(&mut self, grad: &Gradients, step: f64) {
        for (w, g) in self.weights.iter_mut().zip(&grad.weights) {
            for (p, d) in w.as_mut_slice().iter_mut().zip(g.as_slice()) {
                *p -= step * d;
            }
        }
        for (b, g) in self.biases.iter_mut().zip(&grad.biases) {
            for (p, d) in b.iter_mut().zip(g) {
                *p -= step * d;
            }
        }
    }
}
