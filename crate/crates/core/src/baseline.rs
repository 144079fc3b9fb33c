// Copyright 2026 The HQCG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Classical comparator: a fully connected network `l → h → h → C` with
//! rectifier hidden layers and logistic outputs, trained by the same loop.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Sample;
use crate::grad::bce_prob_gradient;
use crate::train::{bce_loss, Trainable};
use crate::{Error, Result};

pub const DEFAULT_HIDDEN: usize = 64;

/// Weights are stored row-major per layer in one flat vector:
/// `[W1 (h×l), b1, W2 (h×h), b2, W3 (C×h), b3]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    widths: [usize; 4],
    params: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl MlpModel {
    /// All weights and biases zero.
    pub fn zeros(input: usize, hidden: usize, classes: usize) -> Result<Self> {
        if input == 0 || hidden == 0 || classes == 0 {
            return Err(Error::Config("layer widths must be positive".into()));
        }
        let widths = [input, hidden, hidden, classes];
        let count = (0..3).map(|i| widths[i + 1] * (widths[i] + 1)).sum();
        Ok(MlpModel { widths, params: vec![0.0; count] })
    }

    /// Uniform Glorot initialization for weights, zero biases.
    pub fn random<R: Rng + ?Sized>(input: usize, hidden: usize, classes: usize, rng: &mut R) -> Result<Self> {
        let mut model = Self::zeros(input, hidden, classes)?;
        let widths = model.widths;
        let mut offset = 0;
        for l in 0..3 {
            let (fan_in, fan_out) = (widths[l], widths[l + 1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for w in &mut model.params[offset..offset + fan_in * fan_out] {
                *w = rng.random_range(-limit..limit);
            }
            offset += fan_out * (fan_in + 1);
        }
        Ok(model)
    }

    pub fn from_params(widths: [usize; 4], params: Vec<f64>) -> Result<Self> {
        let mut model = Self::zeros(widths[0], widths[1], widths[3])?;
        if widths[1] != widths[2] {
            return Err(Error::Config("both hidden layers must share one width".into()));
        }
        if params.len() != model.params.len() {
            return Err(Error::Shape(format!(
                "network {widths:?} has {} parameters, got {}",
                model.params.len(),
                params.len()
            )));
        }
        model.params = params;
        Ok(model)
    }

    pub fn widths(&self) -> [usize; 4] {
        self.widths
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// `(weights offset, bias offset)` of layer `l`.
    fn layer_offsets(&self, l: usize) -> (usize, usize) {
        let w = self.widths;
        let start: usize = (0..l).map(|i| w[i + 1] * (w[i] + 1)).sum();
        (start, start + w[l + 1] * w[l])
    }

    /// Pre-activations and activations of every layer; `acts[0]` is the input.
    fn forward_trace(&self, signal: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut acts = vec![signal.to_vec()];
        let mut pre = Vec::with_capacity(3);
        for l in 0..3 {
            let (w_off, b_off) = self.layer_offsets(l);
            let (fan_in, fan_out) = (self.widths[l], self.widths[l + 1]);
            let input = &acts[l];
            let z: Vec<f64> = (0..fan_out)
                .map(|o| {
                    let row = &self.params[w_off + o * fan_in..w_off + (o + 1) * fan_in];
                    row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + self.params[b_off + o]
                })
                .collect();
            let a =
                if l < 2 { z.iter().map(|v| v.max(0.0)).collect() } else { z.iter().map(|&v| sigmoid(v)).collect() };
            pre.push(z);
            acts.push(a);
        }
        (pre, acts)
    }

    fn check_width(&self, signal: &[f64]) -> Result<()> {
        if signal.len() != self.widths[0] {
            return Err(Error::Shape(format!(
                "network expects {} inputs, signal has {}",
                self.widths[0],
                signal.len()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, signal: &[f64]) -> Result<Vec<f64>> {
        self.check_width(signal)?;
        let (_, mut acts) = self.forward_trace(signal);
        Ok(acts.pop().unwrap_or_default())
    }

    fn sample_gradient(&self, sample: &Sample, weight: f64) -> Result<(f64, Vec<f64>)> {
        self.check_width(&sample.signal)?;
        if sample.labels.len() != self.widths[3] {
            return Err(Error::Shape(format!("sample {} label width mismatch", sample.id)));
        }
        let (pre, acts) = self.forward_trace(&sample.signal);
        let probs = &acts[3];
        let loss = bce_loss(probs, &sample.labels)?;
        if !loss.is_finite() {
            return Err(Error::Numeric(format!("non-finite loss on sample {}", sample.id)));
        }
        let mut grad = vec![0.0; self.params.len()];
        // delta = ∂L/∂z of the current layer
        let mut delta: Vec<f64> = bce_prob_gradient(probs, &sample.labels)
            .iter()
            .zip(probs)
            .map(|(g, p)| g * p * (1.0 - p) * weight)
            .collect();
        for l in (0..3).rev() {
            let (w_off, b_off) = self.layer_offsets(l);
            let fan_in = self.widths[l];
            let input = &acts[l];
            for (o, d) in delta.iter().enumerate() {
                grad[b_off + o] += d;
                for (i, x) in input.iter().enumerate() {
                    grad[w_off + o * fan_in + i] += d * x;
                }
            }
            if l > 0 {
                delta = (0..fan_in)
                    .map(|i| {
                        if pre[l - 1][i] <= 0.0 {
                            return 0.0;
                        }
                        delta.iter().enumerate().map(|(o, d)| d * self.params[w_off + o * fan_in + i]).sum()
                    })
                    .collect();
            }
        }
        Ok((loss, grad))
    }

    /// Mean BCE over the batch and its exact gradient in parameter layout.
    pub fn gradients(&self, batch: &[&Sample]) -> Result<(f64, Vec<f64>)> {
        if batch.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let weight = 1.0 / batch.len() as f64;
        let per_sample: Vec<(f64, Vec<f64>)> =
            batch.par_iter().map(|s| self.sample_gradient(s, weight)).collect::<Result<_>>()?;
        let mut loss = 0.0;
        let mut grad = vec![0.0; self.params.len()];
        for (l, g) in &per_sample {
            loss += l;
            for (a, b) in grad.iter_mut().zip(g) {
                *a += b;
            }
        }
        Ok((loss * weight, grad))
    }

    pub fn batch_loss(&self, batch: &[&Sample]) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut total = 0.0;
        for s in batch {
            total += bce_loss(&self.forward(&s.signal)?, &s.labels)?;
        }
        Ok(total / batch.len() as f64)
    }

    /// Central-difference gradient of [`MlpModel::batch_loss`].
    pub fn finite_diff(&self, batch: &[&Sample], eps: f64) -> Result<Vec<f64>> {
        (0..self.params.len())
            .into_par_iter()
            .map(|k| {
                let mut m = self.clone();
                m.params[k] += eps;
                let plus = m.batch_loss(batch)?;
                m.params[k] = self.params[k] - eps;
                let minus = m.batch_loss(batch)?;
                Ok((plus - minus) / (2.0 * eps))
            })
            .collect()
    }
}

pub fn mlp_forward(model: &MlpModel, signal: &[f64]) -> Result<Vec<f64>> {
    model.forward(signal)
}

pub fn mlp_gradients(model: &MlpModel, batch: &[&Sample]) -> Result<(f64, Vec<f64>)> {
    model.gradients(batch)
}

impl Trainable for MlpModel {
    fn num_params(&self) -> usize {
        self.params.len()
    }

    fn params(&self) -> &[f64] {
        &self.params
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn predict(&self, samples: &[&Sample]) -> Result<Vec<Vec<f64>>> {
        samples.par_iter().map(|s| self.forward(&s.signal)).collect()
    }

    fn loss_and_gradients(&self, batch: &[&Sample]) -> Result<(f64, Vec<f64>)> {
        self.gradients(batch)
    }
}
