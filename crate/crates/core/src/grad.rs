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

//! Exact loss gradients for [`HqcgModel`] by adjoint differentiation through
//! the statevector, plus a central-difference oracle.
//!
//! Per sample, the feature layers are run forward once and then walked back
//! with the adjoint `λ = Σ_i g_i ⟨φ_i|ψ⟩ |φ_i⟩`, where `g_i = ∂L/∂p_i`.
//! Class-state parameters see the batch through `μ_i = Σ_s g_{s,i} ⟨ψ_s|φ_i⟩^* |ψ_s⟩`,
//! so each class circuit is walked back once per batch rather than per sample.
//!
//! Per-sample work runs in parallel; every reduction is summed in batch order,
//! so results do not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::HqcgModel;
use crate::data::Sample;
use crate::encoding::encode_into;
use crate::qstate::kernels;
use crate::train::{bce_loss, PROB_FLOOR};
use crate::{Error, Result};

/// `∂/∂p_i` of the mean-over-classes BCE. Zero where the clamp is active.
pub fn bce_prob_gradient(probs: &[f64], labels: &[bool]) -> Vec<f64> {
    let c = probs.len() as f64;
    probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            if !(PROB_FLOOR..=1.0 - PROB_FLOOR).contains(&p) {
                return 0.0;
            }
            if y {
                -1.0 / (c * p)
            } else {
                1.0 / (c * (1.0 - p))
            }
        })
        .collect()
}

struct SampleGrad {
    loss: f64,
    grad: Vec<f64>,
    psi: Vec<Complex64>,
    /// `g_i · conj(⟨φ_i|ψ⟩)` per class.
    class_coeffs: Vec<Complex64>,
}

fn check_batch(model: &HqcgModel, batch: &[&Sample]) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for s in batch {
        if s.labels.len() != model.num_classes() {
            return Err(Error::Shape(format!(
                "sample {} has {} labels, model has {} classes",
                s.id,
                s.labels.len(),
                model.num_classes()
            )));
        }
    }
    Ok(())
}

fn sample_gradient(
    model: &HqcgModel,
    class_states: &[Vec<Complex64>],
    sample: &Sample,
    weight: f64,
) -> Result<SampleGrad> {
    let theta = model.params();
    let mut psi = encode_into(&sample.signal, model.num_qubits())?;
    model.apply_layers(&mut psi);

    let overlaps: Vec<Complex64> = class_states.iter().map(|phi| kernels::inner(phi, &psi)).collect();
    let probs: Vec<f64> = overlaps.iter().map(|c| c.norm_sqr().min(1.0)).collect();
    let loss = bce_loss(&probs, &sample.labels)?;
    if !loss.is_finite() {
        return Err(Error::Numeric(format!("non-finite loss on sample {}", sample.id)));
    }
    let dl_dp: Vec<f64> = bce_prob_gradient(&probs, &sample.labels).iter().map(|g| g * weight).collect();

    let mut lambda = vec![Complex64::new(0.0, 0.0); psi.len()];
    for ((phi, c), g) in class_states.iter().zip(&overlaps).zip(&dl_dp) {
        let coeff = c * g;
        for (l, p) in lambda.iter_mut().zip(phi) {
            *l += coeff * p;
        }
    }
    let class_coeffs = overlaps.iter().zip(&dl_dp).map(|(c, g)| c.conj() * g).collect();

    let mut grad = vec![0.0; theta.len()];
    let mut state = psi.clone();
    for layer in model.feature_layers().into_iter().rev() {
        layer.backprop(theta, &mut state, &mut lambda, &mut grad);
    }
    if let Some(k) = grad.iter().position(|g| !g.is_finite()) {
        return Err(Error::Numeric(format!("non-finite gradient {k} on sample {}", sample.id)));
    }
    Ok(SampleGrad { loss, grad, psi, class_coeffs })
}

/// Mean BCE over batch and classes, and its exact gradient.
pub fn loss_and_gradients(model: &HqcgModel, batch: &[&Sample]) -> Result<(f64, Vec<f64>)> {
    check_batch(model, batch)?;
    let theta = model.params();
    let class_states: Vec<Vec<Complex64>> = model.class_states().into_iter().map(|s| s.into_amplitudes()).collect();
    let weight = 1.0 / batch.len() as f64;

    let per_sample: Vec<SampleGrad> =
        batch.par_iter().map(|s| sample_gradient(model, &class_states, s, weight)).collect::<Result<_>>()?;

    let dim = 1usize << model.num_qubits();
    let mut loss = 0.0;
    let mut grad = vec![0.0; theta.len()];
    let mut mu = vec![vec![Complex64::new(0.0, 0.0); dim]; class_states.len()];
    for s in &per_sample {
        loss += s.loss;
        for (g, v) in grad.iter_mut().zip(&s.grad) {
            *g += v;
        }
        for (m, coeff) in mu.iter_mut().zip(&s.class_coeffs) {
            for (mi, p) in m.iter_mut().zip(&s.psi) {
                *mi += coeff * p;
            }
        }
    }
    loss *= weight;

    let class_grads: Vec<Vec<f64>> = model
        .class_circuits()
        .par_iter()
        .zip(class_states)
        .zip(mu)
        .map(|((circuit, mut phi), mut lambda)| {
            let mut g = vec![0.0; theta.len()];
            circuit.backprop(theta, &mut phi, &mut lambda, &mut g);
            g
        })
        .collect();
    for (circuit, g) in model.class_circuits().iter().zip(&class_grads) {
        for k in circuit.param_range() {
            grad[k] += g[k];
        }
    }
    Ok((loss, grad))
}

/// Mean BCE of the model on a batch, evaluated by plain forward passes.
pub fn batch_loss(model: &HqcgModel, batch: &[&Sample]) -> Result<f64> {
    check_batch(model, batch)?;
    let class_states = model.class_states();
    let losses: Vec<f64> = batch
        .par_iter()
        .map(|s| {
            let probs = model.scores(&s.signal, &class_states)?;
            let loss = bce_loss(&probs, &s.labels)?;
            if loss.is_finite() {
                Ok(loss)
            } else {
                Err(Error::Numeric(format!("non-finite loss on sample {}", s.id)))
            }
        })
        .collect::<Result<_>>()?;
    Ok(losses.iter().sum::<f64>() / batch.len() as f64)
}

/// Central differences `(L(θ+εe_k) − L(θ−εe_k)) / 2ε` for every parameter.
pub fn finite_diff_oracle(model: &HqcgModel, batch: &[&Sample], eps: f64) -> Result<Vec<f64>> {
    if !(1e-6..=1e-3).contains(&eps) {
        return Err(Error::Config(format!("finite-difference step {eps} outside [1e-6, 1e-3]")));
    }
    (0..model.num_params())
        .map(|k| {
            let mut shifted = model.clone();
            shifted.params_mut()[k] += eps;
            let plus = batch_loss(&shifted, batch)?;
            shifted.params_mut()[k] = model.params()[k] - eps;
            let minus = batch_loss(&shifted, batch)?;
            Ok((plus - minus) / (2.0 * eps))
        })
        .collect()
}

/// Finite-difference agreement rule: `|g − fd| ≤ max(1e-7, 1e-4·|fd|)`.
pub fn within_fd_tolerance(analytic: f64, numeric: f64) -> bool {
    (analytic - numeric).abs() <= f64::max(1e-7, 1e-4 * numeric.abs())
}
