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

//! Training loop shared by the quantum and classical models: clamped binary
//! cross-entropy, AdamW with per-step cosine annealing, cell accuracy and
//! macro ROC AUC.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Sample;
use crate::{Error, Result};

/// Probabilities are clamped to `[PROB_FLOOR, 1 − PROB_FLOOR]` before `ln`.
pub const PROB_FLOOR: f64 = 1e-7;

pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_FLOOR, 1.0 - PROB_FLOOR)
}

/// `−(1/C)·Σ [y ln p + (1−y) ln(1−p)]` over clamped probabilities.
pub fn bce_loss(probs: &[f64], labels: &[bool]) -> Result<f64> {
    if probs.len() != labels.len() || probs.is_empty() {
        return Err(Error::Shape(format!("{} probabilities for {} labels", probs.len(), labels.len())));
    }
    let sum: f64 = probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = clamp_prob(p);
            if y {
                p.ln()
            } else {
                (1.0 - p).ln()
            }
        })
        .sum();
    Ok(-sum / probs.len() as f64)
}

/// `lr_max · ½(1 + cos(π t / T))`.
pub fn cosine_lr(step: usize, total: usize, lr_max: f64) -> Result<f64> {
    if total == 0 {
        return Err(Error::Config("cosine schedule needs at least one step".into()));
    }
    if step > total {
        return Err(Error::Config(format!("step {step} beyond schedule length {total}")));
    }
    if step == total {
        return Ok(0.0);
    }
    let phase = std::f64::consts::PI * step as f64 / total as f64;
    Ok(lr_max * 0.5 * (1.0 + phase.cos()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub lr_max: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub weight_decay: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_adam: f64,
    pub seed: u64,
    /// Full train/val evaluation every this many epochs (and after the last).
    pub eval_every: usize,
    pub threshold: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr_max: 0.01,
            epochs: 30,
            batch_size: 64,
            weight_decay: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            eps_adam: 1e-8,
            seed: 7,
            eval_every: 1,
            threshold: 0.5,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.lr_max > 0.0 && self.lr_max.is_finite()) {
            return bad("lr_max must be positive");
        }
        if !(self.beta1 > 0.0 && self.beta1 < 1.0 && self.beta2 > 0.0 && self.beta2 < 1.0) {
            return bad("beta1 and beta2 must lie in (0, 1)");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1");
        }
        if self.eval_every == 0 {
            return bad("eval_every must be at least 1");
        }
        if !(self.weight_decay >= 0.0 && self.eps_adam > 0.0) {
            return bad("weight_decay must be non-negative and eps_adam positive");
        }
        Ok(())
    }
}

/// First and second moment estimates for AdamW.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl AdamState {
    pub fn new(num_params: usize) -> Self {
        AdamState { m: vec![0.0; num_params], v: vec![0.0; num_params] }
    }
}

/// One decoupled-weight-decay Adam update at step `t ≥ 1` with rate `lr`.
pub fn adamw_step(
    theta: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    t: u64,
    lr: f64,
    cfg: &TrainConfig,
) -> Result<()> {
    let p = theta.len();
    if grads.len() != p || state.m.len() != p || state.v.len() != p {
        return Err(Error::Shape("optimizer vectors differ in length".into()));
    }
    if t == 0 {
        return Err(Error::Config("optimizer step counter starts at 1".into()));
    }
    if let Some(k) = grads.iter().chain(theta.iter()).position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite optimizer input at index {}", k % p)));
    }
    let bias1 = 1.0 - cfg.beta1.powi(t as i32);
    let bias2 = 1.0 - cfg.beta2.powi(t as i32);
    for k in 0..p {
        let g = grads[k];
        state.m[k] = cfg.beta1 * state.m[k] + (1.0 - cfg.beta1) * g;
        state.v[k] = cfg.beta2 * state.v[k] + (1.0 - cfg.beta2) * g * g;
        let m_hat = state.m[k] / bias1;
        let v_hat = state.v[k] / bias2;
        theta[k] -= lr * (m_hat / (v_hat.sqrt() + cfg.eps_adam)) + lr * cfg.weight_decay * theta[k];
    }
    Ok(())
}

fn check_matrix_shapes(probs: &[Vec<f64>], labels: &[Vec<bool>]) -> Result<()> {
    if probs.len() != labels.len() {
        return Err(Error::Shape(format!("{} prediction rows for {} label rows", probs.len(), labels.len())));
    }
    if let Some(i) = probs.iter().zip(labels).position(|(p, l)| p.len() != l.len()) {
        return Err(Error::Shape(format!("row {i}: prediction and label widths differ")));
    }
    Ok(())
}

/// Fraction of (sample, class) cells where `p ≥ threshold` equals the label.
pub fn accuracy(probs: &[Vec<f64>], labels: &[Vec<bool>], threshold: f64) -> Result<f64> {
    check_matrix_shapes(probs, labels)?;
    let mut cells = 0usize;
    let mut correct = 0usize;
    for (p_row, l_row) in probs.iter().zip(labels) {
        for (&p, &y) in p_row.iter().zip(l_row) {
            cells += 1;
            if (p >= threshold) == y {
                correct += 1;
            }
        }
    }
    if cells == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(correct as f64 / cells as f64)
}

/// Mann–Whitney AUC: fraction of (positive, negative) pairs ordered
/// correctly, ties counted one half.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Shape(format!("{} scores for {} labels", scores.len(), labels.len())));
    }
    let positives = labels.iter().filter(|&&y| y).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedAuc);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Count, for each positive, the negatives strictly below plus half the tied ones.
    let mut wins = 0.0;
    let mut negatives_below = 0usize;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let tied = &order[i..j];
        let tied_neg = tied.iter().filter(|&&k| !labels[k]).count();
        let tied_pos = tied.len() - tied_neg;
        wins += tied_pos as f64 * (negatives_below as f64 + 0.5 * tied_neg as f64);
        negatives_below += tied_neg;
        i = j;
    }
    Ok(wins / (positives as f64 * negatives as f64))
}

/// Per-class AUC averaged over the classes where it is defined.
pub fn macro_auc(probs: &[Vec<f64>], labels: &[Vec<bool>]) -> Result<f64> {
    check_matrix_shapes(probs, labels)?;
    let classes = labels.first().map_or(0, Vec::len);
    let mut aucs = Vec::with_capacity(classes);
    for c in 0..classes {
        let scores: Vec<f64> = probs.iter().map(|r| r[c]).collect();
        let ys: Vec<bool> = labels.iter().map(|r| r[c]).collect();
        match roc_auc(&scores, &ys) {
            Ok(a) => aucs.push(a),
            Err(Error::UndefinedAuc) => log::warn!("class {c}: AUC undefined, skipped in macro average"),
            Err(e) => return Err(e),
        }
    }
    if aucs.is_empty() {
        return Err(Error::UndefinedAuc);
    }
    Ok(aucs.iter().sum::<f64>() / aucs.len() as f64)
}

/// A model the training loop can optimize.
pub trait Trainable {
    fn num_params(&self) -> usize;
    fn params(&self) -> &[f64];
    fn params_mut(&mut self) -> &mut [f64];
    /// Class probabilities per sample, rows in input order.
    fn predict(&self, samples: &[&Sample]) -> Result<Vec<Vec<f64>>>;
    /// Mean BCE over the batch and its gradient.
    fn loss_and_gradients(&self, batch: &[&Sample]) -> Result<(f64, Vec<f64>)>;
}

impl Trainable for crate::circuit::HqcgModel {
    fn num_params(&self) -> usize {
        self.num_params()
    }

    fn params(&self) -> &[f64] {
        self.params()
    }

    fn params_mut(&mut self) -> &mut [f64] {
        self.params_mut()
    }

    fn predict(&self, samples: &[&Sample]) -> Result<Vec<Vec<f64>>> {
        let signals: Vec<&[f64]> = samples.iter().map(|s| s.signal.as_slice()).collect();
        self.forward_batch(&signals)
    }

    fn loss_and_gradients(&self, batch: &[&Sample]) -> Result<(f64, Vec<f64>)> {
        crate::grad::loss_and_gradients(self, batch)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitMetrics {
    pub loss: f64,
    pub accuracy: Option<f64>,
    pub auc: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Learning rate of the last step in the epoch.
    pub lr: f64,
    pub train: SplitMetrics,
    pub val: Option<SplitMetrics>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub epochs: Vec<EpochRecord>,
    /// Excluded from the serialized summary so report files stay reproducible.
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl TrainReport {
    pub fn last(&self) -> Option<&EpochRecord> {
        self.epochs.last()
    }

    /// `epoch,split,loss,accuracy,auc,lr`, one row per epoch per split.
    /// Missing metrics are empty cells.
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("epoch,split,loss,accuracy,auc,lr\n");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.epochs {
            let splits = std::iter::once(("train", &r.train)).chain(r.val.as_ref().map(|v| ("val", v)));
            for (name, m) in splits {
                let _ = writeln!(out, "{},{name},{},{},{},{}", r.epoch, m.loss, opt(m.accuracy), opt(m.auc), r.lr);
            }
        }
        out
    }

    pub fn write_curves(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.curves_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Predictions and metrics of a model on a set of samples.
pub fn evaluate<M: Trainable + ?Sized>(
    model: &M,
    samples: &[&Sample],
    threshold: f64,
) -> Result<(SplitMetrics, Vec<Vec<f64>>)> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let probs = model.predict(samples)?;
    let labels: Vec<Vec<bool>> = samples.iter().map(|s| s.labels.clone()).collect();
    let mut loss = 0.0;
    for (p, s) in probs.iter().zip(samples) {
        let l = bce_loss(p, &s.labels)?;
        if !l.is_finite() {
            return Err(Error::Numeric(format!("non-finite loss on sample {}", s.id)));
        }
        loss += l;
    }
    let metrics = SplitMetrics {
        loss: loss / samples.len() as f64,
        accuracy: Some(accuracy(&probs, &labels, threshold)?),
        auc: macro_auc(&probs, &labels).ok(),
    };
    Ok((metrics, probs))
}

/// Generator for parameter initialization (stream 0 of `seed`).
pub fn init_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for per-epoch shuffling (stream 1 of `seed`).
fn shuffle_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

fn with_context(e: Error, epoch: usize, step: usize) -> Error {
    match e {
        Error::Numeric(msg) => Error::Numeric(format!("epoch {epoch} step {step}: {msg}")),
        other => other,
    }
}

/// Runs `cfg.epochs` epochs of shuffled mini-batch AdamW on `train`,
/// recording metrics after every epoch. Deterministic in `(model, data, cfg)`.
pub fn train_loop<M: Trainable>(
    model: &mut M,
    train: &[Sample],
    val: &[Sample],
    cfg: &TrainConfig,
) -> Result<TrainReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = TrainReport { epochs: Vec::new(), wall_clock_seconds: 0.0 };
    if cfg.epochs == 0 {
        return Ok(report);
    }
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let steps_per_epoch = train.len().div_ceil(cfg.batch_size);
    let total_steps = cfg.epochs * steps_per_epoch;
    let mut rng = shuffle_rng(cfg.seed);
    let mut adam = AdamState::new(model.num_params());
    let mut order: Vec<usize> = (0..train.len()).collect();
    let train_refs: Vec<&Sample> = train.iter().collect();
    let val_refs: Vec<&Sample> = val.iter().collect();
    let mut step = 0usize;

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut running = 0.0;
        let mut lr = 0.0;
        for (b, chunk) in order.chunks(cfg.batch_size).enumerate() {
            let batch: Vec<&Sample> = chunk.iter().map(|&i| &train[i]).collect();
            let (loss, grads) = model.loss_and_gradients(&batch).map_err(|e| with_context(e, epoch, b))?;
            if !loss.is_finite() || loss < 0.0 {
                return Err(Error::Numeric(format!("epoch {epoch} step {b}: loss {loss}")));
            }
            running += loss;
            lr = cosine_lr(step, total_steps, cfg.lr_max)?;
            step += 1;
            adamw_step(model.params_mut(), &grads, &mut adam, step as u64, lr, cfg)
                .map_err(|e| with_context(e, epoch, b))?;
        }

        let evaluate_now = (epoch + 1) % cfg.eval_every == 0 || epoch + 1 == cfg.epochs;
        let (train_metrics, val_metrics) = if evaluate_now {
            let (t, _) =
                evaluate(model, &train_refs, cfg.threshold).map_err(|e| with_context(e, epoch, steps_per_epoch))?;
            let v = if val_refs.is_empty() {
                None
            } else {
                Some(evaluate(model, &val_refs, cfg.threshold).map_err(|e| with_context(e, epoch, steps_per_epoch))?.0)
            };
            (t, v)
        } else {
            let t = SplitMetrics { loss: running / steps_per_epoch as f64, accuracy: None, auc: None };
            (t, None)
        };
        log::info!(
            "epoch {epoch}: lr {lr:.6} train loss {:.5} val {:?}",
            train_metrics.loss,
            val_metrics.as_ref().map(|m| (m.loss, m.accuracy, m.auc))
        );
        report.epochs.push(EpochRecord { epoch, lr, train: train_metrics, val: val_metrics });
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
