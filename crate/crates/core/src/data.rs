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

//! Multi-label signal datasets: synthetic generation, CSV I/O and splitting.
//!
//! CSV layout: header `id,labels,v0,…,v{l-1}`; `labels` holds the active class
//! indices joined by `;`; values are written in shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A signal with its multi-hot label vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub id: String,
    pub signal: Vec<f64>,
    pub labels: Vec<bool>,
}

impl Sample {
    pub fn active_classes(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.iter().enumerate().filter(|(_, &y)| y).map(|(i, _)| i)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub num_classes: usize,
    pub signal_len: usize,
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn refs(&self) -> Vec<&Sample> {
        self.samples.iter().collect()
    }

    /// Keeps only the listed sample indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            num_classes: self.num_classes,
            signal_len: self.signal_len,
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }

    pub fn labels(&self) -> Vec<Vec<bool>> {
        self.samples.iter().map(|s| s.labels.clone()).collect()
    }
}

/// Which half of a twin-channel signal to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Left,
    Right,
    Both,
}

impl Dataset {
    /// Restricts every signal to one half (or keeps both halves).
    pub fn channel(&self, channel: Channel) -> Result<Dataset> {
        if channel == Channel::Both {
            return Ok(self.clone());
        }
        if !self.signal_len.is_multiple_of(2) {
            return Err(Error::Config(format!("odd signal length {} has no halves", self.signal_len)));
        }
        let half = self.signal_len / 2;
        let range = match channel {
            Channel::Left => 0..half,
            _ => half..self.signal_len,
        };
        let samples =
            self.samples.iter().map(|s| Sample { signal: s.signal[range.clone()].to_vec(), ..s.clone() }).collect();
        Ok(Dataset { num_classes: self.num_classes, signal_len: half, samples })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub num_classes: usize,
    pub signal_len: usize,
    /// Voxels per class block.
    pub region_size: usize,
    /// Root-mean-square amplitude of a class template over its block.
    pub template_gain: f64,
    pub noise_sigma: f64,
    /// Mean number of active labels per sample before the all-zero resample.
    pub label_density: f64,
    pub num_samples: usize,
    pub seed: u64,
    /// Two half-length channels, each holding its own block per class.
    pub twin_channel: bool,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            num_classes: 4,
            signal_len: 256,
            region_size: 64,
            template_gain: 1.0,
            noise_sigma: 0.3,
            label_density: 0.3,
            num_samples: 2000,
            seed: 7,
            twin_channel: false,
        }
    }
}

impl SyntheticSpec {
    fn channel_len(&self) -> usize {
        if self.twin_channel {
            self.signal_len / 2
        } else {
            self.signal_len
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.num_classes == 0 || self.signal_len == 0 || self.region_size == 0 {
            return bad("classes, signal length and region size must be positive".into());
        }
        if self.twin_channel && !self.signal_len.is_multiple_of(2) {
            return bad(format!("twin-channel signal length {} must be even", self.signal_len));
        }
        if self.num_classes * self.region_size > self.channel_len() {
            return bad(format!(
                "{} classes × region {} exceed channel length {}",
                self.num_classes,
                self.region_size,
                self.channel_len()
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise sigma {} must be non-negative", self.noise_sigma));
        }
        if !(self.template_gain.is_finite() && self.template_gain > 0.0) {
            return bad(format!("template gain {} must be positive", self.template_gain));
        }
        if !(self.label_density > 0.0 && self.label_density <= self.num_classes as f64) {
            return bad(format!("label density {} must lie in (0, {}]", self.label_density, self.num_classes));
        }
        Ok(())
    }
}

/// Unit-RMS smooth bump of length `len`: a half-cosine envelope with a
/// seeded low-frequency ripple.
fn class_template(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let depth = rng.random_range(0.0..0.3);
    let raw: Vec<f64> = (0..len)
        .map(|j| {
            let x = (j as f64 + 0.5) / len as f64;
            let envelope = (std::f64::consts::PI * x).sin();
            envelope * (1.0 + depth * (std::f64::consts::TAU * x + phase).sin())
        })
        .collect();
    let rms = (raw.iter().map(|v| v * v).sum::<f64>() / len as f64).sqrt();
    raw.into_iter().map(|v| v / rms).collect()
}

/// Stream 0 seeds the templates; sample `i` draws from stream `i + 1`, so
/// generation order does not matter.
fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Class templates as `(offset, values)` pairs, one or two per class.
fn templates(spec: &SyntheticSpec) -> Vec<Vec<(usize, Vec<f64>)>> {
    let mut rng = stream_rng(spec.seed, 0);
    let channels: &[usize] = if spec.twin_channel { &[0, 1] } else { &[0] };
    let channel_len = spec.channel_len();
    (0..spec.num_classes)
        .map(|c| {
            channels
                .iter()
                .map(|&ch| {
                    let offset = ch * channel_len + c * spec.region_size;
                    (offset, class_template(spec.region_size, &mut rng))
                })
                .collect()
        })
        .collect()
}

/// Builds `N` samples: independent Bernoulli labels (resampled if none is
/// active), the sum of active class templates scaled by the gain, plus
/// Gaussian noise on every voxel.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let templates = templates(spec);
    let p_active = spec.label_density / spec.num_classes as f64;
    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::Config(e.to_string()))?;
    let samples = (0..spec.num_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(spec.seed, i as u64 + 1);
            let labels = loop {
                let labels: Vec<bool> = (0..spec.num_classes).map(|_| rng.random_bool(p_active)).collect();
                if labels.iter().any(|&y| y) {
                    break labels;
                }
            };
            let mut signal = vec![0.0; spec.signal_len];
            for (c, _) in labels.iter().enumerate().filter(|(_, &y)| y) {
                for (offset, t) in &templates[c] {
                    for (v, tv) in signal[*offset..].iter_mut().zip(t) {
                        *v += spec.template_gain * tv;
                    }
                }
            }
            if spec.noise_sigma > 0.0 {
                for v in &mut signal {
                    *v += noise.sample(&mut rng);
                }
            }
            Sample { id: format!("s{i:05}"), signal, labels }
        })
        .collect();
    Ok(Dataset { num_classes: spec.num_classes, signal_len: spec.signal_len, samples })
}

/// Sidecar metadata written next to a dataset CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub num_classes: usize,
    pub signal_len: usize,
    pub num_samples: usize,
    pub seed: Option<u64>,
    pub spec: Option<SyntheticSpec>,
}

pub fn to_csv(dataset: &Dataset) -> String {
    let mut out = String::from("id,labels");
    for i in 0..dataset.signal_len {
        let _ = write!(out, ",v{i}");
    }
    out.push('\n');
    for s in &dataset.samples {
        let labels: Vec<String> = s.active_classes().map(|c| c.to_string()).collect();
        let _ = write!(out, "{},{}", s.id, labels.join(";"));
        for v in &s.signal {
            let _ = write!(out, ",{v:?}");
        }
        out.push('\n');
    }
    out
}

pub fn save_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    std::fs::write(path, to_csv(dataset)).map_err(|e| Error::io(path, e))
}

pub fn save_manifest(manifest: &Manifest, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)? + "\n";
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads `manifest.json` from the CSV's directory, if present.
pub fn load_manifest_for(csv_path: &Path) -> Result<Option<Manifest>> {
    let path = csv_path.with_file_name("manifest.json");
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Ok(Some(serde_json::from_str(&text)?))
}

/// Parses dataset CSV text. `num_classes` overrides the label-derived count.
pub fn parse_csv(text: &str, path: &Path, num_classes: Option<usize>) -> Result<Dataset> {
    let parse_err = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let schema_err = |line: usize, msg: String| Error::Schema { path: path.to_path_buf(), line, msg };

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let Some((_, header)) = lines.next().filter(|(_, h)| !h.trim().is_empty()) else {
        return Err(Error::EmptyDataset);
    };
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 3 || columns[0] != "id" || columns[1] != "labels" {
        return Err(schema_err(1, "header must start with `id,labels,v0`".into()));
    }
    for (i, c) in columns[2..].iter().enumerate() {
        if *c != format!("v{i}") {
            return Err(schema_err(1, format!("column {} should be `v{i}`, found `{c}`", i + 2)));
        }
    }
    let signal_len = columns.len() - 2;

    let mut rows = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != signal_len + 2 {
            return Err(schema_err(
                line_no,
                format!("expected {signal_len} values, found {}", fields.len().saturating_sub(2)),
            ));
        }
        let mut active = Vec::new();
        for tok in fields[1].split(';').filter(|t| !t.is_empty()) {
            let c: usize = tok.parse().map_err(|_| parse_err(line_no, format!("bad label `{tok}`")))?;
            active.push(c);
        }
        let mut signal = Vec::with_capacity(signal_len);
        for (i, tok) in fields[2..].iter().enumerate() {
            let v: f64 = tok.trim().parse().map_err(|_| parse_err(line_no, format!("bad value `{tok}` in v{i}")))?;
            if !v.is_finite() {
                return Err(parse_err(line_no, format!("non-finite value in v{i}")));
            }
            signal.push(v);
        }
        rows.push((line_no, fields[0].to_string(), active, signal));
    }

    let inferred = rows.iter().flat_map(|r| r.2.iter()).max().map_or(0, |m| m + 1);
    let num_classes = num_classes.unwrap_or(inferred);
    let mut samples = Vec::with_capacity(rows.len());
    for (line_no, id, active, signal) in rows {
        let mut labels = vec![false; num_classes];
        for c in active {
            if c >= num_classes {
                return Err(schema_err(line_no, format!("label {c} outside {num_classes} classes")));
            }
            labels[c] = true;
        }
        samples.push(Sample { id, signal, labels });
    }
    Ok(Dataset { num_classes, signal_len, samples })
}

/// Loads a dataset CSV, taking the class count from a sibling
/// `manifest.json` when there is one.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest = load_manifest_for(path)?;
    let dataset = parse_csv(&text, path, manifest.as_ref().map(|m| m.num_classes))?;
    if let Some(m) = manifest {
        if m.signal_len != dataset.signal_len {
            return Err(Error::Schema {
                path: path.to_path_buf(),
                line: 1,
                msg: format!("manifest declares length {}, file has {}", m.signal_len, dataset.signal_len),
            });
        }
    }
    Ok(dataset)
}

/// Seeded shuffle, then the first `round(N·fraction)` samples go to train.
pub fn split(dataset: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!("split fraction {fraction} must lie in (0, 1)")));
    }
    let n = dataset.len();
    let n_train = (n as f64 * fraction).round() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::Config(format!("split of {n} samples at {fraction} leaves one side empty")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok((dataset.subset(&order[..n_train]), dataset.subset(&order[n_train..])))
}
