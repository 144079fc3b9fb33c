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

//! Single-document JSON checkpoints for either model kind.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::baseline::MlpModel;
use crate::circuit::HqcgModel;
use crate::data::Sample;
use crate::train::{TrainConfig, Trainable};
use crate::{Error, HqcgConfig, Result};

pub const FORMAT: &str = "hqcg-checkpoint/1";

/// Architecture of a stored model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Quantum { config: HqcgConfig },
    Classical { widths: [usize; 4] },
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::Quantum { .. } => "quantum",
            ModelSpec::Classical { .. } => "classical",
        }
    }
}

/// How the training data was divided, so evaluation can rebuild the split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitInfo {
    pub train_fraction: f64,
    pub seed: u64,
    pub num_train: usize,
    pub num_val: usize,
    pub signal_len: usize,
    pub num_classes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub model: ModelSpec,
    pub seed: u64,
    pub train: TrainConfig,
    pub split: SplitInfo,
    pub params: Vec<f64>,
}

/// Either trainable model behind one interface.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyModel {
    Quantum(HqcgModel),
    Classical(MlpModel),
}

impl AnyModel {
    pub fn spec(&self) -> ModelSpec {
        match self {
            AnyModel::Quantum(m) => ModelSpec::Quantum { config: *m.config() },
            AnyModel::Classical(m) => ModelSpec::Classical { widths: m.widths() },
        }
    }

    pub fn kind(&self) -> &'static str {
        self.spec().kind()
    }

    fn inner(&self) -> &dyn Trainable {
        match self {
            AnyModel::Quantum(m) => m,
            AnyModel::Classical(m) => m,
        }
    }
}

impl Trainable for AnyModel {
    fn num_params(&self) -> usize {
        self.inner().num_params()
    }

    fn params(&self) -> &[f64] {
        match self {
            AnyModel::Quantum(m) => m.params(),
            AnyModel::Classical(m) => Trainable::params(m),
        }
    }

    fn params_mut(&mut self) -> &mut [f64] {
        match self {
            AnyModel::Quantum(m) => m.params_mut(),
            AnyModel::Classical(m) => Trainable::params_mut(m),
        }
    }

    fn predict(&self, samples: &[&Sample]) -> Result<Vec<Vec<f64>>> {
        self.inner().predict(samples)
    }

    fn loss_and_gradients(&self, batch: &[&Sample]) -> Result<(f64, Vec<f64>)> {
        self.inner().loss_and_gradients(batch)
    }
}

impl Checkpoint {
    pub fn new(model: &AnyModel, seed: u64, train: TrainConfig, split: SplitInfo) -> Self {
        Checkpoint { format: FORMAT.into(), model: model.spec(), seed, train, split, params: model.params().to_vec() }
    }

    /// Rebuilds the model, checking the parameter vector against the architecture.
    pub fn model(&self, path: &Path) -> Result<AnyModel> {
        let field_err = |field: &str, e: Error| Error::Checkpoint {
            path: path.to_path_buf(),
            field: field.into(),
            msg: e.to_string(),
        };
        let model = match &self.model {
            ModelSpec::Quantum { config } => {
                AnyModel::Quantum(HqcgModel::with_params(*config, self.params.clone()).map_err(|e| match e {
                    Error::Shape(_) => field_err("params", e),
                    other => field_err("model.config", other),
                })?)
            }
            ModelSpec::Classical { widths } => {
                AnyModel::Classical(MlpModel::from_params(*widths, self.params.clone()).map_err(|e| match e {
                    Error::Shape(_) => field_err("params", e),
                    other => field_err("model.widths", other),
                })?)
            }
        };
        Ok(model)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    /// Parses a checkpoint field by field so errors name the offending one.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |field: &str, msg: String| Error::Checkpoint { path: path.to_path_buf(), field: field.into(), msg };
        let root: Value = serde_json::from_str(text).map_err(|e| err("<document>", e.to_string()))?;
        let Value::Object(map) = root else {
            return Err(err("<document>", "expected a JSON object".into()));
        };
        fn field<T: DeserializeOwned>(map: &Map<String, Value>, name: &str, path: &Path) -> Result<T> {
            let value = map.get(name).ok_or_else(|| Error::Checkpoint {
                path: path.to_path_buf(),
                field: name.into(),
                msg: "missing".into(),
            })?;
            serde_json::from_value(value.clone()).map_err(|e| Error::Checkpoint {
                path: path.to_path_buf(),
                field: name.into(),
                msg: e.to_string(),
            })
        }
        let format: String = field(&map, "format", path)?;
        if format != FORMAT {
            return Err(err("format", format!("unsupported format `{format}`, expected `{FORMAT}`")));
        }
        let checkpoint = Checkpoint {
            format,
            model: field(&map, "model", path)?,
            seed: field(&map, "seed", path)?,
            train: field(&map, "train", path)?,
            split: field(&map, "split", path)?,
            params: field(&map, "params", path)?,
        };
        if let Some(k) = checkpoint.params.iter().position(|v| !v.is_finite()) {
            return Err(err("params", format!("entry {k} is not finite")));
        }
        Ok(checkpoint)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}
