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

//! Quantum classifier vs. the two-hidden-layer MLP on one split, writing
//! both runs (checkpoint, metrics, curves) plus a comparison table.
//!
//! `cargo run --release --example compare_baseline -- out_dir`

use std::path::PathBuf;

use hqcg::cli::{comparison_csv, comparison_rows, train_and_save, ModelKind, RunConfig};
use hqcg::data::{generate_synthetic, save_dataset, SyntheticSpec};
use hqcg::TrainConfig;

fn main() -> hqcg::Result<()> {
    let out: PathBuf =
        std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("hqcg-compare"));
    std::fs::create_dir_all(&out).map_err(|e| hqcg::Error::Config(e.to_string()))?;
    let dataset = generate_synthetic(&SyntheticSpec { num_samples: 600, ..SyntheticSpec::default() })?;
    let data_path = out.join("dataset.csv");
    save_dataset(&dataset, &data_path)?;

    let mut runs = Vec::new();
    for model in [ModelKind::Quantum, ModelKind::Classical] {
        let dir = out.join(format!("{model:?}").to_lowercase());
        std::fs::create_dir_all(&dir).map_err(|e| hqcg::Error::Config(e.to_string()))?;
        let cfg = RunConfig {
            model,
            data: data_path.clone(),
            out: dir.clone(),
            qubits: None,
            group_size: 4,
            depth: 1,
            hidden: 64,
            train_fraction: 0.8,
            train: TrainConfig { epochs: 10, ..TrainConfig::default() },
        };
        runs.push(train_and_save(&cfg, &dataset, &dir)?.metrics);
    }
    print!("{}", comparison_csv(&comparison_rows(&runs.iter().collect::<Vec<_>>())));
    println!("curves written under {}", out.display());
    Ok(())
}
