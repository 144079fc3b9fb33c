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

//! Trains the default quantum classifier (8 qubits, groups of 4) on the
//! default synthetic task and prints the learning curve.
//!
//! `RUST_LOG=info` shows per-epoch progress.

use hqcg::data::{generate_synthetic, split, SyntheticSpec};
use hqcg::train::{init_rng, train_loop, TrainConfig};
use hqcg::{HqcgConfig, HqcgModel};

fn main() -> hqcg::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let spec = SyntheticSpec::default();
    let dataset = generate_synthetic(&spec)?;
    let cfg = TrainConfig::default();
    let (train, val) = split(&dataset, 0.8, cfg.seed)?;
    let mut model = HqcgModel::random(HqcgConfig::new(8, 4, spec.num_classes), &mut init_rng(cfg.seed))?;
    println!("params: {}", model.param_counts());

    let report = train_loop(&mut model, &train.samples, &val.samples, &cfg)?;
    println!("{:>5} {:>9} {:>9} {:>9}", "epoch", "loss", "val acc", "val auc");
    for r in &report.epochs {
        let v = r.val.as_ref();
        println!(
            "{:>5} {:>9.5} {:>9.4} {:>9.4}",
            r.epoch,
            r.train.loss,
            v.and_then(|m| m.accuracy).unwrap_or(f64::NAN),
            v.and_then(|m| m.auc).unwrap_or(f64::NAN)
        );
    }
    println!("trained in {:.1}s", report.wall_clock_seconds);
    Ok(())
}
