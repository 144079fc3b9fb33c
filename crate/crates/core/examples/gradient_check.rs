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

//! Compares the adjoint gradient of the quantum model and the backprop
//! gradient of the classical baseline against central differences.

use hqcg::baseline::MlpModel;
use hqcg::data::{generate_synthetic, SyntheticSpec};
use hqcg::grad::{finite_diff_oracle, loss_and_gradients, within_fd_tolerance};
use hqcg::train::init_rng;
use hqcg::{HqcgConfig, HqcgModel, Sample};

fn report(name: &str, analytic: &[f64], numeric: &[f64]) {
    let worst = analytic.iter().zip(numeric).map(|(a, f)| (a - f).abs()).fold(0.0, f64::max);
    let ok = analytic.iter().zip(numeric).filter(|(a, f)| within_fd_tolerance(**a, **f)).count();
    println!("{name}: {ok}/{} parameters within tolerance, worst |diff| {worst:.2e}", analytic.len());
}

fn main() -> hqcg::Result<()> {
    let spec = SyntheticSpec {
        num_classes: 3,
        signal_len: 64,
        region_size: 16,
        num_samples: 8,
        label_density: 1.0,
        ..SyntheticSpec::default()
    };
    let data = generate_synthetic(&spec)?;
    let batch: Vec<&Sample> = data.samples.iter().collect();

    let quantum = HqcgModel::random(HqcgConfig::new(6, 3, 3), &mut init_rng(1))?;
    let (loss, grad) = loss_and_gradients(&quantum, &batch)?;
    println!("quantum loss {loss:.6} over {} params", grad.len());
    report("quantum", &grad, &finite_diff_oracle(&quantum, &batch, 1e-5)?);

    let mlp = MlpModel::random(64, 16, 3, &mut init_rng(1))?;
    let (loss, grad) = mlp.gradients(&batch)?;
    println!("classical loss {loss:.6} over {} params", grad.len());
    report("classical", &grad, &mlp.finite_diff(&batch, 1e-5)?);
    Ok(())
}
