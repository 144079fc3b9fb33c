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

//! Generates a small synthetic dataset, writes it as CSV, reads it back and
//! splits it; also shows the twin-channel layout.

use hqcg::data::{generate_synthetic, load_dataset, save_dataset, split, Channel, SyntheticSpec};

fn main() -> hqcg::Result<()> {
    let spec = SyntheticSpec { num_samples: 10, signal_len: 32, region_size: 8, ..SyntheticSpec::default() };
    let dataset = generate_synthetic(&spec)?;
    for s in &dataset.samples {
        let active: Vec<usize> = s.active_classes().collect();
        let energy: f64 = s.signal.iter().map(|v| v * v).sum();
        println!("{}  classes {active:?}  energy {energy:.3}", s.id);
    }

    let dir = std::env::temp_dir().join("hqcg-synthetic-example");
    std::fs::create_dir_all(&dir).map_err(|e| hqcg::Error::Config(e.to_string()))?;
    let path = dir.join("dataset.csv");
    save_dataset(&dataset, &path)?;
    let back = load_dataset(&path)?;
    println!("round trip identical: {}", back == dataset);

    let (train, val) = split(&dataset, 0.8, 1)?;
    println!("split sizes: {} train, {} val", train.len(), val.len());

    let twin = generate_synthetic(&SyntheticSpec {
        twin_channel: true,
        num_samples: 4,
        signal_len: 64,
        region_size: 8,
        ..spec
    })?;
    let left = twin.channel(Channel::Left)?;
    println!("twin signals of length {} -> left channel length {}", twin.signal_len, left.signal_len);
    Ok(())
}
