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

mod common;

use hqcg::data::{
    generate_synthetic, load_dataset, parse_csv, save_dataset, save_manifest, split, Manifest, SyntheticSpec,
};
use hqcg::encoding::{amplitude_decode, amplitude_encode, required_qubits, signal_norm};
use proptest::prelude::*;
use std::path::Path;

fn signal() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 1..300).prop_filter("non-degenerate", |v| v.iter().any(|x| x.abs() > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn encoding_is_scale_invariant(v in signal(), c in 1e-3f64..1e3) {
        let n = required_qubits(v.len()).unwrap();
        let a = amplitude_encode(&v, n).unwrap();
        let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
        let b = amplitude_encode(&scaled, n).unwrap();
        prop_assert!(common::max_abs_diff(a.amplitudes(), b.amplitudes()) <= 1e-12);
    }

    #[test]
    fn encoding_preserves_order(v in signal()) {
        let n = required_qubits(v.len()).unwrap();
        let amps = amplitude_encode(&v, n).unwrap();
        let a = amps.amplitudes();
        for i in 0..v.len() {
            prop_assert_eq!(a[i].im, 0.0);
            for j in 0..v.len() {
                if v[i] > v[j] {
                    prop_assert!(a[i].re > a[j].re, "v[{}]={} > v[{}]={}", i, v[i], j, v[j]);
                }
            }
        }
        prop_assert!(a[v.len()..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn encoding_round_trips(v in signal()) {
        let n = required_qubits(v.len()).unwrap();
        let state = amplitude_encode(&v, n).unwrap();
        let back = amplitude_decode(&state, signal_norm(&v).unwrap(), v.len());
        for (x, y) in v.iter().zip(&back) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn qubit_count_is_minimal(len in 1usize..100_000) {
        let n = required_qubits(len).unwrap();
        prop_assert!(1usize << n >= len);
        prop_assert!(n == 1 || 1usize << (n - 1) < len);
    }

    #[test]
    fn generated_samples_have_labels(seed in any::<u64>(), density in 0.1f64..3.0) {
        let spec = SyntheticSpec { num_classes: 3, signal_len: 48, region_size: 16, num_samples: 40, label_density: density, seed, ..SyntheticSpec::default() };
        let data = generate_synthetic(&spec).unwrap();
        prop_assert_eq!(data.len(), 40);
        prop_assert!(data.samples.iter().all(|s| s.labels.iter().any(|&y| y)));
        prop_assert!(data.samples.iter().all(|s| s.signal.len() == 48));
    }

    #[test]
    fn csv_round_trip_is_exact(seed in any::<u64>()) {
        let spec = SyntheticSpec { num_classes: 2, signal_len: 16, region_size: 8, num_samples: 12, seed, ..SyntheticSpec::default() };
        let data = generate_synthetic(&spec).unwrap();
        let back = parse_csv(&hqcg::data::to_csv(&data), Path::new("mem.csv"), Some(2)).unwrap();
        prop_assert_eq!(back, data);
    }

    #[test]
    fn split_is_a_partition(seed in any::<u64>(), n in 2usize..60, f in 0.05f64..0.95) {
        let spec = SyntheticSpec { num_classes: 2, signal_len: 16, region_size: 8, num_samples: n, ..SyntheticSpec::default() };
        let data = generate_synthetic(&spec).unwrap();
        if let Ok((a, b)) = split(&data, f, seed) {
            let mut ids: Vec<String> = a.samples.iter().chain(&b.samples).map(|s| s.id.clone()).collect();
            ids.sort();
            let mut all: Vec<String> = data.samples.iter().map(|s| s.id.clone()).collect();
            all.sort();
            prop_assert_eq!(ids, all);
            prop_assert_eq!(a.len(), (n as f64 * f).round() as usize);
        }
    }
}

#[test]
fn energy_grows_with_active_classes() {
    // Noiseless: the signal is a sum of templates over disjoint blocks.
    let spec = SyntheticSpec { noise_sigma: 0.0, label_density: 2.0, num_samples: 300, ..SyntheticSpec::default() };
    let data = generate_synthetic(&spec).unwrap();
    let block = spec.region_size;
    for s in &data.samples {
        let total: f64 = s.signal.iter().map(|v| v * v).sum();
        let mut partial = 0.0;
        for c in s.active_classes() {
            let before = partial;
            partial += s.signal[c * block..(c + 1) * block].iter().map(|v| v * v).sum::<f64>();
            assert!(partial >= before);
        }
        assert!((partial - total).abs() <= 1e-9 * total.max(1.0));
        for c in (0..spec.num_classes).filter(|&c| !s.labels[c]) {
            assert!(s.signal[c * block..(c + 1) * block].iter().all(|&v| v == 0.0));
        }
    }
}

#[test]
fn linear_probe_confirms_learnability() {
    let data = generate_synthetic(&SyntheticSpec::default()).unwrap();
    let (train, val) = split(&data, 0.8, 7).unwrap();
    let aucs = common::linear_probe_aucs(&train, &val);
    assert!(aucs.iter().all(|&a| a >= 0.95), "{aucs:?}");
}

#[test]
fn dataset_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec { num_samples: 20, signal_len: 32, region_size: 8, ..SyntheticSpec::default() };
    let data = generate_synthetic(&spec).unwrap();
    let csv = dir.path().join("dataset.csv");
    save_dataset(&data, &csv).unwrap();
    let manifest =
        Manifest { num_classes: 4, signal_len: 32, num_samples: 20, seed: Some(spec.seed), spec: Some(spec) };
    save_manifest(&manifest, &dir.path().join("manifest.json")).unwrap();
    assert_eq!(load_dataset(&csv).unwrap(), data);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let short = lines[3].rsplit_once(',').unwrap().0.to_string();
    lines[3] = &short;
    std::fs::write(&csv, lines.join("\n")).unwrap();
    match load_dataset(&csv) {
        Err(hqcg::Error::Schema { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
    std::fs::write(&csv, "").unwrap();
    assert!(matches!(load_dataset(&csv), Err(hqcg::Error::EmptyDataset)));
}
