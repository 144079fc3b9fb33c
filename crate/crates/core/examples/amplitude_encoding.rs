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

//! Amplitude encoding: qubit budget, scale invariance and decoding.

use hqcg::encoding::{amplitude_decode, amplitude_encode, required_qubits, signal_norm};

fn main() -> hqcg::Result<()> {
    for len in [1, 2, 3, 256, 30_000] {
        println!("{len:>6} values -> {} qubits", required_qubits(len)?);
    }

    let signal = [3.0, -1.0, 0.5, 2.0, -2.5];
    let n = required_qubits(signal.len())?;
    let state = amplitude_encode(&signal, n)?;
    println!("encoded {} values into {n} qubits ({} amplitudes, tail zero-padded)", signal.len(), state.dim());
    for (i, a) in state.amplitudes().iter().enumerate() {
        println!("  amp[{i}] = {:+.6}", a.re);
    }

    let scaled: Vec<f64> = signal.iter().map(|v| v * 40.0).collect();
    let same = amplitude_encode(&scaled, n)?;
    let gap = state.amplitudes().iter().zip(same.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("max |amp(x) - amp(40x)| = {gap:.2e}");

    let decoded = amplitude_decode(&state, signal_norm(&signal)?, signal.len());
    println!("decoded: {decoded:?}");

    println!("all-zero signal: {}", amplitude_encode(&[0.0; 4], 2).unwrap_err());
    println!("too long: {}", amplitude_encode(&[1.0; 5], 2).unwrap_err());
    Ok(())
}
