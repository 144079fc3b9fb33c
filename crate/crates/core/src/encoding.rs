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

//! Amplitude encoding of real 1-D signals.
//!
//! Value `v_i` becomes amplitude `i` after division by `‖v‖₂`; indices at or
//! beyond the signal length are zero. Signs are kept as-is.

use num_complex::Complex64;

use crate::qstate::{check_capacity, Statevector};
use crate::{Error, Result};

/// Number of qubits needed to hold `len` amplitudes, at least one.
pub fn required_qubits(len: usize) -> Result<usize> {
    if len == 0 {
        return Err(Error::EmptySignal);
    }
    Ok((len.next_power_of_two().trailing_zeros() as usize).max(1))
}

/// Checks length, finiteness and non-zero norm, returning `‖v‖₂`.
pub fn signal_norm(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySignal);
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("signal value {i} is not finite")));
    }
    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateSignal);
    }
    Ok(norm)
}

/// Writes the encoded amplitudes of `values` into a `2^n` buffer.
pub(crate) fn encode_into(values: &[f64], num_qubits: usize) -> Result<Vec<Complex64>> {
    check_capacity(num_qubits)?;
    let dim = 1usize << num_qubits;
    if values.len() > dim {
        return Err(Error::Capacity(format!(
            "signal of length {} does not fit in {num_qubits} qubits ({dim} amplitudes)",
            values.len()
        )));
    }
    let norm = signal_norm(values)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (a, v) in amps.iter_mut().zip(values) {
        a.re = v / norm;
    }
    Ok(amps)
}

pub fn amplitude_encode(values: &[f64], num_qubits: usize) -> Result<Statevector> {
    encode_into(values, num_qubits).map(Statevector::from_amplitudes_unchecked)
}

/// Inverse of [`amplitude_encode`] given the original norm and length.
pub fn amplitude_decode(state: &Statevector, norm: f64, len: usize) -> Vec<f64> {
    state.amplitudes().iter().take(len).map(|a| a.re * norm).collect()
}
