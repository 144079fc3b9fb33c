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

//! Builds a three-qubit GHZ state gate by gate and reads out basis and
//! single-qubit probabilities.
//!
//! Run with `cargo run --example simulate_gates`.

use hqcg::qstate::{BasisProjector, GateOp, Mat2, Statevector};

fn main() -> hqcg::Result<()> {
    let mut state = Statevector::zero(3)?;
    for gate in [GateOp::hadamard(0), GateOp::cnot(0, 1), GateOp::cnot(1, 2)] {
        state.apply_in_place(&gate)?;
        println!("after {gate}: norm {:.15}", state.norm());
    }
    for (index, amp) in state.amplitudes().iter().enumerate() {
        if amp.norm_sqr() > 0.0 {
            // qubit q is bit q of the index
            println!("|{index:03b}>  amplitude {:+.6}{:+.6}i", amp.re, amp.im);
        }
    }
    for q in 0..3 {
        let p1 = state.probability(BasisProjector::new(q, 1)?)?;
        println!("P(q{q} = 1) = {p1:.6}");
    }

    // A controlled rotation only acts where its control is set.
    let rotated = Statevector::basis(2, 0b01)?.apply(&GateOp::Controlled {
        control: 0,
        target: 1,
        matrix: Mat2::ry(std::f64::consts::FRAC_PI_2),
    })?;
    println!("CRY(pi/2)|q0=1> amplitudes: {:?}", rotated.amplitudes());

    // Out-of-range and non-unitary gates are rejected.
    let err = Statevector::zero(2)?.apply(&GateOp::hadamard(5)).unwrap_err();
    println!("rejected: {err}");
    Ok(())
}
