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

//! Independent reference implementations shared by the integration tests:
//! dense Kronecker-product gate matrices, random states and random gates.

#![allow(dead_code, clippy::needless_range_loop)]

use hqcg::{GateOp, Mat2, Statevector};
use num_complex::Complex64;
use rand::Rng;

pub type Dense = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(dim: usize) -> Dense {
    (0..dim).map(|i| (0..dim).map(|j| if i == j { ONE } else { ZERO }).collect()).collect()
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![ZERO; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn matvec(m: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn small(m: &Mat2) -> Dense {
    m.0.iter().map(|r| r.to_vec()).collect()
}

/// `⊗_{q = n-1 … 0} factor(q)`: qubit 0 is the least significant index bit,
/// so it is the rightmost Kronecker factor.
pub fn embed(n: usize, factor: impl Fn(usize) -> Dense) -> Dense {
    let mut out = vec![vec![ONE]];
    for q in (0..n).rev() {
        out = kron(&out, &factor(q));
    }
    out
}

fn projector(bit: usize) -> Dense {
    let mut p = vec![vec![ZERO; 2]; 2];
    p[bit][bit] = ONE;
    p
}

fn single(n: usize, target: usize, m: &Mat2) -> Dense {
    embed(n, |q| if q == target { small(m) } else { identity(2) })
}

fn controlled(n: usize, control: usize, target: usize, m: &Mat2) -> Dense {
    let off = embed(n, |q| if q == control { projector(0) } else { identity(2) });
    let on = embed(n, |q| {
        if q == control {
            projector(1)
        } else if q == target {
            small(m)
        } else {
            identity(2)
        }
    });
    add(&off, &on)
}

/// Dense `2^n × 2^n` matrix of a gate.
pub fn dense_gate(n: usize, gate: &GateOp) -> Dense {
    match gate {
        GateOp::Single { target, matrix } => single(n, *target, matrix),
        GateOp::Controlled { control, target, matrix } => controlled(n, *control, *target, matrix),
        GateOp::Swap { a, b } => {
            let x = Mat2::PAULI_X;
            let ab = controlled(n, *a, *b, &x);
            let ba = controlled(n, *b, *a, &x);
            matmul(&ab, &matmul(&ba, &ab))
        }
        GateOp::ControlledSwap { control, a, b } => {
            let swap = dense_gate(n, &GateOp::Swap { a: *a, b: *b });
            let off = embed(n, |q| if q == *control { projector(0) } else { identity(2) });
            let on = embed(n, |q| if q == *control { projector(1) } else { identity(2) });
            add(&off, &matmul(&on, &swap))
        }
    }
}

pub fn random_amplitudes(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> Statevector {
    Statevector::from_amplitudes(random_amplitudes(1 << n, rng)).expect("unit norm")
}

pub fn random_unitary(rng: &mut impl Rng) -> Mat2 {
    let mut angle = || rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let (a, b, c, phase) = (angle(), angle(), angle(), angle());
    Mat2::euler(a, b, c).scale(Complex64::from_polar(1.0, phase))
}

fn distinct(n: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut picked = Vec::with_capacity(k);
    while picked.len() < k {
        let q = rng.random_range(0..n);
        if !picked.contains(&q) {
            picked.push(q);
        }
    }
    picked
}

/// Uniformly one of the four gate kinds, falling back to single-qubit gates
/// when the register is too small.
pub fn random_gate(n: usize, rng: &mut impl Rng) -> GateOp {
    let kind = rng.random_range(0..4).min(if n >= 3 {
        3
    } else if n == 2 {
        2
    } else {
        0
    });
    match kind {
        0 => GateOp::Single { target: rng.random_range(0..n), matrix: random_unitary(rng) },
        1 => {
            let q = distinct(n, 2, rng);
            GateOp::Controlled { control: q[0], target: q[1], matrix: random_unitary(rng) }
        }
        2 => {
            let q = distinct(n, 2, rng);
            GateOp::Swap { a: q[0], b: q[1] }
        }
        _ => {
            let q = distinct(n, 3, rng);
            GateOp::ControlledSwap { control: q[0], a: q[1], b: q[2] }
        }
    }
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Purity `tr(ρ_q²)` of the reduced state of qubit `q`.
pub fn single_qubit_purity(state: &Statevector, q: usize) -> f64 {
    let amps = state.amplitudes();
    let mut rho = [[ZERO; 2]; 2];
    let bit = 1usize << q;
    for i in 0..amps.len() {
        if i & bit != 0 {
            continue;
        }
        let pair = [amps[i], amps[i | bit]];
        for r in 0..2 {
            for c in 0..2 {
                rho[r][c] += pair[r] * pair[c].conj();
            }
        }
    }
    (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| (rho[r][c] * rho[c][r]).re).sum()
}

/// Per-class AUC by exhaustive pair counting (ties ½).
pub fn pairwise_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (s_pos, _) in scores.iter().zip(labels).filter(|(_, &y)| y) {
        for (s_neg, _) in scores.iter().zip(labels).filter(|(_, &y)| !y) {
            pairs += 1.0;
            if s_pos > s_neg {
                wins += 1.0;
            } else if s_pos == s_neg {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Ridge-regularized least squares `w = (XᵀX + λI)⁻¹ Xᵀy` by Cholesky.
pub fn least_squares(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Vec<f64> {
    let d = x[0].len();
    let mut a = vec![vec![0.0; d]; d];
    let mut b = vec![0.0; d];
    for (row, &t) in x.iter().zip(y) {
        for i in 0..d {
            b[i] += row[i] * t;
            for j in 0..=i {
                a[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..d {
        a[i][i] += lambda;
    }
    // lower-triangular factor in place
    for j in 0..d {
        let mut diag = a[j][j];
        for k in 0..j {
            diag -= a[j][k] * a[j][k];
        }
        let diag = diag.sqrt();
        a[j][j] = diag;
        for i in j + 1..d {
            let mut v = a[i][j];
            for k in 0..j {
                v -= a[i][k] * a[j][k];
            }
            a[i][j] = v / diag;
        }
    }
    let mut z = vec![0.0; d];
    for i in 0..d {
        z[i] = (b[i] - (0..i).map(|k| a[i][k] * z[k]).sum::<f64>()) / a[i][i];
    }
    let mut w = vec![0.0; d];
    for i in (0..d).rev() {
        w[i] = (z[i] - (i + 1..d).map(|k| a[k][i] * w[k]).sum::<f64>()) / a[i][i];
    }
    w
}

/// Linear-probe val AUC per class on `(train, val)` of a dataset.
pub fn linear_probe_aucs(train: &hqcg::Dataset, val: &hqcg::Dataset) -> Vec<f64> {
    let features = |d: &hqcg::Dataset| -> Vec<Vec<f64>> {
        d.samples.iter().map(|s| s.signal.iter().copied().chain(std::iter::once(1.0)).collect()).collect()
    };
    let (xt, xv) = (features(train), features(val));
    (0..train.num_classes)
        .map(|c| {
            let y: Vec<f64> = train.samples.iter().map(|s| if s.labels[c] { 1.0 } else { 0.0 }).collect();
            let w = least_squares(&xt, &y, 1e-6);
            let scores: Vec<f64> = xv.iter().map(|r| r.iter().zip(&w).map(|(a, b)| a * b).sum()).collect();
            let labels: Vec<bool> = val.samples.iter().map(|s| s.labels[c]).collect();
            pairwise_auc(&scores, &labels)
        })
        .collect()
}

/// Reference AdamW update written from the textbook formulas.
pub struct RefAdamW {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: i32,
}

impl RefAdamW {
    pub fn new(p: usize) -> Self {
        RefAdamW { m: vec![0.0; p], v: vec![0.0; p], t: 0 }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn step(&mut self, theta: &mut [f64], g: &[f64], lr: f64, b1: f64, b2: f64, eps: f64, wd: f64) {
        self.t += 1;
        for k in 0..theta.len() {
            self.m[k] = b1 * self.m[k] + (1.0 - b1) * g[k];
            self.v[k] = b2 * self.v[k] + (1.0 - b2) * g[k].powi(2);
            let m_hat = self.m[k] / (1.0 - b1.powi(self.t));
            let v_hat = self.v[k] / (1.0 - b2.powi(self.t));
            theta[k] = theta[k] * (1.0 - lr * wd) - lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
}
