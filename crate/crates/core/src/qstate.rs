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

//! Dense statevector engine.
//!
//! Basis index bit `q` holds qubit `q`, so `|q1 q0⟩ = |10⟩` is index 2 and a
//! gate on qubit `t` mixes amplitude pairs `(i, i | 1 << t)`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest register the engine will allocate (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Per-gate unitarity tolerance on `U†U = I`.
pub const UNITARY_TOL: f64 = 1e-12;

/// Tolerance on the unit-norm invariant of a [`Statevector`].
pub const NORM_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const PAULI_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    pub const PAULI_Y: Mat2 = Mat2([[ZERO, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), ZERO]]);
    pub const PAULI_Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Mat2([[h, h], [h, -h]])
    }

    pub fn rx(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let c = Complex64::new(c, 0.0);
        let ms = Complex64::new(0.0, -s);
        Mat2([[c, ms], [ms, c]])
    }

    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2([[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]])
    }

    pub fn rz(theta: f64) -> Self {
        let half = theta / 2.0;
        Mat2([[Complex64::from_polar(1.0, -half), ZERO], [ZERO, Complex64::from_polar(1.0, half)]])
    }

    /// General single-qubit rotation `Rz(c)·Ry(b)·Rz(a)`.
    pub fn euler(a: f64, b: f64, c: f64) -> Self {
        Mat2::rz(c) * Mat2::ry(b) * Mat2::rz(a)
    }

    /// Partial derivatives of [`Mat2::euler`] with respect to `(a, b, c)`.
    pub fn euler_derivatives(a: f64, b: f64, c: f64) -> [Mat2; 3] {
        let mi_half = Complex64::new(0.0, -0.5);
        let (rz_a, ry_b, rz_c) = (Mat2::rz(a), Mat2::ry(b), Mat2::rz(c));
        // d/dt Rz(t) = -i/2 Z Rz(t), d/dt Ry(t) = -i/2 Y Ry(t)
        let d_a = rz_c * ry_b * (Mat2::PAULI_Z * rz_a).scale(mi_half);
        let d_b = rz_c * (Mat2::PAULI_Y * ry_b).scale(mi_half) * rz_a;
        let d_c = (Mat2::PAULI_Z * rz_c).scale(mi_half) * ry_b * rz_a;
        [d_a, d_b, d_c]
    }

    pub fn scale(self, k: Complex64) -> Self {
        let m = self.0;
        Mat2([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    /// Conjugate transpose.
    pub fn dagger(self) -> Self {
        let m = self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Largest elementwise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.dagger() * *self;
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((p.0[r][c] - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() <= UNITARY_TOL
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

/// A gate acting on a register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GateOp {
    Single { target: usize, matrix: Mat2 },
    Controlled { control: usize, target: usize, matrix: Mat2 },
    Swap { a: usize, b: usize },
    ControlledSwap { control: usize, a: usize, b: usize },
}

impl GateOp {
    pub fn hadamard(target: usize) -> Self {
        GateOp::Single { target, matrix: Mat2::hadamard() }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Controlled { control, target, matrix: Mat2::PAULI_X }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::Single { target, .. } => vec![target],
            GateOp::Controlled { control, target, .. } => vec![control, target],
            GateOp::Swap { a, b } => vec![a, b],
            GateOp::ControlledSwap { control, a, b } => vec![control, a, b],
        }
    }

    /// Checks index bounds, index distinctness and unitarity.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q >= num_qubits {
                return Err(Error::Bounds { index: q, num_qubits });
            }
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[i + 1..].contains(q) {
                return Err(Error::Gate(format!("qubit {q} used twice in {self}")));
            }
        }
        if let GateOp::Single { matrix, .. } | GateOp::Controlled { matrix, .. } = self {
            let err = matrix.unitarity_error();
            if err > UNITARY_TOL {
                return Err(Error::Gate(format!("matrix is not unitary (|U†U - I| = {err:e})")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Single { target, .. } => write!(f, "U(q{target})"),
            GateOp::Controlled { control, target, .. } => write!(f, "CU(q{control}->q{target})"),
            GateOp::Swap { a, b } => write!(f, "SWAP(q{a},q{b})"),
            GateOp::ControlledSwap { control, a, b } => write!(f, "CSWAP(q{control}:q{a},q{b})"),
        }
    }
}

/// Computational-basis projector `|bit⟩⟨bit|` on one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisProjector {
    qubit: usize,
    bit: u8,
}

impl BasisProjector {
    pub fn new(qubit: usize, bit: u8) -> Result<Self> {
        if bit > 1 {
            return Err(Error::Config(format!("projector bit must be 0 or 1, got {bit}")));
        }
        Ok(BasisProjector { qubit, bit })
    }

    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn bit(&self) -> u8 {
        self.bit
    }
}

/// A unit-norm pure state of `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

pub(crate) fn check_capacity(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Capacity(format!("{n} qubits requested, supported range is 1..={MAX_QUBITS}")));
    }
    Ok(())
}

impl Statevector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_capacity(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::Shape(format!("basis index {index} outside dimension {dim}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Statevector { num_qubits: n, amps })
    }

    /// Wraps an amplitude vector, checking length `2^n` and unit norm.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Shape(format!("amplitude count {len} is not 2^n with n >= 1")));
        }
        let n = len.trailing_zeros() as usize;
        check_capacity(n)?;
        let norm_sqr = norm_sqr(&amps);
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::Numeric(format!("state norm² {norm_sqr} is not 1")));
        }
        Ok(Statevector { num_qubits: n, amps })
    }

    /// Skips the norm check; callers guarantee the invariant.
    pub(crate) fn from_amplitudes_unchecked(amps: Vec<Complex64>) -> Self {
        debug_assert!(amps.len().is_power_of_two());
        let num_qubits = amps.len().trailing_zeros() as usize;
        Statevector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    /// Applies `gate` in place after validating it.
    pub fn apply_in_place(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        kernels::apply(&mut self.amps, gate);
        Ok(())
    }

    /// Value-in, value-out gate application.
    pub fn apply(mut self, gate: &GateOp) -> Result<Self> {
        self.apply_in_place(gate)?;
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Shape(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(kernels::inner(&self.amps, &other.amps))
    }

    pub fn probability(&self, proj: BasisProjector) -> Result<f64> {
        if proj.qubit >= self.num_qubits {
            return Err(Error::Bounds { index: proj.qubit, num_qubits: self.num_qubits });
        }
        let mask = 1usize << proj.qubit;
        let want = if proj.bit == 1 { mask } else { 0 };
        let p: f64 = self.amps.iter().enumerate().filter(|(i, _)| i & mask == want).map(|(_, a)| a.norm_sqr()).sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Product state with `self` on the low qubits and `high` above it.
    pub fn tensor(&self, high: &Statevector) -> Result<Statevector> {
        let n = self.num_qubits + high.num_qubits;
        check_capacity(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for h in &high.amps {
            amps.extend(self.amps.iter().map(|l| l * h));
        }
        Ok(Statevector { num_qubits: n, amps })
    }
}

pub(crate) fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// `|0…0⟩` on `n` qubits; errors outside `1..=MAX_QUBITS`.
pub fn zero_state(n: usize) -> Result<Statevector> {
    Statevector::zero(n)
}

pub fn apply_gate(state: Statevector, gate: &GateOp) -> Result<Statevector> {
    state.apply(gate)
}

pub fn inner_product(a: &Statevector, b: &Statevector) -> Result<Complex64> {
    a.inner(b)
}

pub fn projector_probability(state: &Statevector, proj: BasisProjector) -> Result<f64> {
    state.probability(proj)
}

/// Unchecked in-place kernels over raw amplitude slices.
///
/// These do not validate indices or unitarity and work on unnormalized
/// vectors, which the adjoint gradient pass relies on.
pub mod kernels {
    use num_complex::Complex64;
    use rayon::prelude::*;

    use super::{GateOp, Mat2};

    /// Registers at least this long are updated in parallel.
    pub const PAR_MIN_LEN: usize = 1 << 14;

    pub fn apply(amps: &mut [Complex64], gate: &GateOp) {
        match *gate {
            GateOp::Single { target, ref matrix } => apply_single(amps, target, matrix),
            GateOp::Controlled { control, target, ref matrix } => apply_controlled(amps, control, target, matrix),
            GateOp::Swap { a, b } => swap(amps, 0, a, b),
            GateOp::ControlledSwap { control, a, b } => swap(amps, 1 << control, a, b),
        }
    }

    pub fn apply_single(amps: &mut [Complex64], target: usize, m: &Mat2) {
        apply_masked(amps, 0, target, m);
    }

    pub fn apply_controlled(amps: &mut [Complex64], control: usize, target: usize, m: &Mat2) {
        apply_masked(amps, 1 << control, target, m);
    }

    /// Applies `m` to `target` on basis states whose bits in `control_mask`
    /// are all set.
    pub fn apply_masked(amps: &mut [Complex64], control_mask: usize, target: usize, m: &Mat2) {
        let stride = 1usize << target;
        let [[m00, m01], [m10, m11]] = m.0;
        let update = move |idx: usize, lo: &mut Complex64, hi: &mut Complex64| {
            if idx & control_mask == control_mask {
                let (a, b) = (*lo, *hi);
                *lo = m00 * a + m01 * b;
                *hi = m10 * a + m11 * b;
            }
        };
        let block = |(k, chunk): (usize, &mut [Complex64])| {
            let base = k * 2 * stride;
            let (lo, hi) = chunk.split_at_mut(stride);
            for (j, (l, h)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                update(base + j, l, h);
            }
        };

        let blocks = amps.len() / (2 * stride);
        if amps.len() < PAR_MIN_LEN {
            amps.chunks_mut(2 * stride).enumerate().for_each(block);
        } else if blocks >= 64 {
            amps.par_chunks_mut(2 * stride).enumerate().for_each(block);
        } else {
            for (k, chunk) in amps.chunks_mut(2 * stride).enumerate() {
                let base = k * 2 * stride;
                let (lo, hi) = chunk.split_at_mut(stride);
                lo.par_iter_mut().zip(hi.par_iter_mut()).enumerate().for_each(|(j, (l, h))| update(base + j, l, h));
            }
        }
    }

    /// Exchanges qubits `a` and `b` on basis states whose bits in
    /// `control_mask` are all set.
    pub fn swap(amps: &mut [Complex64], control_mask: usize, a: usize, b: usize) {
        let (ma, mb) = (1usize << a, 1usize << b);
        for i in 0..amps.len() {
            if i & ma != 0 && i & mb == 0 && i & control_mask == control_mask {
                amps.swap(i, i ^ ma ^ mb);
            }
        }
    }

    /// `Σ conj(a_i)·b_i`, summed in index order.
    pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn zero_state_shapes() {
        assert_eq!(zero_state(1).unwrap().amplitudes(), &[ONE, ZERO]);
        assert_eq!(zero_state(2).unwrap().amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
        assert!(matches!(zero_state(27), Err(Error::Capacity(_))));
        assert!(matches!(zero_state(0), Err(Error::Capacity(_))));
    }

    #[test]
    fn hadamard_on_zero() {
        let s = apply_gate(zero_state(1).unwrap(), &GateOp::hadamard(0)).unwrap();
        for a in s.amplitudes() {
            assert!(close(*a, Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        }
    }

    #[test]
    fn controlled_ry_respects_control() {
        let g = GateOp::Controlled { control: 0, target: 1, matrix: Mat2::ry(PI) };
        // |10⟩ in q1q0 notation with q0 = 1 is index 1
        let s = apply_gate(Statevector::basis(2, 0b01).unwrap(), &g).unwrap();
        assert!(close(s.amplitudes()[0b11], ONE, 1e-15));
        let s = apply_gate(zero_state(2).unwrap(), &g).unwrap();
        assert_eq!(s.amplitudes()[0], ONE);
    }

    #[test]
    fn gate_errors() {
        let s = zero_state(2).unwrap();
        assert!(matches!(s.clone().apply(&GateOp::hadamard(2)), Err(Error::Bounds { .. })));
        assert!(matches!(s.clone().apply(&GateOp::cnot(1, 1)), Err(Error::Gate(_))));
        let bad = Mat2([[ONE, ONE], [ZERO, ONE]]);
        assert!(matches!(s.apply(&GateOp::Single { target: 0, matrix: bad }), Err(Error::Gate(_))));
    }

    #[test]
    fn inner_products() {
        let zero = zero_state(1).unwrap();
        let one = Statevector::basis(1, 1).unwrap();
        let plus = zero.clone().apply(&GateOp::hadamard(0)).unwrap();
        assert!(close(inner_product(&zero, &one).unwrap(), ZERO, 0.0));
        assert!(close(inner_product(&plus, &zero).unwrap(), Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(inner_product(&plus, &plus).unwrap(), ONE, 1e-15));
        assert!(matches!(inner_product(&zero, &zero_state(2).unwrap()), Err(Error::Shape(_))));
    }

    #[test]
    fn projector_probabilities() {
        let zero = zero_state(1).unwrap();
        let plus = zero.clone().apply(&GateOp::hadamard(0)).unwrap();
        let p0 = BasisProjector::new(0, 0).unwrap();
        let p1 = BasisProjector::new(0, 1).unwrap();
        assert_eq!(projector_probability(&zero, p0).unwrap(), 1.0);
        assert!((projector_probability(&plus, p1).unwrap() - 0.5).abs() < 1e-15);
        assert!(BasisProjector::new(0, 2).is_err());
        assert!(matches!(zero.probability(BasisProjector::new(1, 0).unwrap()), Err(Error::Bounds { .. })));
    }

    #[test]
    fn from_amplitudes_checks() {
        assert!(Statevector::from_amplitudes(vec![ONE, ZERO, ZERO]).is_err());
        assert!(Statevector::from_amplitudes(vec![ONE, ONE]).is_err());
        assert!(Statevector::from_amplitudes(vec![ZERO, ONE]).is_ok());
    }

    #[test]
    fn euler_derivatives_match_differences() {
        let (a, b, c) = (0.3, -1.1, 2.0);
        let d = Mat2::euler_derivatives(a, b, c);
        let h = 1e-6;
        let fd = [
            (Mat2::euler(a + h, b, c), Mat2::euler(a - h, b, c)),
            (Mat2::euler(a, b + h, c), Mat2::euler(a, b - h, c)),
            (Mat2::euler(a, b, c + h), Mat2::euler(a, b, c - h)),
        ];
        for (k, (p, m)) in fd.iter().enumerate() {
            for r in 0..2 {
                for col in 0..2 {
                    let num = (p.0[r][col] - m.0[r][col]) / (2.0 * h);
                    assert!(close(num, d[k].0[r][col], 1e-8), "param {k}");
                }
            }
        }
        assert!(Mat2::euler(a, b, c).is_unitary());
        assert_eq!(Mat2::euler(0.0, 0.0, 0.0), Mat2::IDENTITY);
    }

    #[test]
    fn parallel_kernel_matches_serial() {
        let n = 15;
        let dim = 1usize << n;
        let amps: Vec<Complex64> = (0..dim).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.7).cos())).collect();
        let m = Mat2::euler(0.4, 1.3, -0.2);
        for target in [0, 7, 14] {
            let mut par = amps.clone();
            kernels::apply_controlled(&mut par, (target + 3) % n, target, &m);
            let mut ser = amps.clone();
            let (cm, st) = (1usize << ((target + 3) % n), 1usize << target);
            for i in 0..dim {
                if i & st == 0 && i & cm != 0 {
                    let (a, b) = (ser[i], ser[i | st]);
                    ser[i] = m.0[0][0] * a + m.0[0][1] * b;
                    ser[i | st] = m.0[1][0] * a + m.0[1][1] * b;
                }
            }
            assert_eq!(par, ser);
        }
    }
}
