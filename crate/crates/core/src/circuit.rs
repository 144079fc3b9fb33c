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

//! Parameterized circuits and the HQCG classifier.
//!
//! Every trainable gate is a controlled (or plain) general rotation
//! `U(a, b, c) = Rz(c)·Ry(b)·Rz(a)` whose three angles live at fixed slots of
//! one dense parameter vector shared by the whole model. The vector is laid
//! out as `[local_0, global_0, …, local_{d-1}, global_{d-1}, class_0, …]`.

use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::encode_into;
use crate::qstate::{check_capacity, kernels, BasisProjector, GateOp, Mat2, Statevector, MAX_QUBITS};
use crate::{Error, Result};

/// One trainable rotation, optionally controlled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamGate {
    pub control: Option<usize>,
    pub target: usize,
    /// Absolute indices of `(a, b, c)` in the model parameter vector.
    pub slots: [usize; 3],
}

impl ParamGate {
    fn matrix(&self, theta: &[f64]) -> Mat2 {
        let [a, b, c] = self.slots;
        Mat2::euler(theta[a], theta[b], theta[c])
    }

    fn control_mask(&self) -> usize {
        self.control.map_or(0, |c| 1 << c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CircuitOp {
    Param(ParamGate),
    Fixed(GateOp),
}

/// Ordered gate list over a register of `width` qubits owning the parameter
/// slots `offset .. offset + num_params`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamCircuit {
    width: usize,
    ops: Vec<CircuitOp>,
    offset: usize,
    num_params: usize,
}

impl ParamCircuit {
    pub fn new(width: usize, offset: usize, ops: Vec<CircuitOp>) -> Result<Self> {
        check_capacity(width)?;
        let mut slots = Vec::new();
        for op in &ops {
            match op {
                CircuitOp::Param(g) => {
                    let mut qubits = vec![g.target];
                    qubits.extend(g.control);
                    if let Some(&q) = qubits.iter().find(|&&q| q >= width) {
                        return Err(Error::Bounds { index: q, num_qubits: width });
                    }
                    if g.control == Some(g.target) {
                        return Err(Error::Gate(format!("control equals target q{}", g.target)));
                    }
                    slots.extend_from_slice(&g.slots);
                }
                CircuitOp::Fixed(gate) => gate.validate(width)?,
            }
        }
        slots.sort_unstable();
        let contiguous = slots.iter().enumerate().all(|(i, &s)| s == offset + i);
        if !contiguous {
            return Err(Error::Config(format!(
                "parameter slots must cover {offset}..{} exactly once",
                offset + slots.len()
            )));
        }
        Ok(ParamCircuit { width, ops, offset, num_params: slots.len() })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn param_gates(&self) -> impl Iterator<Item = &ParamGate> {
        self.ops.iter().filter_map(|op| match op {
            CircuitOp::Param(g) => Some(g),
            CircuitOp::Fixed(_) => None,
        })
    }

    pub fn num_gates(&self) -> usize {
        self.ops.len()
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn param_range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.num_params
    }

    /// Concrete gate sequence for the given parameter vector.
    pub fn bind(&self, theta: &[f64]) -> Vec<GateOp> {
        self.ops
            .iter()
            .map(|op| match op {
                CircuitOp::Param(g) => {
                    let matrix = g.matrix(theta);
                    match g.control {
                        Some(control) => GateOp::Controlled { control, target: g.target, matrix },
                        None => GateOp::Single { target: g.target, matrix },
                    }
                }
                CircuitOp::Fixed(gate) => gate.clone(),
            })
            .collect()
    }

    /// Applies the circuit in place. `theta` is the full model vector.
    pub fn apply(&self, theta: &[f64], amps: &mut [Complex64]) {
        for op in &self.ops {
            match op {
                CircuitOp::Param(g) => kernels::apply_masked(amps, g.control_mask(), g.target, &g.matrix(theta)),
                CircuitOp::Fixed(gate) => kernels::apply(amps, gate),
            }
        }
    }

    /// Reverse-mode pass for a real loss `L(ψ)` with `λ = ∂L/∂ψ*`.
    ///
    /// On entry `state` is the circuit output and `lambda` the adjoint at the
    /// output; on return both are pulled back to the circuit input.
    /// `grad[slot] += 2·Re⟨λ_k | ∂U_k ψ_{k-1}⟩` for every owned slot.
    pub fn backprop(&self, theta: &[f64], state: &mut [Complex64], lambda: &mut [Complex64], grad: &mut [f64]) {
        for op in self.ops.iter().rev() {
            match op {
                CircuitOp::Param(g) => {
                    let [a, b, c] = g.slots;
                    let inverse = g.matrix(theta).dagger();
                    let mask = g.control_mask();
                    kernels::apply_masked(state, mask, g.target, &inverse);
                    let derivs = Mat2::euler_derivatives(theta[a], theta[b], theta[c]);
                    let overlaps = derivative_overlaps(lambda, state, mask, g.target, &derivs);
                    for (slot, value) in g.slots.iter().zip(overlaps) {
                        grad[*slot] += 2.0 * value;
                    }
                    kernels::apply_masked(lambda, mask, g.target, &inverse);
                }
                CircuitOp::Fixed(gate) => {
                    let inverse = invert(gate);
                    kernels::apply(state, &inverse);
                    kernels::apply(lambda, &inverse);
                }
            }
        }
    }

    /// One line per gate: kind, control, target, parameter slots.
    pub fn listing(&self, label: &str) -> String {
        let mut out = String::new();
        for op in &self.ops {
            let _ = match op {
                CircuitOp::Param(g) => match g.control {
                    Some(c) => writeln!(out, "{label} CU control={c} target={} params={:?}", g.target, g.slots),
                    None => writeln!(out, "{label} U control=- target={} params={:?}", g.target, g.slots),
                },
                CircuitOp::Fixed(gate) => writeln!(out, "{label} fixed {gate}"),
            };
        }
        out
    }
}

fn invert(gate: &GateOp) -> GateOp {
    match gate {
        GateOp::Single { target, matrix } => GateOp::Single { target: *target, matrix: matrix.dagger() },
        GateOp::Controlled { control, target, matrix } => {
            GateOp::Controlled { control: *control, target: *target, matrix: matrix.dagger() }
        }
        swap => swap.clone(),
    }
}

/// `Re⟨λ|(P_ctrl ⊗ D_j)|ψ⟩` for each of three target matrices `D_j`,
/// accumulated in index order.
fn derivative_overlaps(
    lambda: &[Complex64],
    state: &[Complex64],
    control_mask: usize,
    target: usize,
    derivs: &[Mat2; 3],
) -> [f64; 3] {
    let stride = 1usize << target;
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for i in 0..state.len() {
        if i & stride != 0 || i & control_mask != control_mask {
            continue;
        }
        let j = i | stride;
        let (s0, s1) = (state[i], state[j]);
        let (l0, l1) = (lambda[i].conj(), lambda[j].conj());
        for (a, d) in acc.iter_mut().zip(derivs) {
            let [[d00, d01], [d10, d11]] = d.0;
            *a += l0 * (d00 * s0 + d01 * s1) + l1 * (d10 * s0 + d11 * s1);
        }
    }
    [acc[0].re, acc[1].re, acc[2].re]
}

/// Local layer: per contiguous group of `g` qubits, a chain of controlled
/// rotations `q→q+1 … q+g-2→q+g-1` closed by a skip gate `q+g-1→q`.
pub fn build_lqcg(n: usize, g: usize, param_offset: usize) -> Result<ParamCircuit> {
    if g < 2 || !n.is_multiple_of(g) {
        return Err(Error::Config(format!("group size {g} must be at least 2 and divide the qubit count {n}")));
    }
    let mut ops = Vec::with_capacity(n);
    let mut slot = param_offset;
    let mut push = |control: usize, target: usize| {
        ops.push(CircuitOp::Param(ParamGate { control: Some(control), target, slots: [slot, slot + 1, slot + 2] }));
        slot += 3;
    };
    for start in (0..n).step_by(g) {
        for q in start..start + g - 1 {
            push(q, q + 1);
        }
        push(start + g - 1, start);
    }
    ParamCircuit::new(n, param_offset, ops)
}

/// Global layer: the chain-plus-skip pattern over the last qubit of every
/// group, `r_k = (k+1)·g - 1`.
pub fn build_gqcg(n: usize, g: usize, param_offset: usize) -> Result<ParamCircuit> {
    if g < 2 || !n.is_multiple_of(g) {
        return Err(Error::Config(format!("group size {g} must be at least 2 and divide the qubit count {n}")));
    }
    let groups = n / g;
    if groups < 2 {
        return Err(Error::Config(format!("global layer needs at least two groups, got {groups} (n={n}, g={g})")));
    }
    let reps: Vec<usize> = (0..groups).map(|k| (k + 1) * g - 1).collect();
    let pairs = reps.windows(2).map(|w| (w[0], w[1])).chain([(reps[groups - 1], reps[0])]);
    let ops = pairs
        .enumerate()
        .map(|(i, (control, target))| {
            let s = param_offset + 3 * i;
            CircuitOp::Param(ParamGate { control: Some(control), target, slots: [s, s + 1, s + 2] })
        })
        .collect();
    ParamCircuit::new(n, param_offset, ops)
}

/// Class-state preparation: a rotation on every qubit, then a ring of
/// CNOTs `q→(q+1) mod n`.
pub fn build_class_circuit(n: usize, param_offset: usize) -> Result<ParamCircuit> {
    let mut ops: Vec<CircuitOp> = (0..n)
        .map(|q| {
            let s = param_offset + 3 * q;
            CircuitOp::Param(ParamGate { control: None, target: q, slots: [s, s + 1, s + 2] })
        })
        .collect();
    if n >= 2 {
        ops.extend((0..n).map(|q| CircuitOp::Fixed(GateOp::cnot(q, (q + 1) % n))));
    }
    ParamCircuit::new(n, param_offset, ops)
}

/// Prepares `|φ⟩` from `3n` angles.
pub fn build_class_state(n: usize, class_params: &[f64]) -> Result<Statevector> {
    if class_params.len() != 3 * n {
        return Err(Error::Shape(format!(
            "class state on {n} qubits needs {} angles, got {}",
            3 * n,
            class_params.len()
        )));
    }
    let circuit = build_class_circuit(n, 0)?;
    let mut amps = Statevector::zero(n)?.into_amplitudes();
    circuit.apply(class_params, &mut amps);
    Ok(Statevector::from_amplitudes_unchecked(amps))
}

/// `|⟨ψ|φ⟩|²` through the inner product.
pub fn direct_fidelity(psi: &Statevector, phi: &Statevector) -> Result<f64> {
    Ok(psi.inner(phi)?.norm_sqr().min(1.0))
}

/// `|⟨ψ|φ⟩|²` through a simulated swap test on `2n + 1` qubits: ψ on qubits
/// `0..n`, φ on `n..2n`, ancilla on `2n`. Returns `2·P(ancilla = 0) − 1`.
pub fn swap_test_fidelity(psi: &Statevector, phi: &Statevector) -> Result<f64> {
    let n = psi.num_qubits();
    if phi.num_qubits() != n {
        return Err(Error::Shape(format!("swap test between {n}-qubit and {}-qubit states", phi.num_qubits())));
    }
    let total = 2 * n + 1;
    if total > MAX_QUBITS {
        return Err(Error::Capacity(format!("swap test needs {total} qubits, limit is {MAX_QUBITS}")));
    }
    let ancilla = 2 * n;
    let mut state = psi.tensor(phi)?.tensor(&Statevector::zero(1)?)?;
    state.apply_in_place(&GateOp::hadamard(ancilla))?;
    for k in 0..n {
        state.apply_in_place(&GateOp::ControlledSwap { control: ancilla, a: k, b: n + k })?;
    }
    state.apply_in_place(&GateOp::hadamard(ancilla))?;
    let p0 = state.probability(BasisProjector::new(ancilla, 0)?)?;
    Ok((2.0 * p0 - 1.0).clamp(0.0, 1.0))
}

/// Shape of an HQCG classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HqcgConfig {
    pub num_qubits: usize,
    pub group_size: usize,
    pub num_classes: usize,
    /// Number of stacked local+global layer pairs.
    #[serde(default = "default_depth")]
    pub depth: usize,
}

fn default_depth() -> usize {
    1
}

impl HqcgConfig {
    pub fn new(num_qubits: usize, group_size: usize, num_classes: usize) -> Self {
        HqcgConfig { num_qubits, group_size, num_classes, depth: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        check_capacity(self.num_qubits)?;
        if self.num_classes == 0 {
            return Err(Error::Config("number of classes must be positive".into()));
        }
        if self.depth == 0 {
            return Err(Error::Config("depth must be positive".into()));
        }
        // Builders report group-size problems.
        build_lqcg(self.num_qubits, self.group_size, 0)?;
        build_gqcg(self.num_qubits, self.group_size, 0)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamCounts {
    pub lqcg: usize,
    pub gqcg: usize,
    pub class_states: usize,
    pub total: usize,
}

impl fmt::Display for ParamCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lqcg={} gqcg={} class_states={} total={}", self.lqcg, self.gqcg, self.class_states, self.total)
    }
}

/// Encoder, stacked local/global layers and per-class learnable states.
#[derive(Clone, Debug, PartialEq)]
pub struct HqcgModel {
    config: HqcgConfig,
    width: usize,
    lqcg: Vec<ParamCircuit>,
    gqcg: Vec<ParamCircuit>,
    classes: Vec<ParamCircuit>,
    theta: Vec<f64>,
}

impl HqcgModel {
    /// All parameters zero: identity layers and `|φ_i⟩ = |0…0⟩`.
    pub fn new(config: HqcgConfig) -> Result<Self> {
        config.validate()?;
        let (n, g) = (config.num_qubits, config.group_size);
        let mut offset = 0;
        let mut lqcg = Vec::with_capacity(config.depth);
        let mut gqcg = Vec::with_capacity(config.depth);
        for _ in 0..config.depth {
            let local = build_lqcg(n, g, offset)?;
            offset += local.num_params();
            let global = build_gqcg(n, g, offset)?;
            offset += global.num_params();
            lqcg.push(local);
            gqcg.push(global);
        }
        let mut classes = Vec::with_capacity(config.num_classes);
        for _ in 0..config.num_classes {
            let c = build_class_circuit(n, offset)?;
            offset += c.num_params();
            classes.push(c);
        }
        Ok(HqcgModel { config, width: n, lqcg, gqcg, classes, theta: vec![0.0; offset] })
    }

    /// Parameters drawn from `Uniform(-π, π)`.
    pub fn random<R: Rng + ?Sized>(config: HqcgConfig, rng: &mut R) -> Result<Self> {
        let mut model = Self::new(config)?;
        for t in &mut model.theta {
            *t = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        }
        Ok(model)
    }

    pub fn with_params(config: HqcgConfig, theta: Vec<f64>) -> Result<Self> {
        let mut model = Self::new(config)?;
        model.set_params(theta)?;
        Ok(model)
    }

    /// Arbitrary feature circuits and class circuits over one register.
    /// Used for toy models that do not follow the grouped layout.
    #[cfg(test)]
    pub(crate) fn from_parts(
        width: usize,
        layers: Vec<ParamCircuit>,
        classes: Vec<ParamCircuit>,
        theta: Vec<f64>,
    ) -> Self {
        let config = HqcgConfig { num_qubits: width, group_size: width, num_classes: classes.len(), depth: 0 };
        HqcgModel { config, width, lqcg: layers, gqcg: Vec::new(), classes, theta }
    }

    pub fn config(&self) -> &HqcgConfig {
        &self.config
    }

    pub fn num_qubits(&self) -> usize {
        self.width
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.theta
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    pub fn set_params(&mut self, theta: Vec<f64>) -> Result<()> {
        if theta.len() != self.theta.len() {
            return Err(Error::Shape(format!("model has {} parameters, got {}", self.theta.len(), theta.len())));
        }
        self.theta = theta;
        Ok(())
    }

    pub fn num_params(&self) -> usize {
        self.theta.len()
    }

    pub fn param_counts(&self) -> ParamCounts {
        let lqcg = self.lqcg.iter().map(ParamCircuit::num_params).sum();
        let gqcg = self.gqcg.iter().map(ParamCircuit::num_params).sum();
        let class_states = self.classes.iter().map(ParamCircuit::num_params).sum();
        ParamCounts { lqcg, gqcg, class_states, total: self.theta.len() }
    }

    pub fn lqcg(&self) -> &[ParamCircuit] {
        &self.lqcg
    }

    pub fn gqcg(&self) -> &[ParamCircuit] {
        &self.gqcg
    }

    pub fn class_circuits(&self) -> &[ParamCircuit] {
        &self.classes
    }

    /// Feature layers in application order.
    pub(crate) fn feature_layers(&self) -> Vec<&ParamCircuit> {
        let mut layers = Vec::with_capacity(self.lqcg.len() + self.gqcg.len());
        for (i, l) in self.lqcg.iter().enumerate() {
            layers.push(l);
            layers.extend(self.gqcg.get(i));
        }
        layers
    }

    /// Applies the local and global layers to `amps` in place.
    pub fn apply_layers(&self, amps: &mut [Complex64]) {
        for layer in self.feature_layers() {
            layer.apply(&self.theta, amps);
        }
    }

    /// `|ψ⟩` for a signal: encoding followed by the feature layers.
    pub fn feature_state(&self, signal: &[f64]) -> Result<Statevector> {
        let mut amps = encode_into(signal, self.width)?;
        self.apply_layers(&mut amps);
        Ok(Statevector::from_amplitudes_unchecked(amps))
    }

    /// `|φ_i⟩` for every class.
    pub fn class_states(&self) -> Vec<Statevector> {
        self.classes
            .iter()
            .map(|c| {
                let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.width];
                amps[0] = Complex64::new(1.0, 0.0);
                c.apply(&self.theta, &mut amps);
                Statevector::from_amplitudes_unchecked(amps)
            })
            .collect()
    }

    /// Class scores `|⟨ψ|φ_i⟩|²` against precomputed class states.
    pub fn scores(&self, signal: &[f64], class_states: &[Statevector]) -> Result<Vec<f64>> {
        let psi = self.feature_state(signal)?;
        Ok(class_states
            .iter()
            .map(|phi| kernels::inner(psi.amplitudes(), phi.amplitudes()).norm_sqr().min(1.0))
            .collect())
    }

    pub fn forward(&self, signal: &[f64]) -> Result<Vec<f64>> {
        self.scores(signal, &self.class_states())
    }

    /// Scores for many signals; rows in input order.
    pub fn forward_batch<S: AsRef<[f64]> + Sync>(&self, signals: &[S]) -> Result<Vec<Vec<f64>>> {
        let class_states = self.class_states();
        signals.par_iter().map(|s| self.scores(s.as_ref(), &class_states)).collect()
    }

    /// Human-readable gate listing followed by parameter counts.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for (i, (l, g)) in self.lqcg.iter().zip(&self.gqcg).enumerate() {
            let _ = writeln!(out, "# layer {i}: lqcg {} gates, gqcg {} gates", l.num_gates(), g.num_gates());
            out.push_str(&l.listing("lqcg"));
            out.push_str(&g.listing("gqcg"));
        }
        for (i, c) in self.classes.iter().enumerate() {
            let _ = writeln!(out, "# class state {i}");
            out.push_str(&c.listing(&format!("class{i}")));
        }
        let _ = writeln!(out, "# params {}", self.param_counts());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn pairs(c: &ParamCircuit) -> Vec<(usize, usize)> {
        c.param_gates().map(|g| (g.control.unwrap(), g.target)).collect()
    }

    #[test]
    fn lqcg_structure() {
        let c = build_lqcg(4, 4, 0).unwrap();
        assert_eq!(pairs(&c), vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(c.num_params(), 12);

        let c = build_lqcg(16, 4, 0).unwrap();
        assert_eq!(c.num_gates(), 16);
        assert_eq!(c.num_params(), 48);
        assert_eq!(pairs(&c)[4..8], [(4, 5), (5, 6), (6, 7), (7, 4)]);

        assert!(matches!(build_lqcg(4, 3, 0), Err(Error::Config(_))));
        assert!(matches!(build_lqcg(4, 1, 0), Err(Error::Config(_))));
    }

    #[test]
    fn gqcg_structure() {
        let c = build_gqcg(16, 4, 48).unwrap();
        assert_eq!(pairs(&c), vec![(3, 7), (7, 11), (11, 15), (15, 3)]);
        assert_eq!(c.num_params(), 12);
        assert_eq!(c.param_range(), 48..60);

        let c = build_gqcg(8, 4, 0).unwrap();
        assert_eq!(pairs(&c), vec![(3, 7), (7, 3)]);
        assert_eq!(c.num_params(), 6);

        assert!(matches!(build_gqcg(4, 4, 0), Err(Error::Config(_))));
    }

    #[test]
    fn circuit_rejects_slot_gaps() {
        let g = ParamGate { control: None, target: 0, slots: [0, 1, 3] };
        assert!(ParamCircuit::new(1, 0, vec![CircuitOp::Param(g)]).is_err());
        let g = ParamGate { control: Some(0), target: 0, slots: [0, 1, 2] };
        assert!(ParamCircuit::new(1, 0, vec![CircuitOp::Param(g)]).is_err());
    }

    #[test]
    fn class_state_examples() {
        let s = build_class_state(2, &[0.0; 6]).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        let s = build_class_state(1, &[0.0, PI, 0.0]).unwrap();
        assert!((s.amplitudes()[1].norm() - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let angles: Vec<f64> = (0..9).map(|_| rng.random_range(-PI..PI)).collect();
        let s = build_class_state(3, &angles).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(matches!(build_class_state(2, &[0.0; 5]), Err(Error::Shape(_))));
    }

    #[test]
    fn param_count_formula() {
        let m = HqcgModel::new(HqcgConfig::new(16, 4, 8)).unwrap();
        let counts = m.param_counts();
        assert_eq!((counts.lqcg, counts.gqcg, counts.class_states, counts.total), (48, 12, 384, 444));
        let m = HqcgModel::new(HqcgConfig { depth: 2, ..HqcgConfig::new(8, 4, 2) }).unwrap();
        assert_eq!(m.num_params(), 2 * (24 + 6) + 48);
        let ranges: Vec<_> = m.feature_layers().into_iter().map(|c| c.param_range()).collect();
        assert_eq!(ranges, vec![0..24, 24..30, 30..54, 54..60]);
    }

    #[test]
    fn zero_model_forward() {
        let m = HqcgModel::new(HqcgConfig::new(4, 2, 3)).unwrap();
        let signal: Vec<f64> = (1..=16).map(f64::from).collect();
        let norm_sqr: f64 = signal.iter().map(|v| v * v).sum();
        let p = m.forward(&signal).unwrap();
        for pi in p {
            assert!((pi - 1.0 / norm_sqr).abs() < 1e-15);
        }
        let mut spike = vec![0.0; 16];
        spike[0] = 2.5;
        assert!(m.forward(&spike).unwrap().iter().all(|&p| (p - 1.0).abs() < 1e-15));
    }

    #[test]
    fn forward_rejects_oversized_signal() {
        let m = HqcgModel::new(HqcgConfig::new(4, 2, 1)).unwrap();
        assert!(matches!(m.forward(&[1.0; 17]), Err(Error::Capacity(_))));
    }

    #[test]
    fn fidelity_examples() {
        let zero = Statevector::zero(1).unwrap();
        let one = Statevector::basis(1, 1).unwrap();
        let plus = zero.clone().apply(&GateOp::hadamard(0)).unwrap();
        assert!((swap_test_fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(swap_test_fidelity(&zero, &one).unwrap().abs() < 1e-12);
        assert!((swap_test_fidelity(&plus, &zero).unwrap() - 0.5).abs() < 1e-12);
        assert!((direct_fidelity(&zero, &plus).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(direct_fidelity(&zero, &zero).unwrap(), 1.0);
        assert!(matches!(swap_test_fidelity(&zero, &Statevector::zero(2).unwrap()), Err(Error::Shape(_))));
        let big = Statevector::zero(13).unwrap();
        assert!(matches!(swap_test_fidelity(&big, &big), Err(Error::Capacity(_))));
    }

    #[test]
    fn listing_format() {
        let m = HqcgModel::new(HqcgConfig::new(8, 4, 1)).unwrap();
        let text = m.listing();
        assert_eq!(text.lines().filter(|l| l.starts_with("lqcg CU")).count(), 8);
        assert_eq!(text.lines().filter(|l| l.starts_with("gqcg CU")).count(), 2);
        assert!(text.contains("gqcg CU control=3 target=7 params=[24, 25, 26]"));
    }
}
