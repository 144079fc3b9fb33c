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

//! Statevector simulation and hybrid training for hierarchical quantum
//! control gate (HQCG) classifiers.
//!
//! A signal is amplitude encoded into `⌈log2 l⌉` qubits, passed through a
//! local layer (trainable controlled rotations chained over contiguous qubit
//! groups, closed by a skip gate) and a global layer (the same pattern over
//! the last qubit of every group), and scored against one learnable state per
//! class by squared overlap.
//!
//! Qubit `q` is bit `q` of the basis-state index (little-endian) everywhere in
//! this crate.

pub mod baseline;
pub mod circuit;
pub mod cli;
pub mod data;
pub mod encoding;
mod error;
pub mod grad;
pub mod qstate;
pub mod train;

pub use error::{Error, Result};

pub use baseline::MlpModel;
pub use circuit::{HqcgConfig, HqcgModel, ParamCircuit, ParamGate};
pub use data::{Dataset, Sample, SyntheticSpec};
pub use qstate::{BasisProjector, GateOp, Mat2, Statevector};
pub use train::{TrainConfig, TrainReport};
