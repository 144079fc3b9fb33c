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

//! Gate listing and parameter budget of an HQCG classifier.
//!
//! `cargo run --example inspect_circuit -- 16 4 8` (qubits, group size, classes).

use hqcg::cli::inspect_report;
use hqcg::HqcgConfig;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, g, c) = match args.as_slice() {
        [n, g, c, ..] => (*n, *g, *c),
        _ => (16, 4, 8),
    };
    match inspect_report(HqcgConfig::new(n, g, c)) {
        Ok(report) => print!("{report}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
