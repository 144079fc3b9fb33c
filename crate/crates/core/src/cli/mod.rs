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

//! The `hqcg` command line: dataset synthesis, training, evaluation,
//! prediction, circuit inspection and quantum-vs-classical comparison.
//!
//! Every command is a deterministic function of its flags. Exit codes are
//! [`EXIT_OK`], [`EXIT_USAGE`] for bad flags, configuration or input files,
//! and [`EXIT_NUMERIC`] when training or evaluation produces non-finite
//! values. `--config FILE` merges a JSON object over the flag values, so a
//! key present in the file wins. `HQCG_THREADS` caps the worker pool
//! (unset or `0` means one worker per core).

pub mod checkpoint;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::baseline::{MlpModel, DEFAULT_HIDDEN};
use crate::circuit::{HqcgConfig, HqcgModel, ParamCounts};
use crate::data::{self, Dataset, Manifest, SyntheticSpec};
use crate::encoding::required_qubits;
use crate::train::{self, init_rng, SplitMetrics, TrainConfig, TrainReport, Trainable};
use crate::{Error, Result};

pub use checkpoint::{AnyModel, Checkpoint, ModelSpec, SplitInfo};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const DATASET_FILE: &str = "dataset.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const MODEL_FILE: &str = "model.json";
pub const METRICS_FILE: &str = "metrics.json";
pub const CURVES_FILE: &str = "curves.csv";
pub const COMPARISON_FILE: &str = "comparison.csv";
const LOCK_FILE: &str = ".hqcg.lock";

#[derive(Debug, Parser)]
#[command(name = "hqcg", version, about = "Hierarchical quantum control gate classifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic multi-label dataset.
    Synth(SynthArgs),
    /// Train one model and write its checkpoint and report.
    Train(TrainArgs),
    /// Recompute metrics of a checkpoint on a dataset.
    Eval(EvalArgs),
    /// Print per-sample class probabilities.
    Predict(PredictArgs),
    /// List the gates and parameter counts of a circuit configuration.
    Inspect(InspectArgs),
    /// Train the quantum and classical models on the same split.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub classes: u64,
    #[arg(long = "len", default_value_t = 256)]
    pub signal_len: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Voxels per class block.
    #[arg(long, default_value_t = 64)]
    pub region: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gain: f64,
    #[arg(long, default_value_t = 0.3)]
    pub noise: f64,
    /// Mean number of active labels per sample.
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    /// Two half-length channels instead of one.
    #[arg(long)]
    pub twin: bool,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// JSON object of synthetic-spec fields overriding the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Quantum,
    Classical,
}

/// Flags shared by `train` and `compare`.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Dataset CSV (a sibling manifest.json is honoured).
    #[arg(long)]
    pub data: PathBuf,
    /// Qubits of the quantum model; defaults to the encoding minimum.
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long = "group", default_value_t = 4)]
    pub group_size: usize,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// Hidden width of the classical network.
    #[arg(long, default_value_t = DEFAULT_HIDDEN)]
    pub hidden: usize,
    #[arg(long, default_value_t = 30)]
    pub epochs: usize,
    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,
    #[arg(long = "lr", default_value_t = 0.01)]
    pub lr_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub weight_decay: f64,
    #[arg(long, default_value_t = 1)]
    pub eval_every: usize,
    /// Fraction of samples used for training; the rest is validation.
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// JSON object of run-config fields overriding the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Quantum)]
    pub model: ModelKind,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitChoice {
    Train,
    Val,
    All,
}

impl SplitChoice {
    fn name(self) -> &'static str {
        match self {
            SplitChoice::Train => "train",
            SplitChoice::Val => "val",
            SplitChoice::All => "all",
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Checkpoint written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// Which part of the dataset to score, using the checkpoint's split.
    #[arg(long, value_enum, default_value_t = SplitChoice::Val)]
    pub split: SplitChoice,
    /// Directory for metrics.json; defaults to `eval-<split>` next to the checkpoint.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// Report only the k most probable classes per sample.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub top: Option<u64>,
    /// Also write `id,rank,class,probability` rows to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long, default_value_t = 16)]
    pub qubits: usize,
    #[arg(long = "group", default_value_t = 4)]
    pub group_size: usize,
    #[arg(long, default_value_t = 8)]
    pub classes: usize,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// JSON object of circuit-config fields overriding the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved settings of one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    pub data: PathBuf,
    pub out: PathBuf,
    pub qubits: Option<usize>,
    pub group_size: usize,
    pub depth: usize,
    pub hidden: usize,
    pub train_fraction: f64,
    pub train: TrainConfig,
}

impl RunConfig {
    fn from_args(model: ModelKind, run: &RunArgs) -> Result<Self> {
        let cfg = RunConfig {
            model,
            data: run.data.clone(),
            out: run.out.clone(),
            qubits: run.qubits,
            group_size: run.group_size,
            depth: run.depth,
            hidden: run.hidden,
            train_fraction: run.train_fraction,
            train: TrainConfig {
                lr_max: run.lr_max,
                epochs: run.epochs,
                batch_size: run.batch_size,
                weight_decay: run.weight_decay,
                seed: run.seed,
                eval_every: run.eval_every,
                ..TrainConfig::default()
            },
        };
        with_overrides(cfg, run.config.as_deref())
    }

    /// Checks paths, optimizer settings and model/data compatibility.
    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        if !self.data.exists() {
            return Err(Error::Config(format!("dataset {} does not exist", self.data.display())));
        }
        self.train.validate()?;
        if self.model == ModelKind::Quantum {
            let needed = required_qubits(dataset.signal_len)?;
            let n = self.qubits.unwrap_or(needed);
            if n < needed {
                return Err(Error::Config(format!(
                    "signal length {} needs {needed} qubits, {n} configured",
                    dataset.signal_len
                )));
            }
            self.quantum_config(dataset).validate()?;
        } else if self.hidden == 0 {
            return Err(Error::Config("hidden width must be positive".into()));
        }
        Ok(())
    }

    fn quantum_config(&self, dataset: &Dataset) -> HqcgConfig {
        let n = self.qubits.unwrap_or_else(|| required_qubits(dataset.signal_len).unwrap_or(1));
        HqcgConfig { num_qubits: n, group_size: self.group_size, num_classes: dataset.num_classes, depth: self.depth }
    }

    /// Freshly initialized model drawn from the run seed.
    pub fn build_model(&self, dataset: &Dataset) -> Result<AnyModel> {
        self.validate(dataset)?;
        let mut rng = init_rng(self.train.seed);
        Ok(match self.model {
            ModelKind::Quantum => AnyModel::Quantum(HqcgModel::random(self.quantum_config(dataset), &mut rng)?),
            ModelKind::Classical => {
                AnyModel::Classical(MlpModel::random(dataset.signal_len, self.hidden, dataset.num_classes, &mut rng)?)
            }
        })
    }
}

/// Serializes `base`, merges the JSON object in `path` over it and reads it back.
fn with_overrides<T: Serialize + DeserializeOwned>(base: T, path: Option<&Path>) -> Result<T> {
    let Some(path) = path else { return Ok(base) };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let overrides: Value =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if !overrides.is_object() {
        return Err(Error::Config(format!("{}: expected a JSON object", path.display())));
    }
    let mut merged = serde_json::to_value(base)?;
    merge(&mut merged, overrides);
    serde_json::from_value(merged).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn merge(base: &mut Value, overrides: Value) {
    match (base, overrides) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Marks an output directory as in use for the lifetime of the value.
struct OutputLock {
    path: PathBuf,
}

impl OutputLock {
    fn acquire(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(OutputLock { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(Error::Config(format!(
                "output directory {} is in use by another run (remove {} if stale)",
                dir.display(),
                path.display()
            ))),
            Err(e) => Err(Error::io(&path, e)),
        }
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

/// Writes to stdout, tolerating a closed pipe (`hqcg predict … | head`).
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_USAGE
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("HQCG_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("HQCG_THREADS must be a non-negative integer, got `{raw}`")))?;
    if threads > 0 {
        // A pool may already exist when the CLI is driven in-process; keep it.
        if rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
            log::debug!("worker pool already initialized; HQCG_THREADS ignored");
        }
    }
    Ok(())
}

/// Entry point of the `hqcg` binary.
pub fn run() -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    run_from(std::env::args_os())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match configure_threads().and_then(|()| execute(&cli.command)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Synth(a) => cmd_synth(a),
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Inspect(a) => cmd_inspect(a),
        Command::Compare(a) => cmd_compare(a),
    }
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        num_classes: args.classes as usize,
        signal_len: args.signal_len,
        region_size: args.region,
        template_gain: args.gain,
        noise_sigma: args.noise,
        label_density: args.density,
        num_samples: args.samples,
        seed: args.seed,
        twin_channel: args.twin,
    };
    let spec = with_overrides(spec, args.config.as_deref())?;
    spec.validate()?;
    let dataset = data::generate_synthetic(&spec)?;
    let _lock = OutputLock::acquire(&args.out)?;
    let manifest = Manifest {
        num_classes: spec.num_classes,
        signal_len: spec.signal_len,
        num_samples: spec.num_samples,
        seed: Some(spec.seed),
        spec: Some(spec.clone()),
    };
    data::save_dataset(&dataset, &args.out.join(DATASET_FILE))?;
    data::save_manifest(&manifest, &args.out.join(MANIFEST_FILE))?;
    let mean_labels =
        dataset.samples.iter().map(|s| s.active_classes().count()).sum::<usize>() as f64 / dataset.len() as f64;
    println!(
        "wrote {} samples (C={}, l={}, seed={}, mean active labels {mean_labels:.3}) to {}",
        dataset.len(),
        spec.num_classes,
        spec.signal_len,
        spec.seed,
        args.out.display()
    );
    Ok(())
}

/// Training summary written as metrics.json.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainMetrics {
    pub model: String,
    pub num_params: usize,
    pub param_counts: Option<ParamCounts>,
    pub seed: u64,
    pub num_train: usize,
    pub num_val: usize,
    pub final_epoch: Option<usize>,
    pub train: Option<SplitMetrics>,
    pub val: Option<SplitMetrics>,
    pub report: TrainReport,
}

/// Outcome of a training run kept in memory for `compare`.
pub struct RunOutcome {
    pub model: AnyModel,
    pub metrics: TrainMetrics,
}

fn param_counts(model: &AnyModel) -> Option<ParamCounts> {
    match model {
        AnyModel::Quantum(m) => Some(m.param_counts()),
        AnyModel::Classical(_) => None,
    }
}

/// Trains per `cfg` on `dataset` and writes model.json, metrics.json and
/// curves.csv into `out`.
pub fn train_and_save(cfg: &RunConfig, dataset: &Dataset, out: &Path) -> Result<RunOutcome> {
    let mut model = cfg.build_model(dataset)?;
    let (train_set, val_set) = data::split(dataset, cfg.train_fraction, cfg.train.seed)?;
    let report = train::train_loop(&mut model, &train_set.samples, &val_set.samples, &cfg.train)?;
    let last = report.last();
    let metrics = TrainMetrics {
        model: model.kind().into(),
        num_params: model.num_params(),
        param_counts: param_counts(&model),
        seed: cfg.train.seed,
        num_train: train_set.len(),
        num_val: val_set.len(),
        final_epoch: last.map(|r| r.epoch),
        train: last.map(|r| r.train.clone()),
        val: last.and_then(|r| r.val.clone()),
        report: report.clone(),
    };
    let split = SplitInfo {
        train_fraction: cfg.train_fraction,
        seed: cfg.train.seed,
        num_train: train_set.len(),
        num_val: val_set.len(),
        signal_len: dataset.signal_len,
        num_classes: dataset.num_classes,
    };
    Checkpoint::new(&model, cfg.train.seed, cfg.train.clone(), split).save(&out.join(MODEL_FILE))?;
    write_json(&out.join(METRICS_FILE), &metrics)?;
    report.write_curves(&out.join(CURVES_FILE))?;
    log::info!("{} run finished in {:.2}s", model.kind(), report.wall_clock_seconds);
    Ok(RunOutcome { model, metrics })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |x| format!("{x:.4}"))
}

fn describe(m: &TrainMetrics) -> String {
    let val = m.val.as_ref();
    format!(
        "{} model ({} params): val accuracy {} auc {} loss {}",
        m.model,
        m.num_params,
        fmt_opt(val.and_then(|v| v.accuracy)),
        fmt_opt(val.and_then(|v| v.auc)),
        fmt_opt(val.map(|v| v.loss)),
    )
}

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    let cfg = RunConfig::from_args(args.model, &args.run)?;
    let dataset = data::load_dataset(&cfg.data)?;
    cfg.validate(&dataset)?;
    let _lock = OutputLock::acquire(&cfg.out)?;
    let outcome = train_and_save(&cfg, &dataset, &cfg.out)?;
    if let Some(counts) = &outcome.metrics.param_counts {
        println!("params: {counts}");
    }
    println!("{}", describe(&outcome.metrics));
    println!("outputs in {}", cfg.out.display());
    Ok(())
}

/// Loads a checkpoint and a dataset and checks they fit together.
fn load_pair(model_path: &Path, data_path: &Path) -> Result<(Checkpoint, AnyModel, Dataset)> {
    let checkpoint = Checkpoint::load(model_path)?;
    let model = checkpoint.model(model_path)?;
    let dataset = data::load_dataset(data_path)?;
    if dataset.signal_len != checkpoint.split.signal_len {
        return Err(Error::Shape(format!(
            "{} expects signals of length {}, {} has length {}",
            model_path.display(),
            checkpoint.split.signal_len,
            data_path.display(),
            dataset.signal_len
        )));
    }
    if !dataset.is_empty() && dataset.num_classes != checkpoint.split.num_classes {
        return Err(Error::Shape(format!(
            "{} has {} classes, {} has {}",
            model_path.display(),
            checkpoint.split.num_classes,
            data_path.display(),
            dataset.num_classes
        )));
    }
    Ok((checkpoint, model, dataset))
}

/// Metrics written by `eval`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub model: String,
    pub split: String,
    pub num_samples: usize,
    pub metrics: SplitMetrics,
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let (checkpoint, model, dataset) = load_pair(&args.model, &args.data)?;
    let subset = match args.split {
        SplitChoice::All => dataset,
        choice => {
            let (t, v) = data::split(&dataset, checkpoint.split.train_fraction, checkpoint.split.seed)?;
            if choice == SplitChoice::Train {
                t
            } else {
                v
            }
        }
    };
    let (metrics, _) = train::evaluate(&model, &subset.refs(), checkpoint.train.threshold)?;
    let out = match &args.out {
        Some(dir) => dir.clone(),
        None => args.model.parent().unwrap_or(Path::new(".")).join(format!("eval-{}", args.split.name())),
    };
    let _lock = OutputLock::acquire(&out)?;
    let report =
        EvalMetrics { model: model.kind().into(), split: args.split.name().into(), num_samples: subset.len(), metrics };
    write_json(&out.join(METRICS_FILE), &report)?;
    println!(
        "{} split ({} samples): loss {} accuracy {} auc {}",
        report.split,
        report.num_samples,
        report.metrics.loss,
        report.metrics.accuracy.map_or("n/a".into(), |v| v.to_string()),
        report.metrics.auc.map_or("n/a".into(), |v| v.to_string()),
    );
    Ok(())
}

/// `(class, probability)` pairs for one sample, most probable first when
/// `top` is given, otherwise in class order.
pub fn ranked_scores(probs: &[f64], top: Option<usize>) -> Vec<(usize, f64)> {
    let mut pairs: Vec<(usize, f64)> = probs.iter().copied().enumerate().collect();
    if let Some(k) = top {
        pairs.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        pairs.truncate(k);
    }
    pairs
}

pub fn cmd_predict(args: &PredictArgs) -> Result<()> {
    let (_, model, dataset) = match load_pair(&args.model, &args.data) {
        Err(Error::EmptyDataset) => {
            eprintln!("warning: {} contains no samples; nothing to predict", args.data.display());
            return Ok(());
        }
        other => other?,
    };
    if dataset.is_empty() {
        eprintln!("warning: {} contains no samples; nothing to predict", args.data.display());
        return Ok(());
    }
    let probs = model.predict(&dataset.refs())?;
    let top = args.top.map(|k| k as usize);
    let mut table = String::new();
    let mut csv = String::from("id,rank,class,probability\n");
    for (sample, row) in dataset.samples.iter().zip(&probs) {
        let ranked = ranked_scores(row, top);
        let cells: Vec<String> = ranked.iter().map(|(c, p)| format!("{c}:{p:.4}")).collect();
        let truth: Vec<String> = sample.active_classes().map(|c| c.to_string()).collect();
        let _ = writeln!(table, "{}\t[{}]\t{}", sample.id, truth.join(";"), cells.join(" "));
        for (rank, (c, p)) in ranked.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{c},{p}", sample.id, rank + 1);
        }
    }
    emit(&table);
    if let Some(path) = &args.csv {
        write_text(path, &csv)?;
    }
    Ok(())
}

/// Gate listing plus a per-layer summary of an HQCG configuration.
pub fn inspect_report(config: HqcgConfig) -> Result<String> {
    let model = HqcgModel::new(config)?;
    let counts = model.param_counts();
    let mut out = model.listing();
    let lqcg_gates: usize = model.lqcg().iter().map(|c| c.num_gates()).sum();
    let gqcg_gates: usize = model.gqcg().iter().map(|c| c.num_gates()).sum();
    let _ = writeln!(out, "lqcg: {lqcg_gates} gates, {} params", counts.lqcg);
    let _ = writeln!(out, "gqcg: {gqcg_gates} gates, {} params", counts.gqcg);
    let _ = writeln!(
        out,
        "class states: {} x {} params = {}",
        config.num_classes,
        3 * config.num_qubits,
        counts.class_states
    );
    let _ = writeln!(out, "total: {} params", counts.total);
    Ok(out)
}

pub fn cmd_inspect(args: &InspectArgs) -> Result<()> {
    let config = HqcgConfig {
        num_qubits: args.qubits,
        group_size: args.group_size,
        num_classes: args.classes,
        depth: args.depth,
    };
    let config = with_overrides(config, args.config.as_deref())?;
    emit(&inspect_report(config)?);
    Ok(())
}

/// One row of the side-by-side comparison table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub model: String,
    pub split: String,
    pub accuracy: Option<f64>,
    pub auc: Option<f64>,
    pub params: usize,
}

pub fn comparison_rows(runs: &[&TrainMetrics]) -> Vec<ComparisonRow> {
    let mut rows = Vec::new();
    for m in runs {
        for (split, metrics) in [("train", &m.train), ("val", &m.val)] {
            if let Some(s) = metrics {
                rows.push(ComparisonRow {
                    model: m.model.clone(),
                    split: split.into(),
                    accuracy: s.accuracy,
                    auc: s.auc,
                    params: m.num_params,
                });
            }
        }
    }
    rows
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("model,split,accuracy,auc,params\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.model, r.split, opt(r.accuracy), opt(r.auc), r.params);
    }
    out
}

pub fn cmd_compare(args: &CompareArgs) -> Result<()> {
    let quantum_cfg = RunConfig::from_args(ModelKind::Quantum, &args.run)?;
    let classical_cfg = RunConfig { model: ModelKind::Classical, ..quantum_cfg.clone() };
    let dataset = data::load_dataset(&quantum_cfg.data)?;
    quantum_cfg.validate(&dataset)?;
    classical_cfg.validate(&dataset)?;
    let out = &quantum_cfg.out;
    let _lock = OutputLock::acquire(out)?;
    let mut runs = Vec::new();
    for cfg in [&quantum_cfg, &classical_cfg] {
        let dir = out.join(match cfg.model {
            ModelKind::Quantum => "quantum",
            ModelKind::Classical => "classical",
        });
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        runs.push(train_and_save(cfg, &dataset, &dir)?.metrics);
    }
    let rows = comparison_rows(&runs.iter().collect::<Vec<_>>());
    write_text(&out.join(COMPARISON_FILE), &comparison_csv(&rows))?;
    println!("{:<10} {:<6} {:>9} {:>9} {:>8}", "model", "split", "accuracy", "auc", "params");
    for r in &rows {
        println!("{:<10} {:<6} {:>9} {:>9} {:>8}", r.model, r.split, fmt_opt(r.accuracy), fmt_opt(r.auc), r.params);
    }
    Ok(())
}
