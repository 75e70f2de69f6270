//! The base / stream / test comparison protocol.
//!
//! Each repetition trains `f0` on the base folds under the old cost
//! setting, picks `α` on a held-out stream fold, adapts `f0` over the stream
//! folds under the new setting, and scores every method on the test fold
//! under the new setting. Baselines only ever see the stream folds.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use super::folds::{split_folds, FoldPlan, FoldSplit};
use super::metrics::{evaluate, Metrics};
use crate::baselines::{train_batch_cost_svm, BatchSvmConfig};
use crate::data::{shuffled_indices, Dataset};
use crate::error::{Error, Result};
use crate::learner::OcscaLearner;
use crate::scorer::{AdaptedClassifier, BaseScorer, LinearScorer};
use crate::types::{CostSchedule, Hyperparams, Sample};

pub const DEFAULT_ALPHA_GRID: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// `f0` alone, trained under the old costs.
    Base,
    /// `f0` adapted online under the new costs.
    Ocsca,
    /// Zero-base online learner under the new costs.
    PaCostSensitive,
    /// Zero-base online learner with unit costs.
    PaCostInsensitive,
    /// Offline cost-weighted linear SVM on the stream folds.
    BatchSvm,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Base,
        Method::Ocsca,
        Method::PaCostSensitive,
        Method::PaCostInsensitive,
        Method::BatchSvm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Base => "base",
            Method::Ocsca => "ocsca",
            Method::PaCostSensitive => "pa_cost_sensitive",
            Method::PaCostInsensitive => "pa_cost_insensitive",
            Method::BatchSvm => "batch_svm",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How `f0` is trained on the base folds.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseTrainer {
    /// One pass of the zero-base online learner.
    Online { alpha: f64 },
    Batch(BatchSvmConfig),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolConfig {
    pub old_schedule: CostSchedule,
    pub new_schedule: CostSchedule,
    pub alpha_grid: Vec<f64>,
    pub plan: FoldPlan,
    pub base_trainer: BaseTrainer,
    pub batch_svm: BatchSvmConfig,
    pub augment_bias: bool,
    /// Worker threads for repetitions; `None` uses the rayon default.
    pub threads: Option<usize>,
}

impl ProtocolConfig {
    pub fn new(old_schedule: CostSchedule, new_schedule: CostSchedule) -> Self {
        ProtocolConfig {
            old_schedule,
            new_schedule,
            alpha_grid: DEFAULT_ALPHA_GRID.to_vec(),
            plan: FoldPlan::default(),
            base_trainer: BaseTrainer::Online { alpha: 1.0 },
            batch_svm: BatchSvmConfig::default(),
            augment_bias: false,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.plan.validate()?;
        if self.alpha_grid.is_empty() {
            return Err(Error::InvalidParameter("alpha grid is empty".into()));
        }
        for &a in &self.alpha_grid {
            Hyperparams::new(a)?;
        }
        match &self.base_trainer {
            BaseTrainer::Online { alpha } => {
                Hyperparams::new(*alpha)?;
            }
            BaseTrainer::Batch(cfg) => cfg.validate()?,
        }
        self.batch_svm.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    /// Selected tradeoff parameter, for the online methods.
    pub alpha: Option<f64>,
    pub metrics: Metrics,
    /// Wall-clock seconds of the final training run (excludes α search and I/O).
    pub learn_seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoldResult {
    pub repetition: usize,
    pub n_base: usize,
    pub n_stream: usize,
    pub n_test: usize,
    pub methods: Vec<MethodResult>,
}

impl FoldResult {
    pub fn get(&self, method: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|m| m.method == method)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolResult {
    pub dataset_name: String,
    pub dataset_size: usize,
    pub dimension: usize,
    pub config: ProtocolConfig,
    pub folds: Vec<FoldResult>,
}

fn mix(seed: u64, stream: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .rotate_left(17)
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9))
}

fn online_pass(
    base: BaseScorer,
    dimension: usize,
    schedule: CostSchedule,
    alpha: f64,
    augment_bias: bool,
    stream: &[&Sample],
) -> Result<AdaptedClassifier> {
    let params = Hyperparams::new(alpha)?.with_bias(augment_bias);
    let mut learner = OcscaLearner::new(base, dimension, schedule, params)?.with_trace(false);
    learner.run_stream(stream.iter().copied())?;
    Ok(learner.into_classifier())
}

/// Picks the grid value whose one-pass model has the lowest average cost
/// on `validation` (ties go to the earlier grid entry).
pub fn select_alpha(
    grid: &[f64],
    base: &BaseScorer,
    dimension: usize,
    train_schedule: CostSchedule,
    eval_schedule: &CostSchedule,
    augment_bias: bool,
    train: &[&Sample],
    validation: &[Sample],
) -> Result<f64> {
    let mut best: Option<(f64, f64)> = None;
    for &alpha in grid {
        let c = online_pass(base.clone(), dimension, train_schedule, alpha, augment_bias, train)?;
        let cost = evaluate(&c, validation, eval_schedule)?.avg_cost;
        if best.is_none_or(|(_, b)| cost < b) {
            best = Some((alpha, cost));
        }
    }
    best.map(|(a, _)| a)
        .ok_or_else(|| Error::InvalidParameter("alpha grid is empty".into()))
}

fn train_base(
    dataset: &Dataset,
    split: &FoldSplit,
    config: &ProtocolConfig,
    seed: u64,
) -> Result<LinearScorer> {
    let d = dataset.dimension();
    let order = shuffled_indices(split.base.len(), mix(seed, 1));
    let base: Vec<&Sample> = order
        .iter()
        .map(|&i| &dataset.samples()[split.base[i]])
        .collect();
    match &config.base_trainer {
        BaseTrainer::Online { alpha } => online_pass(
            BaseScorer::Zero,
            d,
            config.old_schedule,
            *alpha,
            config.augment_bias,
            &base,
        )?
        .flatten(),
        BaseTrainer::Batch(cfg) => {
            let owned: Vec<Sample> = base.into_iter().cloned().collect();
            let cfg = BatchSvmConfig {
                shuffle_seed: mix(cfg.shuffle_seed, seed),
                fit_intercept: config.augment_bias,
                ..cfg.clone()
            };
            train_batch_cost_svm(&owned, &config.old_schedule, &cfg)
        }
    }
}

fn run_repetition(dataset: &Dataset, split: &FoldSplit, config: &ProtocolConfig) -> Result<FoldResult> {
    let d = dataset.dimension();
    let all = dataset.samples();
    let seed = mix(config.plan.seed, split.repetition as u64 + 1);
    let new = config.new_schedule;
    let test: Vec<Sample> = split.test.iter().map(|&i| all[i].clone()).collect();

    let started = Instant::now();
    let f0 = BaseScorer::Linear(train_base(dataset, split, config, seed)?);
    let base_seconds = started.elapsed().as_secs_f64();

    let (inner, held_out) = split.inner_validation();
    let inner_order = shuffled_indices(inner.len(), mix(seed, 2));
    let inner_stream: Vec<&Sample> = inner_order.iter().map(|&i| &all[inner[i]]).collect();
    let validation: Vec<Sample> = held_out.iter().map(|&i| all[i].clone()).collect();

    let order = shuffled_indices(split.stream.len(), mix(seed, 3));
    let stream: Vec<&Sample> = order.iter().map(|&i| &all[split.stream[i]]).collect();

    let mut methods = vec![MethodResult {
        method: Method::Base,
        alpha: None,
        metrics: evaluate(&AdaptedClassifier::unadapted(f0.clone(), d)?, &test, &new)?,
        learn_seconds: base_seconds,
    }];

    for (method, base, schedule) in [
        (Method::Ocsca, f0.clone(), new),
        (Method::PaCostSensitive, BaseScorer::Zero, new),
        (Method::PaCostInsensitive, BaseScorer::Zero, CostSchedule::uniform()),
    ] {
        let alpha = select_alpha(
            &config.alpha_grid,
            &base,
            d,
            schedule,
            &new,
            config.augment_bias,
            &inner_stream,
            &validation,
        )?;
        let started = Instant::now();
        let classifier = online_pass(base, d, schedule, alpha, config.augment_bias, &stream)?;
        let learn_seconds = started.elapsed().as_secs_f64();
        methods.push(MethodResult {
            method,
            alpha: Some(alpha),
            metrics: evaluate(&classifier, &test, &new)?,
            learn_seconds,
        });
    }

    let stream_owned: Vec<Sample> = stream.iter().map(|s| (*s).clone()).collect();
    let svm_cfg = BatchSvmConfig {
        shuffle_seed: mix(config.batch_svm.shuffle_seed, seed),
        fit_intercept: config.augment_bias,
        ..config.batch_svm.clone()
    };
    let started = Instant::now();
    let svm = train_batch_cost_svm(&stream_owned, &new, &svm_cfg)?;
    let learn_seconds = started.elapsed().as_secs_f64();
    methods.push(MethodResult {
        method: Method::BatchSvm,
        alpha: None,
        metrics: evaluate(&AdaptedClassifier::unadapted(BaseScorer::Linear(svm), d)?, &test, &new)?,
        learn_seconds,
    });

    Ok(FoldResult {
        repetition: split.repetition,
        n_base: split.base.len(),
        n_stream: split.stream.len(),
        n_test: split.test.len(),
        methods,
    })
}

/// Runs every repetition of the plan. Results are identical for identical
/// inputs regardless of thread count (timings aside).
pub fn run_protocol(dataset: &Dataset, config: &ProtocolConfig) -> Result<ProtocolResult> {
    config.validate()?;
    let splits = split_folds(dataset, &config.plan)?;
    let run = || {
        splits
            .par_iter()
            .map(|split| {
                run_repetition(dataset, split, config).map_err(|e| Error::at_fold(split.repetition, e))
            })
            .collect::<Result<Vec<_>>>()
    };
    let folds = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(ProtocolResult {
        dataset_name: dataset.name.clone(),
        dataset_size: dataset.len(),
        dimension: dataset.dimension(),
        config: config.clone(),
        folds,
    })
}
