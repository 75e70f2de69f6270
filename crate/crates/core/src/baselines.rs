//! Reference learners: the from-scratch online learner (zero base) and an
//! offline cost-weighted linear SVM trained by stochastic subgradient descent.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::learner::OcscaLearner;
use crate::scorer::{BaseScorer, LinearScorer};
use crate::types::{CostSchedule, Hyperparams, Sample};

/// Settings for [`train_batch_cost_svm`].
#[derive(Clone, Debug, PartialEq)]
pub struct BatchSvmConfig {
    pub epochs: usize,
    pub step_size: f64,
    pub regularization: f64,
    pub shuffle_seed: u64,
    /// Learn an unregularised intercept.
    pub fit_intercept: bool,
}

impl Default for BatchSvmConfig {
    fn default() -> Self {
        BatchSvmConfig {
            epochs: 50,
            step_size: 0.01,
            regularization: 1e-3,
            shuffle_seed: 0,
            fit_intercept: false,
        }
    }
}

impl BatchSvmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidParameter("epochs must be ≥ 1".into()));
        }
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step_size must be finite and > 0, got {}",
                self.step_size
            )));
        }
        if !(self.regularization.is_finite() && self.regularization >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "regularization must be finite and ≥ 0, got {}",
                self.regularization
            )));
        }
        Ok(())
    }
}

/// Trained batch model plus its training objective before the first epoch
/// and after every epoch.
#[derive(Clone, Debug)]
pub struct BatchSvmFit {
    pub scorer: LinearScorer,
    pub epoch_objectives: Vec<f64>,
}

/// `(1/n) Σ Cᵢ·max(0, 1 − yᵢ(wᵀxᵢ + b)) + (reg/2)‖w‖²`.
pub fn batch_objective(
    weights: &[f64],
    intercept: f64,
    data: &[Sample],
    schedule: &CostSchedule,
    regularization: f64,
) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyData("batch objective of an empty set".into()));
    }
    let mut loss = 0.0;
    for s in data {
        let margin = s.label.sign() * (s.features.dot(weights)? + intercept);
        loss += schedule.cost_for(s.label) * (1.0 - margin).max(0.0);
    }
    let norm_sq: f64 = weights.iter().map(|w| w * w).sum();
    Ok(loss / data.len() as f64 + 0.5 * regularization * norm_sq)
}

fn check_data(data: &[Sample]) -> Result<usize> {
    let first = data
        .first()
        .ok_or_else(|| Error::EmptyData("batch training needs at least one sample".into()))?;
    let d = first.dimension();
    if let Some(i) = data.iter().position(|s| s.dimension() != d) {
        return Err(Error::at_sample(
            i,
            Error::DimensionMismatch {
                expected: d,
                found: data[i].dimension(),
            },
        ));
    }
    Ok(d)
}

fn train(
    data: &[Sample],
    schedule: &CostSchedule,
    cfg: &BatchSvmConfig,
    track: bool,
) -> Result<BatchSvmFit> {
    cfg.validate()?;
    let d = check_data(data)?;
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut objectives = Vec::new();
    if track {
        objectives.push(batch_objective(&w, b, data, schedule, cfg.regularization)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.shuffle_seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let eta = cfg.step_size;
    let decay = 1.0 - eta * cfg.regularization;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let s = &data[i];
            let y = s.label.sign();
            let margin = y * (s.features.dot_prefix(&w) + b);
            if cfg.regularization > 0.0 {
                for wj in w.iter_mut() {
                    *wj *= decay;
                }
            }
            if margin < 1.0 {
                let g = eta * schedule.cost_for(s.label) * y;
                s.features.add_scaled_into(&mut w, g);
                if cfg.fit_intercept {
                    b += g;
                }
            }
        }
        if track {
            objectives.push(batch_objective(&w, b, data, schedule, cfg.regularization)?);
        }
    }
    if w.iter().any(|v| !v.is_finite()) || !b.is_finite() {
        return Err(Error::NonFinite("batch SVM weights diverged".into()));
    }
    Ok(BatchSvmFit {
        scorer: LinearScorer::new(w, cfg.fit_intercept.then_some(b))?,
        epoch_objectives: objectives,
    })
}

/// Offline cost-weighted linear SVM. Deterministic for a given seed.
pub fn train_batch_cost_svm(
    data: &[Sample],
    schedule: &CostSchedule,
    cfg: &BatchSvmConfig,
) -> Result<LinearScorer> {
    train(data, schedule, cfg, false).map(|f| f.scorer)
}

/// As [`train_batch_cost_svm`], also recording the objective per epoch.
pub fn fit_batch_cost_svm(
    data: &[Sample],
    schedule: &CostSchedule,
    cfg: &BatchSvmConfig,
) -> Result<BatchSvmFit> {
    train(data, schedule, cfg, true)
}

/// Online learner that ignores any existing classifier: zero base, `w = 0`.
/// With [`CostSchedule::uniform`] it is plain PA-I.
pub fn make_pa_baseline(
    dimension: usize,
    alpha: f64,
    schedule: CostSchedule,
) -> Result<OcscaLearner> {
    OcscaLearner::new(BaseScorer::Zero, dimension, schedule, Hyperparams::new(alpha)?)
}
