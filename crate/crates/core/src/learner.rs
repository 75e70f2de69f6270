//! The online cost-sensitive adaptation learner.
//!
//! Each incoming sample `(x, y)` with cost `C` solves
//!
//! ```text
//! min_w  ½‖w − w_prev‖² + α·C·max(0, 1 − y(f0(x) + wᵀx))
//! ```
//!
//! in closed form: `τ' = (1 − y·f(x)) / xᵀx`, clamped to `[0, αC]`, then
//! `w ← w + τ·y·x`. With a zero base scorer and unit costs this is exactly
//! the PA-I update.

use crate::error::{Error, Result};
use crate::scorer::{AdaptedClassifier, BaseScorer, LinearAdaptation};
use crate::types::{check_alpha, CostSchedule, Hyperparams, Label, Sample};

/// Dimensions above this start with the per-step trace disabled.
pub const TRACE_DIMENSION_LIMIT: usize = 1000;

/// Which branch of the clamped solution a step took.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepCase {
    /// `τ' ≤ 0`: margin already satisfied, no update.
    Passive,
    /// `0 < τ' ≤ αC`: the update exactly closes the hinge gap.
    Interior,
    /// `τ' > αC`: the step is capped at `αC`.
    Clamped,
    /// `xᵀx = 0`: no linear update can move the score.
    SkippedZeroVector,
}

impl StepCase {
    pub fn as_str(self) -> &'static str {
        match self {
            StepCase::Passive => "passive",
            StepCase::Interior => "interior",
            StepCase::Clamped => "clamped",
            StepCase::SkippedZeroVector => "skipped_zero_vector",
        }
    }
}

/// Diagnostics for one processed sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    /// `1 − y·f(x)` under the pre-update weights.
    pub margin_term: f64,
    /// Unclamped `τ'`; zero for skipped zero vectors.
    pub raw_tau: f64,
    pub tau: f64,
    pub case: StepCase,
    /// Hinge loss before the update, `max(0, margin_term)`.
    pub loss_before: f64,
    /// Hinge loss re-evaluated with the post-update weights.
    pub loss_after: f64,
    pub cost: f64,
}

/// Clamps `τ'` to `[0, α·cost]`.
pub fn clamp_tau(raw: f64, cost: f64, alpha: f64) -> (f64, StepCase) {
    let cap = alpha * cost;
    if raw <= 0.0 {
        (0.0, StepCase::Passive)
    } else if raw <= cap {
        (raw, StepCase::Interior)
    } else {
        (cap, StepCase::Clamped)
    }
}

/// Aggregate of a [`OcscaLearner::run_stream`] call.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StreamSummary {
    pub steps: usize,
    pub passive: usize,
    pub interior: usize,
    pub clamped: usize,
    pub skipped: usize,
    /// Samples whose pre-update prediction was wrong.
    pub mistakes: usize,
    /// Sum of pre-update hinge losses.
    pub cumulative_loss: f64,
    pub final_weights: Vec<f64>,
}

impl StreamSummary {
    fn record(&mut self, outcome: &StepOutcome, mistake: bool) {
        self.steps += 1;
        match outcome.case {
            StepCase::Passive => self.passive += 1,
            StepCase::Interior => self.interior += 1,
            StepCase::Clamped => self.clamped += 1,
            StepCase::SkippedZeroVector => self.skipped += 1,
        }
        if mistake {
            self.mistakes += 1;
        }
        self.cumulative_loss += outcome.loss_before;
    }
}

/// Online learner owning an [`AdaptedClassifier`] whose adaptation weights
/// it updates in place, one sample at a time.
#[derive(Clone, Debug)]
pub struct OcscaLearner {
    classifier: AdaptedClassifier,
    schedule: CostSchedule,
    params: Hyperparams,
    trace: Option<Vec<StepOutcome>>,
}

impl OcscaLearner {
    /// Fresh learner with `w = 0`.
    pub fn new(
        base: BaseScorer,
        dimension: usize,
        schedule: CostSchedule,
        params: Hyperparams,
    ) -> Result<Self> {
        let adaptation = LinearAdaptation::zeros(dimension, params.augment_bias)?;
        Self::from_classifier(AdaptedClassifier::new(base, adaptation)?, schedule, params)
    }

    /// Resumes from an existing classifier (e.g. a loaded model).
    pub fn from_classifier(
        classifier: AdaptedClassifier,
        schedule: CostSchedule,
        params: Hyperparams,
    ) -> Result<Self> {
        if classifier.adaptation.has_bias() != params.augment_bias {
            return Err(Error::InvalidParameter(
                "bias augmentation of the weights and hyperparameters disagree".into(),
            ));
        }
        let trace = (classifier.dimension() <= TRACE_DIMENSION_LIMIT).then(Vec::new);
        Ok(OcscaLearner {
            classifier,
            schedule,
            params,
            trace,
        })
    }

    pub fn with_trace(mut self, enabled: bool) -> Self {
        self.set_trace(enabled);
        self
    }

    pub fn set_trace(&mut self, enabled: bool) {
        match (enabled, self.trace.is_some()) {
            (true, false) => self.trace = Some(Vec::new()),
            (false, true) => self.trace = None,
            _ => {}
        }
    }

    pub fn trace(&self) -> Option<&[StepOutcome]> {
        self.trace.as_deref()
    }

    pub fn classifier(&self) -> &AdaptedClassifier {
        &self.classifier
    }

    pub fn into_classifier(self) -> AdaptedClassifier {
        self.classifier
    }

    pub fn weights(&self) -> &[f64] {
        self.classifier.adaptation.weights()
    }

    pub fn dimension(&self) -> usize {
        self.classifier.dimension()
    }

    pub fn schedule(&self) -> &CostSchedule {
        &self.schedule
    }

    pub fn params(&self) -> &Hyperparams {
        &self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    pub fn set_alpha(&mut self, alpha: f64) -> Result<()> {
        check_alpha(alpha)?;
        self.params = Hyperparams::new(alpha)?
            .with_skip_zero_vectors(self.params.skip_zero_vectors)
            .with_bias(self.params.augment_bias);
        Ok(())
    }

    /// `(f0(x), wᵀx)` under the current weights.
    fn score_parts(&self, sample: &Sample) -> Result<(f64, f64)> {
        let wx = self.classifier.adaptation.contribution(&sample.features)?;
        let f0 = self.classifier.base.score_sample(sample)?;
        Ok((f0, wx))
    }

    /// `1 − y·(f0(x) + wᵀx)` with the current (pre-update) weights.
    pub fn margin_term(&self, sample: &Sample) -> Result<f64> {
        let (f0, wx) = self.score_parts(sample)?;
        Ok(1.0 - sample.label.sign() * (f0 + wx))
    }

    /// Unclamped step size `τ'`; fails with [`Error::ZeroVector`] when
    /// `xᵀx = 0`.
    pub fn raw_tau(&self, sample: &Sample) -> Result<f64> {
        let margin = self.margin_term(sample)?;
        let norm_sq = self.classifier.adaptation.effective_norm_sq(&sample.features);
        if norm_sq == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(margin / norm_sq)
    }

    /// `w ← w + τ·y·x`. A zero `τ` leaves the weights bitwise unchanged.
    pub fn apply_update(&mut self, sample: &Sample, tau: f64) -> Result<()> {
        if !tau.is_finite() {
            return Err(Error::NonFinite(format!("step size {tau}")));
        }
        let cap = self.params.alpha() * self.schedule.cost_for(sample.label);
        if tau < 0.0 || tau > cap {
            return Err(Error::InvalidParameter(format!(
                "step size {tau} outside [0, {cap}]"
            )));
        }
        self.classifier.adaptation.check_dimension(&sample.features)?;
        self.classifier
            .adaptation
            .step(&sample.features, tau * sample.label.sign());
        Ok(())
    }

    /// One full iteration: cost lookup, `τ'`, clamping, and the update.
    pub fn process_sample(&mut self, sample: &Sample) -> Result<StepOutcome> {
        let y = sample.label.sign();
        let cost = self.schedule.cost_for(sample.label);
        let (f0, wx) = self.score_parts(sample)?;
        let margin_term = 1.0 - y * (f0 + wx);
        let loss_before = margin_term.max(0.0);
        let norm_sq = self.classifier.adaptation.effective_norm_sq(&sample.features);

        let outcome = if norm_sq == 0.0 {
            if !self.params.skip_zero_vectors {
                return Err(Error::ZeroVector);
            }
            StepOutcome {
                margin_term,
                raw_tau: 0.0,
                tau: 0.0,
                case: StepCase::SkippedZeroVector,
                loss_before,
                loss_after: loss_before,
                cost,
            }
        } else {
            let raw_tau = margin_term / norm_sq;
            let (tau, case) = clamp_tau(raw_tau, cost, self.params.alpha());
            self.classifier.adaptation.step(&sample.features, tau * y);
            let loss_after = if case == StepCase::Passive {
                loss_before
            } else {
                let wx_after = self.classifier.adaptation.contribution(&sample.features)?;
                (1.0 - y * (f0 + wx_after)).max(0.0)
            };
            if self.weights().iter().any(|w| !w.is_finite()) {
                return Err(Error::NonFinite("adaptation weights after update".into()));
            }
            StepOutcome {
                margin_term,
                raw_tau,
                tau,
                case,
                loss_before,
                loss_after,
                cost,
            }
        };
        if let Some(trace) = self.trace.as_mut() {
            trace.push(outcome);
        }
        Ok(outcome)
    }

    /// Processes samples strictly in order. Errors carry the index of the
    /// offending sample.
    pub fn run_stream<'a, I>(&mut self, stream: I) -> Result<StreamSummary>
    where
        I: IntoIterator<Item = &'a Sample>,
    {
        let mut summary = StreamSummary::default();
        for (index, sample) in stream.into_iter().enumerate() {
            let outcome = self
                .process_sample(sample)
                .map_err(|e| Error::at_sample(index, e))?;
            // pre-update score: f(x) = y·(1 − margin_term)
            let predicted = Label::from_score(sample.label.sign() * (1.0 - outcome.margin_term));
            summary.record(&outcome, predicted != sample.label);
        }
        summary.final_weights = self.weights().to_vec();
        Ok(summary)
    }
}
