//! Online cost-sensitive classifier adaptation.
//!
//! A fixed base scorer `f0` is corrected by a linear term, `f(x) = f0(x) + wᵀx`,
//! and `w` is updated one sample at a time by the closed-form solution of a
//! cost-weighted proximal hinge-loss problem. Alongside the learner the crate
//! ships reference baselines, an independent interior-point solver for the
//! per-step problem, dataset readers and generators, and a cross-validation
//! protocol for comparing methods.

pub mod baselines;
pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod learner;
pub mod oracle;
pub mod persist;
pub mod scorer;
pub mod types;
pub mod vector;

pub use error::{Error, Result};
pub use learner::{clamp_tau, OcscaLearner, StepCase, StepOutcome, StreamSummary};
pub use scorer::{AdaptedClassifier, BaseScorer, LinearAdaptation, LinearScorer};
pub use types::{cost_for, CostSchedule, Hyperparams, Label, Sample};
pub use vector::{dot, FeatureVector};
