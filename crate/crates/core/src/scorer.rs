//! Base scorers, the linear adaptation layer, and their composition
//! `f(x) = f0(x) + wᵀx`.

use crate::error::{Error, Result};
use crate::types::{Label, Sample};
use crate::vector::FeatureVector;

/// `uᵀx + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearScorer {
    weights: Vec<f64>,
    intercept: Option<f64>,
}

impl LinearScorer {
    pub fn new(weights: Vec<f64>, intercept: Option<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("linear scorer needs at least one weight".into()));
        }
        if weights.iter().chain(intercept.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("linear scorer weights".into()));
        }
        Ok(LinearScorer { weights, intercept })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn intercept(&self) -> Option<f64> {
        self.intercept
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn score(&self, x: &FeatureVector) -> Result<f64> {
        Ok(x.dot(&self.weights)? + self.intercept.unwrap_or(0.0))
    }
}

/// The fixed, pre-trained scoring function `f0`.
///
/// Classifiers that are not linear can be plugged in through
/// [`BaseScorer::Precomputed`], which reads `f0(x)` from the sample itself.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseScorer {
    /// `f0(x) = 0`.
    Zero,
    Linear(LinearScorer),
    /// `f0(x)` is [`Sample::base_score`].
    Precomputed,
}

impl BaseScorer {
    pub fn kind(&self) -> &'static str {
        match self {
            BaseScorer::Zero => "zero",
            BaseScorer::Linear(_) => "linear",
            BaseScorer::Precomputed => "precomputed",
        }
    }

    /// Dimension the scorer was built for, if it has one.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            BaseScorer::Linear(l) => Some(l.dimension()),
            _ => None,
        }
    }

    pub fn score(&self, x: &FeatureVector) -> Result<f64> {
        match self {
            BaseScorer::Zero => Ok(0.0),
            BaseScorer::Linear(l) => l.score(x),
            BaseScorer::Precomputed => Err(Error::InvalidParameter(
                "precomputed base scorer can only score samples carrying a base score".into(),
            )),
        }
    }

    pub fn score_sample(&self, sample: &Sample) -> Result<f64> {
        match self {
            BaseScorer::Precomputed => sample.base_score().ok_or_else(|| {
                Error::InvalidParameter("sample has no precomputed base score".into())
            }),
            other => other.score(&sample.features),
        }
    }
}

/// The adaptation weights `w`, optionally with a trailing bias weight that
/// multiplies an implicit constant-1 feature.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearAdaptation {
    weights: Vec<f64>,
    dimension: usize,
    bias: bool,
    updates_applied: u64,
}

impl LinearAdaptation {
    pub fn zeros(dimension: usize, bias: bool) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(LinearAdaptation {
            weights: vec![0.0; dimension + bias as usize],
            dimension,
            bias,
            updates_applied: 0,
        })
    }

    pub fn from_parts(
        weights: Vec<f64>,
        dimension: usize,
        bias: bool,
        updates_applied: u64,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let expected = dimension + bias as usize;
        if weights.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("adaptation weights".into()));
        }
        Ok(LinearAdaptation {
            weights,
            dimension,
            bias,
            updates_applied,
        })
    }

    /// Feature dimension `d` (excluding the bias weight).
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn has_bias(&self) -> bool {
        self.bias
    }

    /// All weights; the bias weight, when present, is last.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias_weight(&self) -> Option<f64> {
        self.bias.then(|| self.weights[self.dimension])
    }

    pub fn updates_applied(&self) -> u64 {
        self.updates_applied
    }

    pub(crate) fn check_dimension(&self, x: &FeatureVector) -> Result<()> {
        if x.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.dimension(),
            });
        }
        Ok(())
    }

    /// `wᵀx` (plus the bias weight when bias augmentation is on).
    pub fn contribution(&self, x: &FeatureVector) -> Result<f64> {
        self.check_dimension(x)?;
        let mut s = x.dot_prefix(&self.weights);
        if self.bias {
            s += self.weights[self.dimension];
        }
        Ok(s)
    }

    /// Squared norm of the (possibly bias-augmented) feature vector.
    pub fn effective_norm_sq(&self, x: &FeatureVector) -> f64 {
        x.norm_sq() + if self.bias { 1.0 } else { 0.0 }
    }

    /// `w ← w + scale·x` and counts the step. A zero scale leaves the
    /// weights untouched bit for bit.
    pub(crate) fn step(&mut self, x: &FeatureVector, scale: f64) {
        if scale != 0.0 {
            x.add_scaled_into(&mut self.weights, scale);
            if self.bias {
                self.weights[self.dimension] += scale;
            }
        }
        self.updates_applied += 1;
    }
}

/// `f(x) = f0(x) + wᵀx`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedClassifier {
    pub base: BaseScorer,
    pub adaptation: LinearAdaptation,
}

impl AdaptedClassifier {
    pub fn new(base: BaseScorer, adaptation: LinearAdaptation) -> Result<Self> {
        if let Some(d) = base.dimension() {
            if d != adaptation.dimension() {
                return Err(Error::DimensionMismatch {
                    expected: adaptation.dimension(),
                    found: d,
                });
            }
        }
        Ok(AdaptedClassifier { base, adaptation })
    }

    /// Base scorer with zero adaptation.
    pub fn unadapted(base: BaseScorer, dimension: usize) -> Result<Self> {
        Self::new(base, LinearAdaptation::zeros(dimension, false)?)
    }

    pub fn dimension(&self) -> usize {
        self.adaptation.dimension()
    }

    pub fn score(&self, x: &FeatureVector) -> Result<f64> {
        let w = self.adaptation.contribution(x)?;
        Ok(self.base.score(x)? + w)
    }

    pub fn score_sample(&self, sample: &Sample) -> Result<f64> {
        let w = self.adaptation.contribution(&sample.features)?;
        Ok(self.base.score_sample(sample)? + w)
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<Label> {
        self.score(x).map(Label::from_score)
    }

    pub fn predict_sample(&self, sample: &Sample) -> Result<Label> {
        self.score_sample(sample).map(Label::from_score)
    }

    /// Folds base and adaptation into a single linear scorer. Fails for a
    /// precomputed base, which has no closed form.
    pub fn flatten(&self) -> Result<LinearScorer> {
        let d = self.dimension();
        let (mut weights, mut intercept) = match &self.base {
            BaseScorer::Zero => (vec![0.0; d], None),
            BaseScorer::Linear(l) => (l.weights().to_vec(), l.intercept()),
            BaseScorer::Precomputed => {
                return Err(Error::InvalidParameter(
                    "cannot flatten a classifier with a precomputed base".into(),
                ))
            }
        };
        for (u, w) in weights.iter_mut().zip(&self.adaptation.weights()[..d]) {
            *u += w;
        }
        if let Some(b) = self.adaptation.bias_weight() {
            intercept = Some(intercept.unwrap_or(0.0) + b);
        }
        LinearScorer::new(weights, intercept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(v: &[f64]) -> FeatureVector {
        FeatureVector::dense(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_everything_scores_zero() {
        let c = AdaptedClassifier::unadapted(BaseScorer::Zero, 3).unwrap();
        assert_eq!(c.score(&dense(&[4.0, -2.0, 9.0])).unwrap(), 0.0);
        assert_eq!(BaseScorer::Zero.score(&dense(&[1.0])).unwrap(), 0.0);
    }

    #[test]
    fn base_plus_adaptation_hand_arithmetic() {
        let base = BaseScorer::Linear(LinearScorer::new(vec![0.0, 0.0], Some(0.5)).unwrap());
        let adaptation = LinearAdaptation::from_parts(vec![1.0, 0.0], 2, false, 0).unwrap();
        let c = AdaptedClassifier::new(base, adaptation).unwrap();
        assert_eq!(c.score(&dense(&[1.0, 0.0])).unwrap(), 1.5);
    }

    #[test]
    fn linear_base_matches_two_dot_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let d = rng.random_range(1..12);
            let u: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let oracle: f64 = u.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>()
                + w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
            let c = AdaptedClassifier::new(
                BaseScorer::Linear(LinearScorer::new(u, None).unwrap()),
                LinearAdaptation::from_parts(w, d, false, 0).unwrap(),
            )
            .unwrap();
            assert!((c.score(&dense(&x)).unwrap() - oracle).abs() <= 1e-12);
        }
    }

    #[test]
    fn predict_thresholds_with_positive_ties() {
        let mk = |b: f64| {
            AdaptedClassifier::new(
                BaseScorer::Linear(LinearScorer::new(vec![0.0], Some(b)).unwrap()),
                LinearAdaptation::zeros(1, false).unwrap(),
            )
            .unwrap()
        };
        let x = dense(&[1.0]);
        assert_eq!(mk(0.3).predict(&x).unwrap(), Label::Positive);
        assert_eq!(mk(-0.3).predict(&x).unwrap(), Label::Negative);
        assert_eq!(mk(0.0).predict(&x).unwrap(), Label::Positive);
    }

    #[test]
    fn precomputed_reads_sample() {
        let c = AdaptedClassifier::unadapted(BaseScorer::Precomputed, 1).unwrap();
        let s = Sample::with_base_score(dense(&[1.0]), Label::Positive, -0.7).unwrap();
        assert_eq!(c.score_sample(&s).unwrap(), -0.7);
        assert!(c.score(&dense(&[1.0])).is_err());
        assert!(c.score_sample(&Sample::new(dense(&[1.0]), Label::Positive)).is_err());
    }

    #[test]
    fn dimension_checks() {
        let c = AdaptedClassifier::unadapted(BaseScorer::Zero, 2).unwrap();
        assert!(c.score(&dense(&[1.0])).is_err());
        let base = BaseScorer::Linear(LinearScorer::new(vec![1.0; 3], None).unwrap());
        assert!(AdaptedClassifier::unadapted(base, 2).is_err());
    }

    #[test]
    fn bias_weight_and_flatten() {
        let base = BaseScorer::Linear(LinearScorer::new(vec![1.0, 2.0], Some(0.25)).unwrap());
        let a = LinearAdaptation::from_parts(vec![0.5, -1.0, 3.0], 2, true, 4).unwrap();
        let c = AdaptedClassifier::new(base, a).unwrap();
        let x = dense(&[2.0, 1.0]);
        // 1*2 + 2*1 + 0.25 + 0.5*2 - 1*1 + 3
        assert_eq!(c.score(&x).unwrap(), 7.25);
        let flat = c.flatten().unwrap();
        assert_eq!(flat.weights(), &[1.5, 1.0]);
        assert_eq!(flat.intercept(), Some(3.25));
        assert_eq!(flat.score(&x).unwrap(), 7.25);
        assert_eq!(c.adaptation.effective_norm_sq(&x), 6.0);
    }
}
