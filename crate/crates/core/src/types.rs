use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::vector::FeatureVector;

/// Binary class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    /// `+1.0` or `-1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    /// Thresholds a decision score; a score of exactly zero is positive.
    pub fn from_score(score: f64) -> Label {
        if score >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    /// Accepts `+1`, `1`, `-1` and `0` (mapped to negative).
    pub fn parse(token: &str) -> Option<Label> {
        let value: f64 = token.trim().parse().ok()?;
        if value == 1.0 {
            Some(Label::Positive)
        } else if value == -1.0 || value == 0.0 {
            Some(Label::Negative)
        } else {
            None
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "+1",
            Label::Negative => "-1",
        })
    }
}

/// A labelled training or test point, optionally carrying a precomputed
/// base score `f0(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub features: FeatureVector,
    pub label: Label,
    base_score: Option<f64>,
}

impl Sample {
    pub fn new(features: FeatureVector, label: Label) -> Self {
        Sample {
            features,
            label,
            base_score: None,
        }
    }

    pub fn with_base_score(features: FeatureVector, label: Label, base_score: f64) -> Result<Self> {
        if !base_score.is_finite() {
            return Err(Error::NonFinite(format!("base score {base_score}")));
        }
        Ok(Sample {
            features,
            label,
            base_score: Some(base_score),
        })
    }

    pub fn base_score(&self) -> Option<f64> {
        self.base_score
    }

    pub fn dimension(&self) -> usize {
        self.features.dimension()
    }
}

/// Misclassification costs `(C+, C-)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostSchedule {
    cost_positive: f64,
    cost_negative: f64,
}

impl CostSchedule {
    pub fn new(cost_positive: f64, cost_negative: f64) -> Result<Self> {
        for (name, c) in [("positive", cost_positive), ("negative", cost_negative)] {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} cost must be finite and > 0, got {c}"
                )));
            }
        }
        Ok(CostSchedule {
            cost_positive,
            cost_negative,
        })
    }

    /// Cost-insensitive schedule `(1, 1)`.
    pub fn uniform() -> Self {
        CostSchedule {
            cost_positive: 1.0,
            cost_negative: 1.0,
        }
    }

    pub fn cost_positive(&self) -> f64 {
        self.cost_positive
    }

    pub fn cost_negative(&self) -> f64 {
        self.cost_negative
    }

    pub fn cost_for(&self, label: Label) -> f64 {
        match label {
            Label::Positive => self.cost_positive,
            Label::Negative => self.cost_negative,
        }
    }

    pub fn max_cost(&self) -> f64 {
        self.cost_positive.max(self.cost_negative)
    }
}

/// Free-function form of [`CostSchedule::cost_for`].
pub fn cost_for(label: Label, schedule: &CostSchedule) -> f64 {
    schedule.cost_for(label)
}

impl FromStr for CostSchedule {
    type Err = Error;

    /// Parses `POS:NEG`, e.g. `5:1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected schedule POS:NEG, got {s:?}"));
        let (p, n) = s.split_once(':').ok_or_else(bad)?;
        let p: f64 = p.trim().parse().map_err(|_| bad())?;
        let n: f64 = n.trim().parse().map_err(|_| bad())?;
        CostSchedule::new(p, n)
    }
}

impl fmt::Display for CostSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.cost_positive, self.cost_negative)
    }
}

/// Learner hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyperparams {
    alpha: f64,
    pub skip_zero_vectors: bool,
    pub augment_bias: bool,
}

impl Hyperparams {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Hyperparams {
            alpha,
            skip_zero_vectors: true,
            augment_bias: false,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_skip_zero_vectors(mut self, skip: bool) -> Self {
        self.skip_zero_vectors = skip;
        self
    }

    pub fn with_bias(mut self, augment: bool) -> Self {
        self.augment_bias = augment;
        self
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be finite and > 0, got {alpha}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_and_car_costs() {
        let face = CostSchedule::new(5.0, 1.0).unwrap();
        assert_eq!(cost_for(Label::Positive, &face), 5.0);
        assert_eq!(cost_for(Label::Negative, &face), 1.0);
        let car = CostSchedule::new(8.0, 1.0).unwrap();
        assert_eq!(cost_for(Label::Positive, &car), 8.0);
    }

    #[test]
    fn cost_for_is_total() {
        let s = CostSchedule::new(3.5, 0.25).unwrap();
        for label in [Label::Positive, Label::Negative] {
            let c = s.cost_for(label);
            assert!(c == s.cost_positive() || c == s.cost_negative());
        }
        assert_ne!(s.cost_for(Label::Positive), s.cost_for(Label::Negative));
    }

    #[test]
    fn schedule_validation_and_parsing() {
        assert!(CostSchedule::new(0.0, 1.0).is_err());
        assert!(CostSchedule::new(1.0, f64::INFINITY).is_err());
        assert!(CostSchedule::new(-1.0, 1.0).is_err());
        let s: CostSchedule = "5:1".parse().unwrap();
        assert_eq!(s, CostSchedule::new(5.0, 1.0).unwrap());
        assert!("5".parse::<CostSchedule>().is_err());
        assert!("a:1".parse::<CostSchedule>().is_err());
    }

    #[test]
    fn label_parsing_and_tie_rule() {
        assert_eq!(Label::parse("+1"), Some(Label::Positive));
        assert_eq!(Label::parse("1"), Some(Label::Positive));
        assert_eq!(Label::parse("-1"), Some(Label::Negative));
        assert_eq!(Label::parse("0"), Some(Label::Negative));
        assert_eq!(Label::parse("2"), None);
        assert_eq!(Label::parse("x"), None);
        assert_eq!(Label::from_score(0.0), Label::Positive);
        assert_eq!(Label::from_score(0.3), Label::Positive);
        assert_eq!(Label::from_score(-0.3), Label::Negative);
    }

    #[test]
    fn alpha_must_be_positive() {
        assert!(Hyperparams::new(0.0).is_err());
        assert!(Hyperparams::new(f64::NAN).is_err());
        let h = Hyperparams::new(1.0).unwrap();
        assert!(h.skip_zero_vectors);
        assert!(!h.augment_bias);
    }

    #[test]
    fn base_score_must_be_finite() {
        let x = FeatureVector::dense(vec![1.0]).unwrap();
        assert!(Sample::with_base_score(x.clone(), Label::Positive, f64::NAN).is_err());
        assert_eq!(
            Sample::with_base_score(x, Label::Positive, 0.5).unwrap().base_score(),
            Some(0.5)
        );
    }
}
