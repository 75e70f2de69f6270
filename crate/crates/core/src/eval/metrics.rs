use crate::error::{Error, Result};
use crate::scorer::AdaptedClassifier;
use crate::types::{CostSchedule, Label, Sample};

/// Confusion counts with positive as the reference class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn record(&mut self, truth: Label, predicted: Label) {
        match (truth, predicted) {
            (Label::Positive, Label::Positive) => self.tp += 1,
            (Label::Negative, Label::Positive) => self.fp += 1,
            (Label::Negative, Label::Negative) => self.tn += 1,
            (Label::Positive, Label::Negative) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Accuracy and average misclassification cost on a test set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub avg_cost: f64,
    pub n_test: usize,
    pub confusion: Confusion,
}

impl Metrics {
    /// `schedule` is the cost setting the errors are charged under.
    pub fn from_confusion(confusion: Confusion, schedule: &CostSchedule) -> Result<Self> {
        let n = confusion.total();
        if n == 0 {
            return Err(Error::EmptyData("cannot evaluate on an empty test set".into()));
        }
        let correct = (confusion.tp + confusion.tn) as f64;
        let cost = confusion.fn_ as f64 * schedule.cost_positive()
            + confusion.fp as f64 * schedule.cost_negative();
        Ok(Metrics {
            accuracy: correct / n as f64,
            avg_cost: cost / n as f64,
            n_test: n,
            confusion,
        })
    }
}

/// Scores every test sample and charges errors under `schedule`.
pub fn evaluate(
    classifier: &AdaptedClassifier,
    test: &[Sample],
    schedule: &CostSchedule,
) -> Result<Metrics> {
    if test.is_empty() {
        return Err(Error::EmptyData("cannot evaluate on an empty test set".into()));
    }
    let mut confusion = Confusion::default();
    for (i, s) in test.iter().enumerate() {
        let predicted = classifier
            .predict_sample(s)
            .map_err(|e| Error::at_sample(i, e))?;
        confusion.record(s.label, predicted);
    }
    Metrics::from_confusion(confusion, schedule)
}
