use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::types::Label;

/// How the folds of one cross-validation run are used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    pub n_folds: usize,
    pub base_folds: usize,
    pub stream_folds: usize,
    pub test_folds: usize,
    pub seed: u64,
}

impl Default for FoldPlan {
    fn default() -> Self {
        FoldPlan {
            n_folds: 10,
            base_folds: 2,
            stream_folds: 7,
            test_folds: 1,
            seed: 0,
        }
    }
}

impl FoldPlan {
    pub fn with_seed(seed: u64) -> Self {
        FoldPlan {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_folds == 0 || self.stream_folds == 0 || self.test_folds == 0 {
            return Err(Error::InvalidParameter("every fold group needs at least one fold".into()));
        }
        if self.base_folds + self.stream_folds + self.test_folds != self.n_folds {
            return Err(Error::InvalidParameter(format!(
                "base ({}) + stream ({}) + test ({}) folds must equal n_folds ({})",
                self.base_folds, self.stream_folds, self.test_folds, self.n_folds
            )));
        }
        Ok(())
    }
}

/// Sample indices of one repetition. `stream` is grouped fold by fold
/// (`stream_folds` consecutive groups, see `stream_fold_bounds`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldSplit {
    pub repetition: usize,
    pub base: Vec<usize>,
    pub stream: Vec<usize>,
    pub test: Vec<usize>,
    /// End offset of each stream fold within `stream`.
    pub stream_fold_bounds: Vec<usize>,
}

impl FoldSplit {
    /// Stream indices with the last stream fold removed, and that fold.
    pub fn inner_validation(&self) -> (&[usize], &[usize]) {
        let cut = match self.stream_fold_bounds.len() {
            0 | 1 => 0,
            k => self.stream_fold_bounds[k - 2],
        };
        self.stream.split_at(cut)
    }
}

/// Seeded stratified fold id for every sample: each class is shuffled and
/// dealt round-robin, so per-fold class counts differ by at most one.
pub fn assign_folds(dataset: &Dataset, n_folds: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    for (i, s) in dataset.samples().iter().enumerate() {
        match s.label {
            Label::Positive => pos.push(i),
            Label::Negative => neg.push(i),
        }
    }
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut fold = vec![0; dataset.len()];
    // negatives continue the deal where positives stopped, balancing sizes
    for (k, &i) in pos.iter().chain(neg.iter()).enumerate() {
        fold[i] = k % n_folds;
    }
    fold
}

pub fn split_folds(dataset: &Dataset, plan: &FoldPlan) -> Result<Vec<FoldSplit>> {
    plan.validate()?;
    if dataset.len() < plan.n_folds {
        return Err(Error::InvalidParameter(format!(
            "dataset has {} samples, fewer than {} folds",
            dataset.len(),
            plan.n_folds
        )));
    }
    let fold = assign_folds(dataset, plan.n_folds, plan.seed);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); plan.n_folds];
    for (i, &f) in fold.iter().enumerate() {
        members[f].push(i);
    }
    let k = plan.n_folds;
    let splits = (0..k)
        .map(|r| {
            let group = |offset: usize, count: usize| -> Vec<usize> {
                (offset..offset + count)
                    .flat_map(|j| members[(r + j) % k].iter().copied())
                    .collect()
            };
            let test = group(0, plan.test_folds);
            let base = group(plan.test_folds, plan.base_folds);
            let mut stream = Vec::new();
            let mut bounds = Vec::new();
            for j in 0..plan.stream_folds {
                stream.extend(group(plan.test_folds + plan.base_folds + j, 1));
                bounds.push(stream.len());
            }
            FoldSplit {
                repetition: r,
                base,
                stream,
                test,
                stream_fold_bounds: bounds,
            }
        })
        .collect();
    Ok(splits)
}
