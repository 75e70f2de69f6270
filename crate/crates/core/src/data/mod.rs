//! Datasets: LIBSVM and CSV readers, a Gaussian generator, and seeded
//! streaming order.

mod csv;
mod libsvm;
mod source;
mod synth;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{Label, Sample};

pub use self::csv::{parse_csv, read_csv, CsvOptions};
pub use self::libsvm::{format_libsvm, parse_libsvm, read_libsvm, write_libsvm, LibsvmOptions};
pub use self::source::{DataFormat, DataSource};
pub use self::synth::{generate_synthetic, SynthSpec};

/// A named collection of samples sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    dimension: usize,
    samples: Vec<Sample>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, dimension: usize, samples: Vec<Sample>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("dataset dimension must be positive".into()));
        }
        if let Some((i, s)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| s.dimension() != dimension)
        {
            return Err(Error::at_sample(
                i,
                Error::DimensionMismatch {
                    expected: dimension,
                    found: s.dimension(),
                },
            ));
        }
        Ok(Dataset {
            name: name.into(),
            dimension,
            samples,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `(positives, negatives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self
            .samples
            .iter()
            .filter(|s| s.label == Label::Positive)
            .count();
        (pos, self.samples.len() - pos)
    }

    /// New dataset holding the samples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            dimension: self.dimension,
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }
}

/// Seeded permutation of `0..n`.
pub fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// The dataset's samples in a seeded random order.
pub fn shuffled_stream(dataset: &Dataset, seed: u64) -> Vec<&Sample> {
    shuffled_indices(dataset.len(), seed)
        .into_iter()
        .map(|i| &dataset.samples[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::FeatureVector;

    fn toy(n: usize) -> Dataset {
        let samples = (0..n)
            .map(|i| {
                Sample::new(
                    FeatureVector::dense(vec![i as f64, 1.0]).unwrap(),
                    if i % 3 == 0 { Label::Positive } else { Label::Negative },
                )
            })
            .collect();
        Dataset::new("toy", 2, samples).unwrap()
    }

    #[test]
    fn stream_is_deterministic_permutation() {
        let d = toy(25);
        let a: Vec<f64> = shuffled_stream(&d, 9).iter().map(|s| s.features.get(0)).collect();
        let b: Vec<f64> = shuffled_stream(&d, 9).iter().map(|s| s.features.get(0)).collect();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, (0..25).map(|i| i as f64).collect::<Vec<_>>());
        let c = shuffled_indices(25, 10);
        let mut c_sorted = c.clone();
        c_sorted.sort();
        assert_eq!(c_sorted, (0..25).collect::<Vec<_>>());
    }

    #[test]
    fn class_counts_sum() {
        let d = toy(10);
        let (p, n) = d.class_counts();
        assert_eq!((p, n), (4, 6));
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let s = vec![
            Sample::new(FeatureVector::dense(vec![1.0]).unwrap(), Label::Positive),
            Sample::new(FeatureVector::dense(vec![1.0, 2.0]).unwrap(), Label::Positive),
        ];
        assert!(Dataset::new("bad", 1, s).is_err());
    }
}
