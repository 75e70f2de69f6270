//! Feature vectors with dense or sparse storage.
//!
//! Both forms represent the same mathematical vector: equality, dot products
//! and norms only look at the non-zero entries, so a sparse vector and its
//! densified copy are interchangeable everywhere in the crate.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<f64>),
    Sparse { indices: Vec<usize>, values: Vec<f64> },
}

/// A point in `R^d`.
#[derive(Clone, Debug)]
pub struct FeatureVector {
    dimension: usize,
    storage: Storage,
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(format!("feature value {} at position {}", values[i], i))),
        None => Ok(()),
    }
}

impl FeatureVector {
    /// Dense vector; the dimension is the length of `values`.
    pub fn dense(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("feature dimension must be positive".into()));
        }
        check_finite(&values)?;
        Ok(FeatureVector {
            dimension: values.len(),
            storage: Storage::Dense(values),
        })
    }

    /// Sparse vector from `(index, value)` pairs with strictly increasing,
    /// 0-based indices. Explicit zeros are dropped.
    pub fn sparse(dimension: usize, entries: Vec<(usize, f64)>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("feature dimension must be positive".into()));
        }
        let mut indices = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut prev: Option<usize> = None;
        for (index, value) in entries {
            if index >= dimension {
                return Err(Error::InvalidParameter(format!(
                    "feature index {index} out of range for dimension {dimension}"
                )));
            }
            if prev.is_some_and(|p| index <= p) {
                return Err(Error::InvalidParameter(format!(
                    "feature indices must be strictly increasing (got {index} after {})",
                    prev.unwrap()
                )));
            }
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("feature value {value} at index {index}")));
            }
            prev = Some(index);
            if value != 0.0 {
                indices.push(index);
                values.push(value);
            }
        }
        Ok(FeatureVector {
            dimension,
            storage: Storage::Sparse { indices, values },
        })
    }

    /// All-zero vector of the given dimension (sparse, no stored entries).
    pub fn zeros(dimension: usize) -> Result<Self> {
        Self::sparse(dimension, Vec::new())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse { .. })
    }

    /// Number of non-zero entries.
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.iter().filter(|x| **x != 0.0).count(),
            Storage::Sparse { values, .. } => values.len(),
        }
    }

    /// Iterates the non-zero entries in increasing index order.
    pub fn nonzeros(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match &self.storage {
            Storage::Dense(v) => Box::new(
                v.iter()
                    .copied()
                    .enumerate()
                    .filter(|(_, x)| *x != 0.0),
            ),
            Storage::Sparse { indices, values } => {
                Box::new(indices.iter().copied().zip(values.iter().copied()))
            }
        }
    }

    pub fn get(&self, index: usize) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v.get(index).copied().unwrap_or(0.0),
            Storage::Sparse { indices, values } => match indices.binary_search(&index) {
                Ok(pos) => values[pos],
                Err(_) => 0.0,
            },
        }
    }

    pub fn to_dense_vec(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense(v) => v.clone(),
            Storage::Sparse { indices, values } => {
                let mut out = vec![0.0; self.dimension];
                for (&i, &x) in indices.iter().zip(values) {
                    out[i] = x;
                }
                out
            }
        }
    }

    pub fn densified(&self) -> FeatureVector {
        FeatureVector {
            dimension: self.dimension,
            storage: Storage::Dense(self.to_dense_vec()),
        }
    }

    pub fn sparsified(&self) -> FeatureVector {
        let (indices, values) = self.nonzeros().unzip();
        FeatureVector {
            dimension: self.dimension,
            storage: Storage::Sparse { indices, values },
        }
    }

    /// `Σ aᵢ·bᵢ` against a dense real vector of the same dimension.
    pub fn dot(&self, other: &[f64]) -> Result<f64> {
        if other.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.len(),
            });
        }
        Ok(self.dot_prefix(other))
    }

    /// Dot product against the first `dimension` entries of `other`.
    /// Caller guarantees `other.len() >= dimension`.
    pub(crate) fn dot_prefix(&self, other: &[f64]) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v.iter().zip(other).map(|(a, b)| a * b).sum(),
            Storage::Sparse { indices, values } => indices
                .iter()
                .zip(values)
                .map(|(&i, &a)| a * other[i])
                .sum(),
        }
    }

    /// `xᵀx`.
    pub fn norm_sq(&self) -> f64 {
        let values = match &self.storage {
            Storage::Dense(v) => v,
            Storage::Sparse { values, .. } => values,
        };
        values.iter().map(|x| x * x).sum()
    }

    /// `target[..d] += scale · x`.
    pub(crate) fn add_scaled_into(&self, target: &mut [f64], scale: f64) {
        match &self.storage {
            Storage::Dense(v) => {
                for (t, x) in target.iter_mut().zip(v) {
                    *t += scale * x;
                }
            }
            Storage::Sparse { indices, values } => {
                for (&i, &x) in indices.iter().zip(values) {
                    target[i] += scale * x;
                }
            }
        }
    }

    /// Appends a constant `1.0` feature, yielding dimension `d + 1`.
    pub fn with_bias(&self) -> FeatureVector {
        let d = self.dimension;
        match &self.storage {
            Storage::Dense(v) => {
                let mut out = v.clone();
                out.push(1.0);
                FeatureVector {
                    dimension: d + 1,
                    storage: Storage::Dense(out),
                }
            }
            Storage::Sparse { indices, values } => {
                let mut indices = indices.clone();
                let mut values = values.clone();
                indices.push(d);
                values.push(1.0);
                FeatureVector {
                    dimension: d + 1,
                    storage: Storage::Sparse { indices, values },
                }
            }
        }
    }
}

impl PartialEq for FeatureVector {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.nonzeros().eq(other.nonzeros())
    }
}

/// Free-function form of [`FeatureVector::dot`].
pub fn dot(a: &FeatureVector, b: &[f64]) -> Result<f64> {
    a.dot(b)
}
