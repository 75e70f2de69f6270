use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Dataset;
use crate::error::{Error, Result};
use crate::types::{Label, Sample};
use crate::vector::FeatureVector;

/// Two isotropic Gaussian classes centred at `±(mean_separation / 2)` on
/// every axis.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub n_positive: usize,
    pub n_negative: usize,
    pub dimension: usize,
    pub mean_separation: f64,
    pub noise_scale: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidParameter("synthetic dimension must be positive".into()));
        }
        if !(self.noise_scale.is_finite() && self.noise_scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise_scale must be finite and > 0, got {}",
                self.noise_scale
            )));
        }
        if !self.mean_separation.is_finite() {
            return Err(Error::InvalidParameter("mean_separation must be finite".into()));
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        format!(
            "synth-p{}-n{}-d{}-s{}-e{}-seed{}",
            self.n_positive,
            self.n_negative,
            self.dimension,
            self.mean_separation,
            self.noise_scale,
            self.seed
        )
    }
}

impl FromStr for SynthSpec {
    type Err = Error;

    /// `n_pos=400,n_neg=1600,dim=2,sep=2.0,noise=1.0,seed=7`; long field
    /// names are accepted too. Missing keys default to a small 2-D problem.
    fn from_str(s: &str) -> Result<Self> {
        let mut spec = SynthSpec {
            n_positive: 100,
            n_negative: 100,
            dimension: 2,
            mean_separation: 2.0,
            noise_scale: 1.0,
            seed: 0,
        };
        let bad = |what: &str| Error::InvalidParameter(format!("synthetic spec: {what}"));
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(&format!("expected key=value, got {part:?}")))?;
            let value = value.trim();
            let int = || value.parse::<usize>().map_err(|_| bad(&format!("{key}: bad integer {value:?}")));
            let real = || value.parse::<f64>().map_err(|_| bad(&format!("{key}: bad number {value:?}")));
            match key.trim() {
                "n_pos" | "n_positive" => spec.n_positive = int()?,
                "n_neg" | "n_negative" => spec.n_negative = int()?,
                "dim" | "dimension" => spec.dimension = int()?,
                "sep" | "mean_separation" => spec.mean_separation = real()?,
                "noise" | "noise_scale" => spec.noise_scale = real()?,
                "seed" => {
                    spec.seed = value
                        .parse()
                        .map_err(|_| bad(&format!("seed: bad integer {value:?}")))?
                }
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Draws the dataset; identical specs give bitwise-identical datasets.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mu = spec.mean_separation / 2.0;
    let mut samples = Vec::with_capacity(spec.n_positive + spec.n_negative);
    for (label, count, centre) in [
        (Label::Positive, spec.n_positive, mu),
        (Label::Negative, spec.n_negative, -mu),
    ] {
        for _ in 0..count {
            let x: Vec<f64> = (0..spec.dimension)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    centre + spec.noise_scale * z
                })
                .collect();
            samples.push(Sample::new(FeatureVector::dense(x)?, label));
        }
    }
    samples.shuffle(&mut rng);
    Dataset::new(spec.name(), spec.dimension, samples)
}
