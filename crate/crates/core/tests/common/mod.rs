#![allow(dead_code, clippy::needless_range_loop)]

use ocsca::{FeatureVector, Label, Sample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Textbook PA-I on raw slices: τ = min(C, ℓ/‖x‖²), w += τ·y·x.
pub struct PaOne {
    pub w: Vec<f64>,
    pub aggressiveness: f64,
}

impl PaOne {
    pub fn new(d: usize, aggressiveness: f64) -> Self {
        PaOne {
            w: vec![0.0; d],
            aggressiveness,
        }
    }

    pub fn update(&mut self, x: &[f64], y: f64) {
        let mut wx = 0.0;
        let mut xx = 0.0;
        for i in 0..x.len() {
            wx += self.w[i] * x[i];
            xx += x[i] * x[i];
        }
        let loss = f64::max(0.0, 1.0 - y * wx);
        if loss == 0.0 || xx == 0.0 {
            return;
        }
        let tau = f64::min(self.aggressiveness, loss / xx);
        for i in 0..x.len() {
            self.w[i] += tau * y * x[i];
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_label(rng: &mut ChaCha8Rng) -> Label {
    if rng.random_bool(0.5) {
        Label::Positive
    } else {
        Label::Negative
    }
}

/// Dense sample with entries uniform in [-1, 1]; never the zero vector.
pub fn random_sample(rng: &mut ChaCha8Rng, d: usize) -> Sample {
    loop {
        let x = uniform_vec(rng, d, -1.0, 1.0);
        if x.iter().any(|v| *v != 0.0) {
            return Sample::new(FeatureVector::dense(x).unwrap(), random_label(rng));
        }
    }
}

/// Random sample with roughly `density` of its entries non-zero, stored sparse.
pub fn random_sparse_sample(rng: &mut ChaCha8Rng, d: usize, density: f64) -> Sample {
    loop {
        let mut entries = Vec::new();
        for i in 0..d {
            if rng.random_bool(density) {
                entries.push((i, rng.random_range(-1.0..1.0)));
            }
        }
        if !entries.is_empty() {
            let x = FeatureVector::sparse(d, entries).unwrap();
            return Sample::new(x, random_label(rng));
        }
    }
}
