//! Independent numeric solver for the single-step adaptation problem.
//!
//! The closed-form learner update works through the dual. This module
//! instead attacks the primal slack formulation directly,
//!
//! ```text
//! min_{w, ξ}  ½‖w − w_prev‖² + α·C·ξ
//! s.t.        1 − y(f0 + wᵀx) ≤ ξ,   0 ≤ ξ
//! ```
//!
//! with a log-barrier interior-point method (damped Newton on the full
//! `(d + 1)`-dimensional system, dense Cholesky solves). The barrier has two
//! inequality constraints, so a centred point at barrier weight `t` is
//! within `2 / t` of the optimum; iteration stops once that bound is below
//! [`GAP_TOLERANCE`].

use crate::error::{Error, Result};
use crate::types::Sample;

/// Upper bound on `objective(w_star) − min objective` at termination.
pub const GAP_TOLERANCE: f64 = 1e-10;

const MAX_NEWTON_STEPS: usize = 200;
const BARRIER_GROWTH: f64 = 10.0;

/// Result of [`solve_step_primal`].
#[derive(Clone, Debug, PartialEq)]
pub struct StepSolution {
    pub w_star: Vec<f64>,
    /// Hinge-form objective evaluated at `w_star`.
    pub objective: f64,
    /// Total Newton iterations across all centring steps.
    pub newton_steps: usize,
}

fn check_inputs(w: &[f64], w_prev: &[f64], sample: &Sample, cost: f64, alpha: f64) -> Result<()> {
    let d = sample.dimension();
    for len in [w.len(), w_prev.len()] {
        if len != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: len,
            });
        }
    }
    if !(cost > 0.0 && cost.is_finite() && alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "cost and alpha must be finite and > 0 (cost {cost}, alpha {alpha})"
        )));
    }
    Ok(())
}

/// `½‖w − w_prev‖² + α·C·max(0, 1 − y(f0 + wᵀx))`.
pub fn objective_value(
    w: &[f64],
    w_prev: &[f64],
    sample: &Sample,
    f0_val: f64,
    cost: f64,
    alpha: f64,
) -> Result<f64> {
    check_inputs(w, w_prev, sample, cost, alpha)?;
    let proximity: f64 = w
        .iter()
        .zip(w_prev)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        * 0.5;
    let score = f0_val + sample.features.dot(w)?;
    let hinge = (1.0 - sample.label.sign() * score).max(0.0);
    Ok(proximity + alpha * cost * hinge)
}

/// In-place Cholesky solve of `h·x = b` for symmetric positive definite
/// `h` (row-major, `n × n`). Returns `None` if `h` is not numerically PD.
fn cholesky_solve(h: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    for j in 0..n {
        let mut diag = h[j * n + j];
        for k in 0..j {
            diag -= h[j * n + k] * h[j * n + k];
        }
        if diag.is_nan() || diag <= 0.0 {
            return None;
        }
        let diag = diag.sqrt();
        h[j * n + j] = diag;
        for i in (j + 1)..n {
            let mut v = h[i * n + j];
            for k in 0..j {
                v -= h[i * n + k] * h[j * n + k];
            }
            h[i * n + j] = v / diag;
        }
    }
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= h[i * n + k] * b[k];
        }
        b[i] = v / h[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in (i + 1)..n {
            v -= h[k * n + i] * b[k];
        }
        b[i] = v / h[i * n + i];
    }
    Some(())
}

struct Barrier<'a> {
    w_prev: &'a [f64],
    /// Constraint row: `c0 + aᵀw − ξ ≤ 0` with `a = −y·x`, `c0 = 1 − y·f0`.
    a: Vec<f64>,
    c0: f64,
    penalty: f64,
}

impl Barrier<'_> {
    fn slacks(&self, z: &[f64]) -> (f64, f64) {
        let d = self.a.len();
        let aw: f64 = self.a.iter().zip(&z[..d]).map(|(a, w)| a * w).sum();
        let xi = z[d];
        (xi - self.c0 - aw, xi)
    }

    fn value(&self, z: &[f64], t: f64) -> f64 {
        let (s1, s2) = self.slacks(z);
        if !(s1 > 0.0 && s2 > 0.0) {
            return f64::INFINITY;
        }
        let d = self.a.len();
        let prox: f64 = z[..d]
            .iter()
            .zip(self.w_prev)
            .map(|(w, p)| (w - p) * (w - p))
            .sum::<f64>()
            * 0.5;
        t * (prox + self.penalty * z[d]) - s1.ln() - s2.ln()
    }

    fn gradient_hessian(&self, z: &[f64], t: f64, g: &mut [f64], h: &mut [f64]) {
        let d = self.a.len();
        let n = d + 1;
        let (s1, s2) = self.slacks(z);
        let inv1 = 1.0 / s1;
        let inv1sq = inv1 * inv1;
        for i in 0..d {
            g[i] = t * (z[i] - self.w_prev[i]) + self.a[i] * inv1;
        }
        g[d] = t * self.penalty - inv1 - 1.0 / s2;
        for i in 0..d {
            for j in 0..d {
                h[i * n + j] = self.a[i] * self.a[j] * inv1sq;
            }
            h[i * n + i] += t;
            h[i * n + d] = -self.a[i] * inv1sq;
            h[d * n + i] = -self.a[i] * inv1sq;
        }
        h[d * n + d] = inv1sq + 1.0 / (s2 * s2);
    }
}

/// Minimises the single-step objective from `w_prev` for one sample.
///
/// `f0_val` is the base score of the sample and `cost` its
/// misclassification cost. Fails on a zero feature vector.
pub fn solve_step_primal(
    w_prev: &[f64],
    sample: &Sample,
    f0_val: f64,
    cost: f64,
    alpha: f64,
) -> Result<StepSolution> {
    check_inputs(w_prev, w_prev, sample, cost, alpha)?;
    if !f0_val.is_finite() {
        return Err(Error::NonFinite(format!("base score {f0_val}")));
    }
    if sample.features.norm_sq() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let d = sample.dimension();
    let n = d + 1;
    let y = sample.label.sign();
    let x = sample.features.to_dense_vec();
    let barrier = Barrier {
        w_prev,
        a: x.iter().map(|v| -y * v).collect(),
        c0: 1.0 - y * f0_val,
        penalty: alpha * cost,
    };

    let mut z: Vec<f64> = w_prev.to_vec();
    let violation = barrier.c0 + barrier.a.iter().zip(w_prev).map(|(a, w)| a * w).sum::<f64>();
    z.push(violation.max(0.0) + 1.0);

    let mut g = vec![0.0; n];
    let mut h = vec![0.0; n * n];
    let mut step = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut newton_steps = 0;
    let mut t = 1.0;
    loop {
        for _ in 0..MAX_NEWTON_STEPS {
            barrier.gradient_hessian(&z, t, &mut g, &mut h);
            for (s, gi) in step.iter_mut().zip(&g) {
                *s = -gi;
            }
            if cholesky_solve(&mut h, &mut step, n).is_none() {
                return Err(Error::NonFinite("barrier Hessian lost definiteness".into()));
            }
            newton_steps += 1;
            let decrement: f64 = -g.iter().zip(&step).map(|(a, b)| a * b).sum::<f64>();
            if decrement * 0.5 <= 1e-14 {
                break;
            }
            let current = barrier.value(&z, t);
            let mut s = 1.0;
            let mut accepted = false;
            while s > 1e-30 {
                for i in 0..n {
                    trial[i] = z[i] + s * step[i];
                }
                if barrier.value(&trial, t) <= current - 0.25 * s * decrement {
                    accepted = true;
                    break;
                }
                s *= 0.5;
            }
            if !accepted {
                // round-off floor: no representable descent left
                break;
            }
            z.copy_from_slice(&trial);
        }
        if 2.0 / t <= GAP_TOLERANCE {
            break;
        }
        t *= BARRIER_GROWTH;
    }

    z.truncate(d);
    let objective = objective_value(&z, w_prev, sample, f0_val, cost, alpha)?;
    Ok(StepSolution {
        w_star: z,
        objective,
        newton_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Label;
    use crate::vector::FeatureVector;

    fn sample(x: &[f64], label: Label) -> Sample {
        Sample::new(FeatureVector::dense(x.to_vec()).unwrap(), label)
    }

    #[test]
    fn passive_optimum_stays_put() {
        let s = sample(&[1.0, 0.5], Label::Positive);
        let w_prev = [0.2, -0.1];
        // y f = 2 + 0.15 ≥ 1
        let sol = solve_step_primal(&w_prev, &s, 2.0, 3.0, 1.0).unwrap();
        for (a, b) in sol.w_star.iter().zip(&w_prev) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!(sol.objective < 1e-9);
    }

    #[test]
    fn unit_step_objective_half() {
        let s = sample(&[1.0, 0.0], Label::Positive);
        let sol = solve_step_primal(&[0.0, 0.0], &s, 0.0, 5.0, 1.0).unwrap();
        assert!((sol.w_star[0] - 1.0).abs() < 1e-8);
        assert!(sol.w_star[1].abs() < 1e-8);
        assert!((sol.objective - 0.5).abs() < 1e-8);
    }

    #[test]
    fn clamped_step_objective() {
        // optimum: w = (0.2, 0); ½·0.04 + 2·(1 − 0.02) = 1.98
        let s = sample(&[0.1, 0.0], Label::Positive);
        let sol = solve_step_primal(&[0.0, 0.0], &s, 0.0, 2.0, 1.0).unwrap();
        assert!((sol.objective - 1.98).abs() < 1e-6);
        assert!((sol.w_star[0] - 0.2).abs() < 1e-6);
    }

    #[test]
    fn objective_hand_values() {
        let s = sample(&[1.0, 2.0], Label::Negative);
        let w = [0.5, 0.5];
        // satisfied: y f = -(−5 + 1.5) = 3.5
        assert_eq!(objective_value(&w, &w, &s, -5.0, 2.0, 3.0).unwrap(), 0.0);
        // violated: margin term 1 + 1.5 = 2.5 → α C m = 15
        assert_eq!(objective_value(&w, &w, &s, 0.0, 2.0, 3.0).unwrap(), 15.0);
        let w2 = [1.0, -1.0];
        // prox ½(0.25 + 2.25) = 1.25; f = -1 → hinge 0
        assert_eq!(objective_value(&w2, &w, &s, 0.0, 2.0, 3.0).unwrap(), 1.25);
    }

    #[test]
    fn errors() {
        let zero = sample(&[0.0, 0.0], Label::Positive);
        assert!(matches!(
            solve_step_primal(&[0.0, 0.0], &zero, 0.0, 1.0, 1.0),
            Err(Error::ZeroVector)
        ));
        let s = sample(&[1.0, 0.0], Label::Positive);
        assert!(objective_value(&[0.0], &[0.0, 0.0], &s, 0.0, 1.0, 1.0).is_err());
        assert!(solve_step_primal(&[0.0, 0.0], &s, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn cholesky_small_system() {
        let mut h = vec![4.0, 2.0, 2.0, 3.0];
        let mut b = vec![2.0, 1.0];
        cholesky_solve(&mut h, &mut b, 2).unwrap();
        assert!((b[0] - 0.5).abs() < 1e-15);
        assert!(b[1].abs() < 1e-15);
    }
}
