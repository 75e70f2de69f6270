mod common;

use ocsca::baselines::{fit_batch_cost_svm, make_pa_baseline, BatchSvmConfig};
use ocsca::data::{generate_synthetic, SynthSpec};
use ocsca::oracle::{objective_value, solve_step_primal};
use ocsca::{
    AdaptedClassifier, BaseScorer, CostSchedule, FeatureVector, Hyperparams, Label,
    LinearAdaptation, LinearScorer, OcscaLearner, Sample, StepCase,
};
use proptest::prelude::*;

use common::PaOne;

/// A learner in an arbitrary state plus one sample to process.
#[derive(Clone, Debug)]
struct Instance {
    base: Option<(Vec<f64>, f64)>,
    w: Vec<f64>,
    x: Vec<f64>,
    label: Label,
    cost_positive: f64,
    cost_negative: f64,
    alpha: f64,
}

impl Instance {
    fn learner(&self) -> OcscaLearner {
        let d = self.x.len();
        let base = match &self.base {
            None => BaseScorer::Zero,
            Some((w0, b)) => BaseScorer::Linear(LinearScorer::new(w0.clone(), Some(*b)).unwrap()),
        };
        let adaptation = LinearAdaptation::from_parts(self.w.clone(), d, false, 0).unwrap();
        OcscaLearner::from_classifier(
            AdaptedClassifier::new(base, adaptation).unwrap(),
            CostSchedule::new(self.cost_positive, self.cost_negative).unwrap(),
            Hyperparams::new(self.alpha).unwrap(),
        )
        .unwrap()
    }

    fn sample(&self) -> Sample {
        Sample::new(FeatureVector::dense(self.x.clone()).unwrap(), self.label)
    }
}

fn label() -> impl Strategy<Value = Label> {
    prop_oneof![Just(Label::Positive), Just(Label::Negative)]
}

fn nonzero_vec(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, d).prop_filter("non-zero", |x| x.iter().any(|v| *v != 0.0))
}

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..=10).prop_flat_map(|d| {
        (
            prop::option::of((prop::collection::vec(-2.0f64..2.0, d), -1.0f64..1.0)),
            prop::collection::vec(-2.0f64..2.0, d),
            nonzero_vec(d),
            label(),
            1.0f64..10.0,
            1.0f64..10.0,
            prop_oneof![Just(0.1), Just(1.0), Just(10.0), 0.01f64..20.0],
        )
            .prop_map(|(base, w, x, label, cp, cn, alpha)| Instance {
                base,
                w,
                x,
                label,
                cost_positive: cp,
                cost_negative: cn,
                alpha,
            })
    })
}

fn stream(d: usize, n: usize) -> impl Strategy<Value = Vec<(Vec<f64>, Label)>> {
    prop::collection::vec((nonzero_vec(d), label()), n)
}

fn samples(raw: &[(Vec<f64>, Label)]) -> Vec<Sample> {
    raw.iter()
        .map(|(x, y)| Sample::new(FeatureVector::dense(x.clone()).unwrap(), *y))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn tau_within_bounds_and_loss_never_grows(inst in instance()) {
        let mut l = inst.learner();
        let o = l.process_sample(&inst.sample()).unwrap();
        prop_assert!(o.tau >= 0.0 && o.tau <= inst.alpha * o.cost);
        prop_assert!(o.loss_after <= o.loss_before);
        prop_assert_eq!(o.loss_before, o.margin_term.max(0.0));
        if o.case == StepCase::Passive {
            prop_assert_eq!(o.tau, 0.0);
        }
    }

    #[test]
    fn passive_steps_leave_weights_bitwise_unchanged(inst in instance()) {
        let mut l = inst.learner();
        let before: Vec<u64> = l.weights().iter().map(|w| w.to_bits()).collect();
        let o = l.process_sample(&inst.sample()).unwrap();
        if o.margin_term <= 0.0 {
            prop_assert_eq!(o.case, StepCase::Passive);
            let after: Vec<u64> = l.weights().iter().map(|w| w.to_bits()).collect();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn interior_steps_close_the_gap(inst in instance()) {
        let mut l = inst.learner();
        let s = inst.sample();
        let o = l.process_sample(&s).unwrap();
        if o.case == StepCase::Interior {
            let score = l.classifier().score_sample(&s).unwrap();
            prop_assert!((1.0 - s.label.sign() * score).abs() <= 1e-9);
        }
    }

    #[test]
    fn clamped_steps_reduce_loss_by_tau_norm(inst in instance()) {
        let mut l = inst.learner();
        let s = inst.sample();
        let o = l.process_sample(&s).unwrap();
        if o.case == StepCase::Clamped {
            let expected = o.loss_before - o.tau * s.features.norm_sq();
            prop_assert!((o.loss_after - expected).abs() <= 1e-12, "{} vs {}", o.loss_after, expected);
            prop_assert!(o.loss_after > 0.0);
        }
    }

    #[test]
    fn tau_is_monotone_in_cost(inst in instance(), c1 in 1.0f64..10.0, c2 in 1.0f64..10.0) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let tau_at = |c: f64| {
            let mut i = inst.clone();
            i.cost_positive = c;
            i.cost_negative = c;
            i.learner().process_sample(&i.sample()).unwrap().tau
        };
        prop_assert!(tau_at(lo) <= tau_at(hi));
    }

    #[test]
    fn update_is_rank_one_along_yx(inst in instance()) {
        let mut l = inst.learner();
        let s = inst.sample();
        let o = l.process_sample(&s).unwrap();
        for i in 0..inst.x.len() {
            let delta = l.weights()[i] - inst.w[i];
            let expected = o.tau * s.label.sign() * inst.x[i];
            prop_assert!((delta - expected).abs() <= 1e-12 * (1.0 + inst.w[i].abs()));
        }
    }

    #[test]
    fn closed_form_matches_oracle(inst in instance()) {
        let mut l = inst.learner();
        let s = inst.sample();
        let f0 = l.classifier().base.score_sample(&s).unwrap();
        let cost = l.schedule().cost_for(s.label);
        l.process_sample(&s).unwrap();
        let cf = objective_value(l.weights(), &inst.w, &s, f0, cost, inst.alpha).unwrap();
        let oracle = solve_step_primal(&inst.w, &s, f0, cost, inst.alpha).unwrap();
        prop_assert!(cf <= oracle.objective + 1e-6, "closed form {} oracle {}", cf, oracle.objective);
        prop_assert!((cf - oracle.objective).abs() <= 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representer_form(raw in (1usize..=8).prop_flat_map(|d| stream(d, 200)), cp in 1.0f64..10.0, alpha in 0.05f64..5.0) {
        let data = samples(&raw);
        let dim = data[0].dimension();
        let mut l = OcscaLearner::new(
            BaseScorer::Zero,
            dim,
            CostSchedule::new(cp, 1.0).unwrap(),
            Hyperparams::new(alpha).unwrap(),
        ).unwrap().with_trace(true);
        l.run_stream(&data).unwrap();
        let mut sum = vec![0.0; dim];
        for (s, o) in data.iter().zip(l.trace().unwrap()) {
            for (i, v) in s.features.to_dense_vec().iter().enumerate() {
                sum[i] += o.tau * s.label.sign() * v;
            }
        }
        for (a, b) in sum.iter().zip(l.weights()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn uniform_costs_with_zero_base_is_pa_one(raw in (1usize..=10).prop_flat_map(|d| stream(d, 300)), alpha in 0.01f64..10.0) {
        let data = samples(&raw);
        let dim = data[0].dimension();
        let mut l = make_pa_baseline(dim, alpha, CostSchedule::uniform()).unwrap();
        let mut pa = PaOne::new(dim, alpha);
        for s in &data {
            l.process_sample(s).unwrap();
            pa.update(&s.features.to_dense_vec(), s.label.sign());
            for (a, b) in l.weights().iter().zip(&pa.w) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn trace_length_matches_steps(raw in (1usize..=5).prop_flat_map(|d| stream(d, 50))) {
        let data = samples(&raw);
        let mut l = make_pa_baseline(data[0].dimension(), 1.0, CostSchedule::new(5.0, 1.0).unwrap()).unwrap();
        let summary = l.run_stream(&data).unwrap();
        prop_assert_eq!(l.trace().unwrap().len(), data.len());
        prop_assert_eq!(summary.passive + summary.interior + summary.clamped + summary.skipped, data.len());
    }

    #[test]
    fn sparse_and_dense_learners_agree(raw in (1usize..=10).prop_flat_map(|d| stream(d, 100))) {
        let dense = samples(&raw);
        let sparse: Vec<Sample> = dense
            .iter()
            .map(|s| Sample::new(s.features.sparsified(), s.label))
            .collect();
        let sched = CostSchedule::new(3.0, 1.0).unwrap();
        let mut a = make_pa_baseline(dense[0].dimension(), 0.5, sched).unwrap();
        let mut b = make_pa_baseline(dense[0].dimension(), 0.5, sched).unwrap();
        a.run_stream(&dense).unwrap();
        b.run_stream(&sparse).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn batch_objective_non_increasing_with_small_steps(seed in 0u64..1000, d in 1usize..6, cp in 1.0f64..8.0, reg in prop_oneof![Just(0.0), Just(1e-3)]) {
        let spec = SynthSpec {
            n_positive: 40,
            n_negative: 60,
            dimension: d,
            mean_separation: 2.0,
            noise_scale: 1.0,
            seed,
        };
        let ds = generate_synthetic(&spec).unwrap();
        let sched = CostSchedule::new(cp, 1.0).unwrap();
        let bound = ds
            .samples()
            .iter()
            .map(|s| sched.cost_for(s.label) * s.features.norm_sq())
            .fold(0.0, f64::max);
        let cfg = BatchSvmConfig {
            epochs: 50,
            // per-sample steps: larger fractions of the bound oscillate near the optimum
            step_size: 0.01 / bound,
            regularization: reg,
            shuffle_seed: seed,
            fit_intercept: false,
        };
        let fit = fit_batch_cost_svm(ds.samples(), &sched, &cfg).unwrap();
        for pair in fit.epoch_objectives.windows(2) {
            prop_assert!(pair[1] <= pair[0] + 1e-12, "objective rose {} -> {}", pair[0], pair[1]);
        }
    }
}
