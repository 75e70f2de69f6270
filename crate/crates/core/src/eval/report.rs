use std::fmt::Write as _;

use super::protocol::{Method, ProtocolResult};

/// Long-format CSV, one row per fold × method × metric. Contains no
/// timings, so identical runs give byte-identical output.
pub fn report_csv(result: &ProtocolResult) -> String {
    let mut out = String::from("fold,method,metric,value\n");
    for fold in &result.folds {
        for m in &fold.methods {
            let c = &m.metrics.confusion;
            let mut row = |metric: &str, value: String| {
                let _ = writeln!(out, "{},{},{},{}", fold.repetition, m.method, metric, value);
            };
            row("accuracy", m.metrics.accuracy.to_string());
            row("avg_cost", m.metrics.avg_cost.to_string());
            row("n_test", m.metrics.n_test.to_string());
            row("tp", c.tp.to_string());
            row("fp", c.fp.to_string());
            row("tn", c.tn.to_string());
            row("fn", c.fn_.to_string());
            if let Some(a) = m.alpha {
                row("alpha", a.to_string());
            }
        }
    }
    out
}

/// `fold,method,learn_seconds`.
pub fn timing_csv(result: &ProtocolResult) -> String {
    let mut out = String::from("fold,method,learn_seconds\n");
    for fold in &result.folds {
        for m in &fold.methods {
            let _ = writeln!(out, "{},{},{:.9}", fold.repetition, m.method, m.learn_seconds);
        }
    }
    out
}

/// Mean and sample standard deviation of each metric over folds.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub accuracy: (f64, f64),
    pub avg_cost: (f64, f64),
    pub learn_seconds: (f64, f64),
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(result: &ProtocolResult) -> Vec<MethodSummary> {
    Method::ALL
        .iter()
        .filter_map(|&method| {
            let rows: Vec<_> = result.folds.iter().filter_map(|f| f.get(method)).collect();
            if rows.is_empty() {
                return None;
            }
            let col = |f: &dyn Fn(&super::protocol::MethodResult) -> f64| {
                mean_std(&rows.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            Some(MethodSummary {
                method,
                accuracy: col(&|r| r.metrics.accuracy),
                avg_cost: col(&|r| r.metrics.avg_cost),
                learn_seconds: col(&|r| r.learn_seconds),
            })
        })
        .collect()
}

/// Per-method `mean ± std` table.
pub fn summary_table(result: &ProtocolResult) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:>20} {:>20} {:>24}",
        "method", "accuracy", "avg_cost", "learn_seconds"
    );
    for s in summarize(result) {
        let _ = writeln!(
            out,
            "{:<20} {:>9.4} ± {:<8.4} {:>9.4} ± {:<8.4} {:>11.6} ± {:<10.6}",
            s.method.as_str(),
            s.accuracy.0,
            s.accuracy.1,
            s.avg_cost.0,
            s.avg_cost.1,
            s.learn_seconds.0,
            s.learn_seconds.1
        );
    }
    out
}

/// Human-readable report: run metadata, the summary table, and per-fold
/// average costs.
pub fn text_report(result: &ProtocolResult) -> String {
    let c = &result.config;
    let mut out = String::new();
    let _ = writeln!(out, "dataset: {} (n={}, d={})", result.dataset_name, result.dataset_size, result.dimension);
    let _ = writeln!(out, "old schedule: {}   new schedule: {}", c.old_schedule, c.new_schedule);
    let _ = writeln!(
        out,
        "folds: {} (base {}, stream {}, test {}), stratified, seed {}",
        c.plan.n_folds, c.plan.base_folds, c.plan.stream_folds, c.plan.test_folds, c.plan.seed
    );
    let _ = writeln!(out, "stream order: one seeded shuffle per fold");
    let _ = writeln!(
        out,
        "alpha grid: {:?} (selected on the last stream fold by new-schedule avg cost)",
        c.alpha_grid
    );
    let _ = writeln!(out, "base trainer: {:?}; bias augmentation: {}", c.base_trainer, c.augment_bias);
    let _ = writeln!(out);
    out.push_str(&summary_table(result));
    let _ = writeln!(out);
    let _ = write!(out, "{:<6}", "fold");
    for m in Method::ALL {
        let _ = write!(out, " {:>20}", m.as_str());
    }
    let _ = writeln!(out, "   (avg_cost)");
    for f in &result.folds {
        let _ = write!(out, "{:<6}", f.repetition);
        for m in Method::ALL {
            match f.get(m) {
                Some(r) => {
                    let _ = write!(out, " {:>20.4}", r.metrics.avg_cost);
                }
                None => {
                    let _ = write!(out, " {:>20}", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}
