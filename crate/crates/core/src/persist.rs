//! Model files and atomic writes.
//!
//! A model is a versioned, line-oriented `key = value` document. Real
//! values are written with 17 significant digits so a save/load cycle is
//! lossless; vectors are space-separated on one line.
//!
//! ```text
//! # ocsca model
//! format_version = 1
//! dimension = 2
//! augment_bias = false
//! skip_zero_vectors = true
//! base_kind = linear
//! base_weights = 5.0000000000000000e-1 -2.5000000000000000e-1
//! base_intercept = none
//! adaptation_weights = 0.0000000000000000e0 1.0000000000000000e0
//! cost_positive = 5.0000000000000000e0
//! cost_negative = 1.0000000000000000e0
//! alpha = 1.0000000000000000e0
//! updates_applied = 12
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::learner::OcscaLearner;
use crate::scorer::{AdaptedClassifier, BaseScorer, LinearAdaptation, LinearScorer};
use crate::types::{CostSchedule, Hyperparams};

pub const FORMAT_VERSION: u32 = 1;

const KEYS: &[&str] = &[
    "format_version",
    "dimension",
    "augment_bias",
    "skip_zero_vectors",
    "base_kind",
    "base_weights",
    "base_intercept",
    "adaptation_weights",
    "cost_positive",
    "cost_negative",
    "alpha",
    "updates_applied",
];

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place. On failure nothing is left at `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Everything needed to resume or evaluate a learner.
#[derive(Clone, Debug, PartialEq)]
pub struct SavedModel {
    pub classifier: AdaptedClassifier,
    pub schedule: CostSchedule,
    pub params: Hyperparams,
}

impl SavedModel {
    pub fn from_learner(learner: &OcscaLearner) -> Self {
        SavedModel {
            classifier: learner.classifier().clone(),
            schedule: *learner.schedule(),
            params: *learner.params(),
        }
    }

    pub fn into_learner(self) -> Result<OcscaLearner> {
        OcscaLearner::from_classifier(self.classifier, self.schedule, self.params)
    }
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn reals(values: &[f64]) -> String {
    values.iter().map(|v| real(*v)).collect::<Vec<_>>().join(" ")
}

pub fn format_model(model: &SavedModel) -> String {
    let c = &model.classifier;
    let mut out = String::from("# ocsca model\n");
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("format_version", FORMAT_VERSION.to_string());
    kv("dimension", c.dimension().to_string());
    kv("augment_bias", c.adaptation.has_bias().to_string());
    kv("skip_zero_vectors", model.params.skip_zero_vectors.to_string());
    kv("base_kind", c.base.kind().to_string());
    if let BaseScorer::Linear(l) = &c.base {
        kv("base_weights", reals(l.weights()));
        kv(
            "base_intercept",
            l.intercept().map(real).unwrap_or_else(|| "none".into()),
        );
    }
    kv("adaptation_weights", reals(c.adaptation.weights()));
    kv("cost_positive", real(model.schedule.cost_positive()));
    kv("cost_negative", real(model.schedule.cost_negative()));
    kv("alpha", real(model.params.alpha()));
    kv("updates_applied", c.adaptation.updates_applied().to_string());
    out
}

pub fn parse_model(text: &str) -> Result<SavedModel> {
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Model(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::Model(format!("line {}: unknown key {k:?}", i + 1)));
        }
        if fields.insert(k, v.trim()).is_some() {
            return Err(Error::Model(format!("line {}: duplicate key {k:?}", i + 1)));
        }
    }
    let get = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| Error::Model(format!("missing key {k:?}")))
    };
    let parse_num = |k: &str| -> Result<f64> {
        get(k)?
            .parse()
            .map_err(|_| Error::Model(format!("{k}: bad number")))
    };
    let parse_bool = |k: &str| -> Result<bool> {
        get(k)?
            .parse()
            .map_err(|_| Error::Model(format!("{k}: expected true or false")))
    };
    let parse_vec = |k: &str| -> Result<Vec<f64>> {
        get(k)?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Model(format!("{k}: bad number {t:?}"))))
            .collect()
    };

    let version: u32 = get("format_version")?
        .parse()
        .map_err(|_| Error::Model("format_version: bad integer".into()))?;
    if version != FORMAT_VERSION {
        return Err(Error::Model(format!(
            "unsupported format_version {version} (expected {FORMAT_VERSION})"
        )));
    }
    let dimension: usize = get("dimension")?
        .parse()
        .map_err(|_| Error::Model("dimension: bad integer".into()))?;
    let bias = parse_bool("augment_bias")?;
    let skip = parse_bool("skip_zero_vectors")?;
    let base = match get("base_kind")? {
        "zero" => BaseScorer::Zero,
        "precomputed" => BaseScorer::Precomputed,
        "linear" => {
            let intercept = match get("base_intercept")? {
                "none" => None,
                v => Some(
                    v.parse()
                        .map_err(|_| Error::Model("base_intercept: bad number".into()))?,
                ),
            };
            BaseScorer::Linear(LinearScorer::new(parse_vec("base_weights")?, intercept)?)
        }
        other => return Err(Error::Model(format!("unknown base_kind {other:?}"))),
    };
    if !matches!(base, BaseScorer::Linear(_))
        && (fields.contains_key("base_weights") || fields.contains_key("base_intercept"))
    {
        return Err(Error::Model("base weights given for a non-linear base".into()));
    }
    let updates: u64 = get("updates_applied")?
        .parse()
        .map_err(|_| Error::Model("updates_applied: bad integer".into()))?;
    let adaptation =
        LinearAdaptation::from_parts(parse_vec("adaptation_weights")?, dimension, bias, updates)?;
    let classifier = AdaptedClassifier::new(base, adaptation)?;
    let schedule = CostSchedule::new(parse_num("cost_positive")?, parse_num("cost_negative")?)?;
    let params = Hyperparams::new(parse_num("alpha")?)?
        .with_bias(bias)
        .with_skip_zero_vectors(skip);
    Ok(SavedModel {
        classifier,
        schedule,
        params,
    })
}

pub fn save_model(model: &SavedModel, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), format_model(model).as_bytes())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<SavedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text)
}
