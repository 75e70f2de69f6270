//! Benchmark configuration files.
//!
//! TOML with four sections; every key is optional except where noted.
//!
//! ```toml
//! [bench]
//! name = "face-like"
//! seed = 42
//! old_schedule = "2:1"          # required
//! new_schedule = "5:1"          # required
//! alpha_grid = [0.01, 0.1, 1, 10, 100]
//! augment_bias = false
//! threads = 4
//!
//! [data]                        # required; or `manifest = "data.toml"`
//! kind = "synthetic"            # synthetic | libsvm | csv
//! n_positive = 400
//! n_negative = 1600
//! dimension = 2
//! mean_separation = 1.5
//! noise_scale = 1.0
//! seed = 7
//!
//! [base]
//! trainer = "batch"             # batch | online
//! alpha = 1.0                   # online only
//! epochs = 50                   # batch only, as in [batch_svm]
//!
//! [batch_svm]
//! epochs = 50
//! step_size = 0.01
//! regularization = 0.001
//! shuffle_seed = 0
//! ```
//!
//! File-backed data uses `path` (relative to the config file), plus
//! `dimension` / `strict` for LIBSVM or `label_column` / `header` /
//! `base_score_column` for CSV.

use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::baselines::BatchSvmConfig;
use crate::data::{CsvOptions, DataFormat, DataSource, LibsvmOptions, SynthSpec};
use crate::error::{Error, Result};
use crate::eval::{BaseTrainer, FoldPlan, ProtocolConfig, DEFAULT_ALPHA_GRID};
use crate::types::CostSchedule;

const BENCH_KEYS: &[&str] = &[
    "name",
    "seed",
    "old_schedule",
    "new_schedule",
    "alpha_grid",
    "augment_bias",
    "threads",
];
const DATA_KEYS: &[&str] = &[
    "manifest",
    "kind",
    "name",
    "path",
    "dimension",
    "strict",
    "label_column",
    "header",
    "base_score_column",
    "n_positive",
    "n_negative",
    "mean_separation",
    "noise_scale",
    "seed",
];
const SVM_KEYS: &[&str] = &["epochs", "step_size", "regularization", "shuffle_seed"];
const BASE_KEYS: &[&str] = &[
    "trainer",
    "alpha",
    "epochs",
    "step_size",
    "regularization",
    "shuffle_seed",
];
const FOLD_KEYS: &[&str] = &["n_folds", "base_folds", "stream_folds", "test_folds"];

/// A parsed benchmark run.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub name: String,
    pub data: DataSource,
    pub protocol: ProtocolConfig,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn unknown_keys(table: &Table, section: &str, allowed: &[&str], out: &mut Vec<String>) {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            out.push(if section.is_empty() {
                key.clone()
            } else {
                format!("{section}.{key}")
            });
        }
    }
}

struct Section<'a> {
    name: &'a str,
    table: Option<&'a Table>,
}

impl<'a> Section<'a> {
    fn get(&self, key: &str) -> Option<&'a Value> {
        self.table.and_then(|t| t.get(key))
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Float(f)) => Ok(Some(*f)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(cfg_err(format!("{}.{key} must be a number", self.name))),
        }
    }

    fn uint(&self, key: &str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(cfg_err(format!(
                "{}.{key} must be a non-negative integer",
                self.name
            ))),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.uint(key).map(|v| v.map(|v| v as usize))
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => Err(cfg_err(format!("{}.{key} must be true or false", self.name))),
        }
    }

    fn string(&self, key: &str) -> Result<Option<&'a str>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.as_str())),
            Some(_) => Err(cfg_err(format!("{}.{key} must be a string", self.name))),
        }
    }

    fn schedule(&self, key: &str) -> Result<Option<CostSchedule>> {
        self.string(key)?
            .map(|s| s.parse().map_err(|e| cfg_err(format!("{}.{key}: {e}", self.name))))
            .transpose()
    }
}

fn batch_svm(section: &Section<'_>, defaults: BatchSvmConfig) -> Result<BatchSvmConfig> {
    let cfg = BatchSvmConfig {
        epochs: section.usize("epochs")?.unwrap_or(defaults.epochs),
        step_size: section.real("step_size")?.unwrap_or(defaults.step_size),
        regularization: section.real("regularization")?.unwrap_or(defaults.regularization),
        shuffle_seed: section.uint("shuffle_seed")?.unwrap_or(defaults.shuffle_seed),
        fit_intercept: defaults.fit_intercept,
    };
    cfg.validate()
        .map_err(|e| cfg_err(format!("[{}] {e}", section.name)))?;
    Ok(cfg)
}

fn data_source(table: &Table, base_dir: &Path, unknown: &mut Vec<String>) -> Result<DataSource> {
    if let Some(manifest) = table.get("manifest") {
        let rel = manifest
            .as_str()
            .ok_or_else(|| cfg_err("data.manifest must be a string"))?;
        if table.len() > 1 {
            return Err(cfg_err("data.manifest cannot be combined with other data keys"));
        }
        let path = base_dir.join(rel);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let inner: Table = toml::from_str(&text)
            .map_err(|e: toml::de::Error| cfg_err(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        let mut inner_unknown = Vec::new();
        unknown_keys(&inner, "manifest", DATA_KEYS, &mut inner_unknown);
        inner_unknown.retain(|k| k != "manifest.manifest");
        unknown.extend(inner_unknown);
        return data_source(&inner, &dir, unknown);
    }
    let s = Section {
        name: "data",
        table: Some(table),
    };
    let kind = s
        .string("kind")?
        .ok_or_else(|| cfg_err("data.kind is required (synthetic, libsvm or csv)"))?;
    let path = || -> Result<PathBuf> {
        s.string("path")?
            .map(|p| base_dir.join(p))
            .ok_or_else(|| cfg_err(format!("data.path is required for kind {kind:?}")))
    };
    match kind {
        "synthetic" => {
            let spec = SynthSpec {
                n_positive: s.usize("n_positive")?.unwrap_or(100),
                n_negative: s.usize("n_negative")?.unwrap_or(100),
                dimension: s.usize("dimension")?.unwrap_or(2),
                mean_separation: s.real("mean_separation")?.unwrap_or(2.0),
                noise_scale: s.real("noise_scale")?.unwrap_or(1.0),
                seed: s.uint("seed")?.unwrap_or(0),
            };
            spec.validate().map_err(|e| cfg_err(format!("[data] {e}")))?;
            Ok(DataSource::Synthetic(spec))
        }
        "libsvm" => Ok(DataSource::File {
            path: path()?,
            format: DataFormat::Libsvm,
            libsvm: LibsvmOptions {
                dimension: s.usize("dimension")?,
                strict: s.boolean("strict")?.unwrap_or(false),
            },
            csv: CsvOptions::default(),
        }),
        "csv" => Ok(DataSource::File {
            path: path()?,
            format: DataFormat::Csv,
            libsvm: LibsvmOptions::default(),
            csv: CsvOptions {
                label_column: s.usize("label_column")?.unwrap_or(0),
                has_header: s.boolean("header")?.unwrap_or(false),
                base_score_column: s.usize("base_score_column")?,
            },
        }),
        other => Err(cfg_err(format!("unknown data.kind {other:?}"))),
    }
}

impl BenchConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, dir)
    }

    /// Parses config text; relative data paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let root: Table = toml::from_str(text).map_err(|e: toml::de::Error| cfg_err(e.to_string()))?;
        let mut unknown = Vec::new();
        unknown_keys(&root, "", &["bench", "data", "base", "batch_svm", "folds"], &mut unknown);
        let table = |name: &str| -> Result<Option<&Table>> {
            match root.get(name) {
                None => Ok(None),
                Some(Value::Table(t)) => Ok(Some(t)),
                Some(_) => Err(cfg_err(format!("[{name}] must be a section"))),
            }
        };
        let bench_t = table("bench")?;
        let data_t = table("data")?;
        let base_t = table("base")?;
        let svm_t = table("batch_svm")?;
        let folds_t = table("folds")?;
        for (t, name, keys) in [
            (bench_t, "bench", BENCH_KEYS),
            (data_t, "data", DATA_KEYS),
            (base_t, "base", BASE_KEYS),
            (svm_t, "batch_svm", SVM_KEYS),
            (folds_t, "folds", FOLD_KEYS),
        ] {
            if let Some(t) = t {
                unknown_keys(t, name, keys, &mut unknown);
            }
        }
        let data_t = data_t.ok_or_else(|| cfg_err("missing [data] section"))?;
        let data = data_source(data_t, base_dir, &mut unknown)?;
        if !unknown.is_empty() {
            return Err(cfg_err(format!("unknown keys: {}", unknown.join(", "))));
        }

        let bench = Section {
            name: "bench",
            table: bench_t,
        };
        let old = bench
            .schedule("old_schedule")?
            .ok_or_else(|| cfg_err("bench.old_schedule is required"))?;
        let new = bench
            .schedule("new_schedule")?
            .ok_or_else(|| cfg_err("bench.new_schedule is required"))?;
        let mut protocol = ProtocolConfig::new(old, new);
        protocol.alpha_grid = match bench.get("alpha_grid") {
            None => DEFAULT_ALPHA_GRID.to_vec(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::Float(f) => Ok(*f),
                    Value::Integer(i) => Ok(*i as f64),
                    _ => Err(cfg_err("bench.alpha_grid must hold numbers")),
                })
                .collect::<Result<_>>()?,
            Some(_) => return Err(cfg_err("bench.alpha_grid must be an array")),
        };
        protocol.augment_bias = bench.boolean("augment_bias")?.unwrap_or(false);
        protocol.threads = bench.usize("threads")?;

        let folds = Section {
            name: "folds",
            table: folds_t,
        };
        let default_plan = FoldPlan::default();
        protocol.plan = FoldPlan {
            n_folds: folds.usize("n_folds")?.unwrap_or(default_plan.n_folds),
            base_folds: folds.usize("base_folds")?.unwrap_or(default_plan.base_folds),
            stream_folds: folds.usize("stream_folds")?.unwrap_or(default_plan.stream_folds),
            test_folds: folds.usize("test_folds")?.unwrap_or(default_plan.test_folds),
            seed: bench.uint("seed")?.unwrap_or(0),
        };

        protocol.batch_svm = batch_svm(
            &Section {
                name: "batch_svm",
                table: svm_t,
            },
            BatchSvmConfig::default(),
        )?;
        let base = Section {
            name: "base",
            table: base_t,
        };
        protocol.base_trainer = match base.string("trainer")?.unwrap_or("batch") {
            "online" => BaseTrainer::Online {
                alpha: base.real("alpha")?.unwrap_or(1.0),
            },
            "batch" => BaseTrainer::Batch(batch_svm(&base, protocol.batch_svm.clone())?),
            other => return Err(cfg_err(format!("unknown base.trainer {other:?}"))),
        };
        protocol
            .validate()
            .map_err(|e| cfg_err(e.to_string()))?;

        Ok(BenchConfig {
            name: bench.string("name")?.unwrap_or("bench").to_string(),
            data,
            protocol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[bench]
old_schedule = "2:1"
new_schedule = "5:1"
[data]
kind = "synthetic"
n_positive = 10
"#;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = BenchConfig::parse(MINIMAL, Path::new(".")).unwrap();
        assert_eq!(c.protocol.alpha_grid, DEFAULT_ALPHA_GRID.to_vec());
        assert_eq!(c.protocol.plan, FoldPlan::default());
        assert!(matches!(c.protocol.base_trainer, BaseTrainer::Batch(_)));
        match c.data {
            DataSource::Synthetic(s) => assert_eq!(s.n_positive, 10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_all_listed() {
        let text = format!("{MINIMAL}colour = 1\n[batch_svm]\nspeed = 2\n[extra]\n");
        match BenchConfig::parse(&text, Path::new(".")) {
            Err(Error::Config(msg)) => {
                assert!(msg.contains("data.colour"), "{msg}");
                assert!(msg.contains("batch_svm.speed"), "{msg}");
                assert!(msg.contains("extra"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn file_sources_resolve_relative_paths() {
        let text = r#"
[bench]
old_schedule = "3:1"
new_schedule = "8:1"
alpha_grid = [0.5, 2]
seed = 9
[base]
trainer = "online"
alpha = 0.25
[data]
kind = "csv"
path = "cars.csv"
label_column = 3
header = true
"#;
        let c = BenchConfig::parse(text, Path::new("/data")).unwrap();
        assert_eq!(c.protocol.plan.seed, 9);
        assert_eq!(c.protocol.alpha_grid, vec![0.5, 2.0]);
        assert_eq!(c.protocol.base_trainer, BaseTrainer::Online { alpha: 0.25 });
        match c.data {
            DataSource::File { path, format, csv, .. } => {
                assert_eq!(path, Path::new("/data/cars.csv"));
                assert_eq!(format, DataFormat::Csv);
                assert_eq!(csv.label_column, 3);
                assert!(csv.has_header);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn manifest_indirection() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("d.toml"),
            "kind = \"libsvm\"\npath = \"x.svm\"\ndimension = 12\n",
        )
        .unwrap();
        let text = "[bench]\nold_schedule = \"2:1\"\nnew_schedule = \"5:1\"\n[data]\nmanifest = \"d.toml\"\n";
        let c = BenchConfig::parse(text, dir.path()).unwrap();
        match c.data {
            DataSource::File { path, libsvm, .. } => {
                assert_eq!(path, dir.path().join("x.svm"));
                assert_eq!(libsvm.dimension, Some(12));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_values() {
        let bad_sched = MINIMAL.replace("\"5:1\"", "\"5\"");
        assert!(BenchConfig::parse(&bad_sched, Path::new(".")).is_err());
        let no_data = "[bench]\nold_schedule = \"2:1\"\nnew_schedule = \"5:1\"\n";
        assert!(BenchConfig::parse(no_data, Path::new(".")).is_err());
        let bad_folds = format!("{MINIMAL}[folds]\nbase_folds = 3\n");
        assert!(BenchConfig::parse(&bad_folds, Path::new(".")).is_err());
    }
}
