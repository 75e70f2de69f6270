//! LIBSVM sparse text format: `<label> <index>:<value> ...`, 1-based
//! indices in ascending order. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::persist::write_atomic;
use crate::types::{Label, Sample};
use crate::vector::FeatureVector;

#[derive(Clone, Debug, Default)]
pub struct LibsvmOptions {
    /// Fixed dimension; defaults to the largest index in the file.
    pub dimension: Option<usize>,
    /// Reject files without any samples.
    pub strict: bool,
}

pub fn read_libsvm(path: impl AsRef<Path>, options: &LibsvmOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_libsvm(BufReader::new(file), &path.display().to_string(), &name, options)
}

pub fn parse_libsvm<R: BufRead>(
    reader: R,
    origin: &str,
    name: &str,
    options: &LibsvmOptions,
) -> Result<Dataset> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    let mut rows: Vec<(Label, Vec<(usize, f64)>, usize)> = Vec::new();
    let mut max_index = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label_token = tokens.next().unwrap_or_default();
        let label = Label::parse(label_token)
            .ok_or_else(|| err(lineno, format!("label {label_token:?} is not one of +1, -1, 0")))?;
        let mut entries = Vec::new();
        for token in tokens {
            let (idx, val) = token
                .split_once(':')
                .ok_or_else(|| err(lineno, format!("expected <index>:<value>, got {token:?}")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| err(lineno, format!("bad feature index {idx:?}")))?;
            if idx == 0 {
                return Err(err(lineno, "feature indices are 1-based; found 0".into()));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| err(lineno, format!("bad feature value {val:?}")))?;
            if !val.is_finite() {
                return Err(err(lineno, format!("non-finite feature value {val}")));
            }
            if let Some(&(prev, _)) = entries.last() {
                if idx - 1 <= prev {
                    return Err(err(lineno, "feature indices must be strictly increasing".into()));
                }
            }
            max_index = max_index.max(idx);
            entries.push((idx - 1, val));
        }
        rows.push((label, entries, lineno));
    }
    if rows.is_empty() && options.strict {
        return Err(err(0, "no samples found".into()));
    }
    let dimension = match options.dimension {
        Some(d) if d < max_index => {
            return Err(err(
                0,
                format!("feature index {max_index} exceeds declared dimension {d}"),
            ))
        }
        Some(d) => d,
        None => max_index.max(1),
    };
    let samples = rows
        .into_iter()
        .map(|(label, entries, lineno)| {
            FeatureVector::sparse(dimension, entries)
                .map(|x| Sample::new(x, label))
                .map_err(|e| err(lineno, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(name, dimension, samples)
}

/// Renders a dataset in LIBSVM format (shortest round-trip float form).
pub fn format_libsvm(dataset: &Dataset) -> String {
    let mut out = String::new();
    for s in dataset.samples() {
        out.push_str(match s.label {
            Label::Positive => "+1",
            Label::Negative => "-1",
        });
        for (i, v) in s.features.nonzeros() {
            let _ = write!(out, " {}:{}", i + 1, v);
        }
        out.push('\n');
    }
    out
}

pub fn write_libsvm(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), format_libsvm(dataset).as_bytes())
}
