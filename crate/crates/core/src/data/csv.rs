use std::io::Read;
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::types::{Label, Sample};
use crate::vector::FeatureVector;

/// Layout of a numeric CSV table.
#[derive(Clone, Debug, Default)]
pub struct CsvOptions {
    /// 0-based column holding the label (`+1/-1` or `1/0`).
    pub label_column: usize,
    pub has_header: bool,
    /// Optional column carrying a precomputed base score.
    pub base_score_column: Option<usize>,
}

pub fn read_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_csv(file, &path.display().to_string(), &name, options)
}

pub fn parse_csv<R: Read>(reader: R, origin: &str, name: &str, options: &CsvOptions) -> Result<Dataset> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    if options.base_score_column == Some(options.label_column) {
        return Err(Error::InvalidParameter(
            "label and base score columns must differ".into(),
        ));
    }
    let mut rdr = ::csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .flexible(false)
        .trim(::csv::Trim::All)
        .from_reader(reader);
    let mut samples = Vec::new();
    let mut width: Option<usize> = None;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let cols = record.len();
        width.get_or_insert(cols);
        if options.label_column >= cols {
            return Err(err(line, format!("label column {} out of range", options.label_column)));
        }
        if let Some(b) = options.base_score_column {
            if b >= cols {
                return Err(err(line, format!("base score column {b} out of range")));
            }
        }
        let mut label = None;
        let mut base = None;
        let mut features = Vec::with_capacity(cols);
        for (col, cell) in record.iter().enumerate() {
            if col == options.label_column {
                label = Some(Label::parse(cell).ok_or_else(|| {
                    err(line, format!("column {col}: label {cell:?} is not one of +1, -1, 1, 0"))
                })?);
                continue;
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| err(line, format!("column {col}: non-numeric cell {cell:?}")))?;
            if !v.is_finite() {
                return Err(err(line, format!("column {col}: non-finite value {v}")));
            }
            if Some(col) == options.base_score_column {
                base = Some(v);
            } else {
                features.push(v);
            }
        }
        let x = FeatureVector::dense(features).map_err(|e| err(line, e.to_string()))?;
        let label = label.expect("label column present");
        samples.push(match base {
            Some(b) => Sample::with_base_score(x, label, b)?,
            None => Sample::new(x, label),
        });
    }
    let fixed = 1 + options.base_score_column.is_some() as usize;
    let dimension = width.map(|w| w.saturating_sub(fixed)).unwrap_or(1).max(1);
    Dataset::new(name, dimension, samples)
}
