use std::path::{Path, PathBuf};

use super::{generate_synthetic, read_csv, read_libsvm, CsvOptions, Dataset, LibsvmOptions, SynthSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DataFormat {
    Libsvm,
    Csv,
}

impl DataFormat {
    /// `.csv` is CSV; anything else is treated as LIBSVM.
    pub fn from_path(path: &Path) -> DataFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => DataFormat::Csv,
            _ => DataFormat::Libsvm,
        }
    }
}

/// Where a dataset comes from: a file on disk or a generator spec.
#[derive(Clone, Debug)]
pub enum DataSource {
    File {
        path: PathBuf,
        format: DataFormat,
        libsvm: LibsvmOptions,
        csv: CsvOptions,
    },
    Synthetic(SynthSpec),
}

impl DataSource {
    pub fn file(path: impl Into<PathBuf>) -> DataSource {
        let path = path.into();
        DataSource::File {
            format: DataFormat::from_path(&path),
            path,
            libsvm: LibsvmOptions::default(),
            csv: CsvOptions::default(),
        }
    }

    pub fn load(&self) -> Result<Dataset> {
        match self {
            DataSource::File {
                path,
                format: DataFormat::Libsvm,
                libsvm,
                ..
            } => read_libsvm(path, libsvm),
            DataSource::File {
                path,
                format: DataFormat::Csv,
                csv,
                ..
            } => read_csv(path, csv),
            DataSource::Synthetic(spec) => generate_synthetic(spec),
        }
    }

    /// Loads and checks the dimension against `expected`.
    pub fn load_with_dimension(&self, expected: usize) -> Result<Dataset> {
        let ds = match self {
            DataSource::File {
                path,
                format: DataFormat::Libsvm,
                libsvm,
                ..
            } if libsvm.dimension.is_none() => {
                let opts = LibsvmOptions {
                    dimension: Some(expected),
                    ..libsvm.clone()
                };
                read_libsvm(path, &opts).map_err(|e| match e {
                    Error::Parse { message, .. } if message.contains("exceeds declared dimension") => {
                        Error::InvalidParameter(format!(
                            "data has more features than the model dimension {expected}: {message}"
                        ))
                    }
                    other => other,
                })?
            }
            _ => self.load()?,
        };
        if ds.dimension() != expected {
            return Err(Error::InvalidParameter(format!(
                "dimension mismatch: model has dimension {expected}, data has dimension {}",
                ds.dimension()
            )));
        }
        Ok(ds)
    }
}
