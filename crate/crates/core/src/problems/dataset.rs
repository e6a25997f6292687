use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::linalg::{from_nalgebra, log_spaced, random_orthonormal};
use crate::{Error, Result};

/// Dense design matrix with one target per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Array2<f64>,
    pub labels: Array1<f64>,
}

impl Dataset {
    pub fn new(features: Array2<f64>, labels: Array1<f64>) -> Result<Self> {
        if features.nrows() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: features.nrows(),
                found: labels.len(),
            });
        }
        Ok(Self { features, labels })
    }

    pub fn rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn cols(&self) -> usize {
        self.features.ncols()
    }

    /// Labels mapped to `±1`: positive values become `+1`, everything else `−1`.
    pub fn binary_labels(&self) -> Array1<f64> {
        self.labels.mapv(|y| if y > 0.0 { 1.0 } else { -1.0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Comma separated, no header, label in the last column.
    Csv,
    /// `label idx:val ...` with 1-based, strictly increasing indices.
    LibSvm,
}

impl std::str::FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "libsvm" | "svmlight" => Ok(Self::LibSvm),
            other => Err(Error::InvalidArgument(format!("unknown dataset format `{other}`"))),
        }
    }
}

/// Reads a dataset from disk.
///
/// For LibSVM files `dimension` fixes the number of features; without it the
/// largest index seen is used. CSV files ignore `dimension` unless it
/// disagrees with the file.
pub fn load_dataset(path: &Path, format: DataFormat, dimension: Option<usize>) -> Result<Dataset> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    match format {
        DataFormat::Csv => read_csv(path, file, dimension),
        DataFormat::LibSvm => read_libsvm(path, BufReader::new(file), dimension),
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: PathBuf::from(path),
        line,
        message: message.into(),
    }
}

fn parse_number(path: &Path, line: usize, field: &str) -> Result<f64> {
    let value: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_error(path, line, format!("cannot parse `{}` as a number", field.trim())))?;
    if !value.is_finite() {
        return Err(parse_error(path, line, format!("non-finite value `{}`", field.trim())));
    }
    Ok(value)
}

fn read_csv(path: &Path, file: File, dimension: Option<usize>) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = dimension.map(|d| d + 1);
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() < 2 {
            return Err(parse_error(path, line, "expected at least one feature and a label"));
        }
        match width {
            Some(w) if w != record.len() => {
                return Err(parse_error(
                    path,
                    line,
                    format!("expected {} columns, found {}", w, record.len()),
                ))
            }
            None => width = Some(record.len()),
            _ => {}
        }
        let fields: Vec<&str> = record.iter().collect();
        let (label, features) = fields.split_last().expect("at least two fields");
        for field in features {
            values.push(parse_number(path, line, field)?);
        }
        labels.push(parse_number(path, line, label)?);
    }
    let cols = width.map_or(0, |w| w - 1);
    if labels.is_empty() {
        return Err(parse_error(path, 0, "no data rows"));
    }
    let features = Array2::from_shape_vec((labels.len(), cols), values).expect("row widths checked");
    Dataset::new(features, Array1::from(labels))
}

fn read_libsvm<R: BufRead>(path: &Path, reader: R, dimension: Option<usize>) -> Result<Dataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0;
    for (i, line) in reader.lines().enumerate() {
        let number = i + 1;
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label = parse_number(path, number, tokens.next().unwrap())?;
        let mut row = Vec::new();
        let mut last = 0;
        for token in tokens {
            let (idx, val) = token
                .split_once(':')
                .ok_or_else(|| parse_error(path, number, format!("expected `index:value`, found `{token}`")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| parse_error(path, number, format!("invalid feature index `{idx}`")))?;
            if idx == 0 {
                return Err(parse_error(path, number, "feature indices are 1-based"));
            }
            if idx <= last {
                return Err(parse_error(path, number, "feature indices must be strictly increasing"));
            }
            if let Some(d) = dimension {
                if idx > d {
                    return Err(parse_error(
                        path,
                        number,
                        format!("feature index {idx} exceeds dimension {d}"),
                    ));
                }
            }
            last = idx;
            row.push((idx - 1, parse_number(path, number, val)?));
        }
        max_index = max_index.max(last);
        rows.push(row);
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(parse_error(path, 0, "no data rows"));
    }
    let cols = dimension.unwrap_or(max_index);
    let mut features = Array2::zeros((rows.len(), cols));
    for (r, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            features[[r, c]] = v;
        }
    }
    Dataset::new(features, Array1::from(labels))
}

/// Random classification data with prescribed singular-value spread.
///
/// The design matrix is `U·diag(σ)·Vᵀ` with orthonormal `U`, `V` and `σ`
/// log-spaced from `√rows` down to `√rows / conditioning`, so that
/// `AᵀA/rows` has eigenvalues in `[1/conditioning², 1]`. Labels are the signs
/// of a noisy linear model.
pub fn synthetic_classification(rows: usize, cols: usize, conditioning: f64, seed: u64) -> Result<Dataset> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("dataset shape must be positive".into()));
    }
    if !(conditioning >= 1.0 && conditioning.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "conditioning must be ≥ 1, got {conditioning}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rows.min(cols);
    let u = random_orthonormal(rows, rank, &mut rng);
    let v = random_orthonormal(cols, rank, &mut rng);
    let scale = (rows as f64).sqrt();
    let sigma = log_spaced(scale, scale / conditioning, rank);
    let a = u * nalgebra::DMatrix::from_diagonal(&DVector::from_vec(sigma)) * v.transpose();
    let features = from_nalgebra(&a);
    let w: Array1<f64> = (0..cols).map(|_| StandardNormal.sample(&mut rng)).collect();
    let signal = features.dot(&w);
    let spread = (signal.dot(&signal) / rows as f64).sqrt().max(1e-12);
    let labels = signal.mapv(|s| {
        let noise: f64 = StandardNormal.sample(&mut rng);
        if s + 0.5 * spread * noise > 0.0 {
            1.0
        } else {
            -1.0
        }
    });
    Dataset::new(features, labels)
}
