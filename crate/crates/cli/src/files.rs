//! Kernel, matrix and factor files.
//!
//! Kernel JSON: `{"cout", "cin", "s", "padding", "data": [...]}` or, for bulk
//! payloads, `"data_file": "weights.f64"` naming a little-endian `f64` blob
//! relative to the JSON file. Padding defaults to `s / 2`.
//!
//! Matrix JSON: `{"re": [[...], ...], "im": [[...], ...]}`, `im` optional.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toeplipz_core::dc::{DCFactorization, Factor};
use toeplipz_core::{Complex64, ComplexVector, ConvKernel, DenseMatrix};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelFile {
    cout: usize,
    cin: usize,
    s: usize,
    padding: Option<usize>,
    data: Option<Vec<f64>>,
    data_file: Option<String>,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_kernel(path: &Path) -> Result<ConvKernel, CliError> {
    let file: KernelFile = parse_json(path)?;
    let bad = |msg: String| CliError::Parse(format!("{}: {msg}", path.display()));
    let data = match (file.data, file.data_file) {
        (Some(d), None) => d,
        (None, Some(rel)) => {
            let blob_path = path.parent().unwrap_or(Path::new(".")).join(&rel);
            let bytes = fs::read(&blob_path).map_err(|e| CliError::Io(format!("{}: {e}", blob_path.display())))?;
            if bytes.len() % 8 != 0 {
                return Err(bad(format!("field `data_file`: {} bytes is not a whole number of f64 values", bytes.len())));
            }
            bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
                .collect()
        }
        (Some(_), Some(_)) => return Err(bad("fields `data` and `data_file` are mutually exclusive".into())),
        (None, None) => return Err(bad("missing field `data` (or `data_file`)".into())),
    };
    let expected = file.cout * file.cin * file.s * file.s;
    if data.len() != expected {
        return Err(bad(format!(
            "field `data`: expected cout*cin*s*s = {expected} values, found {}",
            data.len()
        )));
    }
    let padding = file.padding.unwrap_or(file.s / 2);
    Ok(ConvKernel::new(file.cout, file.cin, file.s, padding, data)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    re: Vec<Vec<f64>>,
    im: Option<Vec<Vec<f64>>>,
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix, CliError> {
    let file: MatrixFile = parse_json(path)?;
    let bad = |msg: String| CliError::Parse(format!("{}: {msg}", path.display()));
    let rows = file.re.len();
    let cols = file.re.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(bad("field `re`: matrix is empty".into()));
    }
    if let Some(i) = file.re.iter().position(|r| r.len() != cols) {
        return Err(bad(format!("field `re`: row {i} has {} entries, expected {cols}", file.re[i].len())));
    }
    if let Some(im) = &file.im {
        if im.len() != rows {
            return Err(bad(format!("field `im`: {} rows, expected {rows}", im.len())));
        }
        if let Some(i) = im.iter().position(|r| r.len() != cols) {
            return Err(bad(format!("field `im`: row {i} has {} entries, expected {cols}", im[i].len())));
        }
    }
    Ok(DenseMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(file.re[i][j], file.im.as_ref().map_or(0.0, |m| m[i][j]))
    }))
}

#[derive(Debug, Serialize)]
pub struct FactorEntry {
    /// `"diagonal"` (the diagonal) or `"circulant"` (the first column).
    pub kind: String,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct FactorFile {
    pub n: usize,
    pub rank: Option<usize>,
    pub reconstruction_error: Option<f64>,
    /// Leftmost factor first.
    pub factors: Vec<FactorEntry>,
}

impl FactorFile {
    pub fn from_factorization(f: &DCFactorization) -> Self {
        let entry = |kind: &str, v: &ComplexVector| FactorEntry {
            kind: kind.into(),
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        };
        Self {
            n: f.dim(),
            rank: f.target_rank(),
            reconstruction_error: f.reconstruction_error(),
            factors: f
                .factors()
                .iter()
                .map(|fac| match fac {
                    Factor::Diagonal(d) => entry("diagonal", d.diagonal()),
                    Factor::Circulant(c) => entry("circulant", c.first_column()),
                })
                .collect(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
