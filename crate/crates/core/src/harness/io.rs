//! Plain-text CSV matrices and vectors.
//!
//! One matrix row per line, comma-separated decimal floats. Blank lines and
//! lines starting with `#` are ignored. A correlation file whose first data
//! line starts with `diag:` holds only the diagonal of `Psi`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;
use crate::rmt::CorrelationSpectrum;

/// Correlation matrix as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiInput {
    Diagonal(Vec<f64>),
    Dense(DenseMatrix),
}

impl PsiInput {
    pub fn dim(&self) -> usize {
        match self {
            PsiInput::Diagonal(d) => d.len(),
            PsiInput::Dense(m) => m.rows(),
        }
    }

    pub fn into_spectrum(self) -> Result<CorrelationSpectrum> {
        match self {
            PsiInput::Diagonal(d) => CorrelationSpectrum::from_diagonal(d),
            PsiInput::Dense(m) => CorrelationSpectrum::from_dense(&m),
        }
    }
}

fn parse_error(source: &str, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_string(),
        line,
        column,
        message: message.into(),
    }
}

/// Parses one comma-separated line; `offset` is the 0-based byte column where `text` starts.
fn parse_row(text: &str, source: &str, line: usize, offset: usize) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut col = offset;
    for field in text.split(',') {
        let trimmed = field.trim();
        let lead = field.len() - field.trim_start().len();
        if trimmed.is_empty() {
            return Err(parse_error(source, line, col + lead + 1, "empty field"));
        }
        let v: f64 = trimmed.parse().map_err(|_| {
            parse_error(
                source,
                line,
                col + lead + 1,
                format!("'{trimmed}' is not a number"),
            )
        })?;
        if !v.is_finite() {
            return Err(parse_error(
                source,
                line,
                col + lead + 1,
                format!("non-finite value '{trimmed}'"),
            ));
        }
        values.push(v);
        col += field.len() + 1;
    }
    Ok(values)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, l.trim_end()))
    })
}

pub fn parse_matrix(text: &str, source: &str) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, l) in data_lines(text) {
        let row = parse_row(l, source, line, 0)?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_error(
                    source,
                    line,
                    1,
                    format!("row has {} columns, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(source, 1, 1, "no data"));
    }
    DenseMatrix::from_rows(&rows)
}

/// A vector stored either as a single row or as a single column.
pub fn parse_vector(text: &str, source: &str) -> Result<Vec<f64>> {
    let m = parse_matrix(text, source)?;
    if m.rows() == 1 || m.cols() == 1 {
        Ok(m.as_slice().to_vec())
    } else {
        Err(parse_error(
            source,
            1,
            1,
            format!(
                "expected a vector, found a {}x{} matrix",
                m.rows(),
                m.cols()
            ),
        ))
    }
}

pub fn parse_psi(text: &str, source: &str) -> Result<PsiInput> {
    let mut lines = data_lines(text);
    let Some((line, first)) = lines.next() else {
        return Err(parse_error(source, 1, 1, "no data"));
    };
    let lead = first.len() - first.trim_start().len();
    if let Some(rest) = first.trim_start().strip_prefix("diag:") {
        if let Some((extra, _)) = lines.next() {
            return Err(parse_error(
                source,
                extra,
                1,
                "diagonal correlation must be a single row",
            ));
        }
        let d = parse_row(rest, source, line, lead + "diag:".len())?;
        if let Some(pos) = d.iter().position(|v| *v < 0.0) {
            return Err(parse_error(
                source,
                line,
                1,
                format!("negative diagonal entry at position {}", pos + 1),
            ));
        }
        return Ok(PsiInput::Diagonal(d));
    }
    let m = parse_matrix(text, source)?;
    if !m.is_square() {
        return Err(parse_error(
            source,
            1,
            1,
            format!(
                "correlation matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            ),
        ));
    }
    Ok(PsiInput::Dense(m))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Shortest exactly round-tripping representation.
fn push_row(out: &mut String, row: &[f64]) {
    for (j, v) in row.iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v:e}");
    }
    out.push('\n');
}

pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        push_row(&mut out, m.row(i));
    }
    out
}

/// One value per line.
pub fn format_vector(v: &[f64]) -> String {
    let mut out = String::new();
    for x in v {
        push_row(&mut out, std::slice::from_ref(x));
    }
    out
}

pub fn format_psi(psi: &PsiInput) -> String {
    match psi {
        PsiInput::Diagonal(d) => {
            let mut out = String::from("diag:");
            push_row(&mut out, d);
            out
        }
        PsiInput::Dense(m) => format_matrix(m),
    }
}
