//! Numeric CSV reading and writing.
//!
//! Input is comma-separated with a decimal point, LF or CRLF line endings
//! and at most one header row. Output always uses LF.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use depfid_core::{DataMatrix, Matrix};

use crate::error::{DepfidError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    Present,
    Absent,
    /// The first record is a header when any of its cells is not a number.
    #[default]
    Auto,
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses CSV text. Error coordinates are 1-based and count the header row.
pub fn parse_csv(text: &str, header: HeaderMode) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut names: Option<Vec<String>> = None;
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| DepfidError::InvalidArgument(format!("row {row}: {e}")))?;
        if idx == 0 {
            let is_header = match header {
                HeaderMode::Present => true,
                HeaderMode::Absent => false,
                HeaderMode::Auto => record.iter().any(|c| parse_cell(c).is_none()),
            };
            width = Some(record.len());
            if is_header {
                names = Some(record.iter().map(|c| c.trim().to_string()).collect());
                continue;
            }
        }
        let expected = width.unwrap_or(record.len());
        if record.len() != expected {
            return Err(DepfidError::RaggedRows { row, expected, found: record.len() });
        }
        for (col, cell) in record.iter().enumerate() {
            values.push(parse_cell(cell).ok_or(DepfidError::Parse { row, col: col + 1 })?);
        }
        rows += 1;
    }
    let cols = width.unwrap_or(0);
    if rows < 2 || cols == 0 {
        return Err(depfid_core::Error::InsufficientSamples { required: 2, got: rows }.into());
    }
    let data = DataMatrix::new(Matrix::from_vec(rows, cols, values)?)?;
    Ok(match names {
        Some(n) => data.with_column_names(n)?,
        None => data,
    })
}

pub fn ingest_csv(path: impl AsRef<Path>, header: HeaderMode) -> Result<DataMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DepfidError::io(path, e))?;
    parse_csv(&text, header)
}

/// Headerless unless the data carries column names. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn format_csv(data: &DataMatrix) -> String {
    let mut out = String::new();
    if let Some(names) = data.column_names() {
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for i in 0..data.n() {
        for (j, v) in data.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| DepfidError::io(path, e))
}

pub fn write_csv(path: impl AsRef<Path>, data: &DataMatrix) -> Result<()> {
    write_text(path, &format_csv(data))
}
