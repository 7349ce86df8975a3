//! Whitespace-separated numeric text files: one row per line, blank lines
//! and lines starting with `#` ignored.

use std::fs;
use std::path::Path;

use super::ProblemError;

pub fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>, ProblemError> {
    let text = fs::read_to_string(path).map_err(|source| ProblemError::Io { path: path.to_path_buf(), source })?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|e| ProblemError::Parse {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    message: format!("{tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a matrix with exactly `rows` x `cols` entries.
pub fn read_matrix(path: &Path, rows: usize, cols: usize) -> Result<Vec<Vec<f64>>, ProblemError> {
    let data = read_rows(path)?;
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(ProblemError::Shape {
            path: path.to_path_buf(),
            message: format!("expected {rows} rows of {cols} values"),
        });
    }
    Ok(data)
}

/// Reads a reference set of `m`-dimensional objective vectors.
pub fn read_reference_set(path: &Path, m: usize) -> Result<Vec<Vec<f64>>, ProblemError> {
    let data = read_rows(path)?;
    if data.is_empty() {
        return Err(ProblemError::Shape { path: path.to_path_buf(), message: "reference set is empty".into() });
    }
    if let Some(bad) = data.iter().position(|r| r.len() != m) {
        return Err(ProblemError::Shape {
            path: path.to_path_buf(),
            message: format!("row {} has {} values, expected {m}", bad + 1, data[bad].len()),
        });
    }
    Ok(data)
}

pub fn write_rows(path: &Path, rows: &[Vec<f64>]) -> std::io::Result<()> {
    use std::fmt::Write;
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    fs::write(path, out)
}
