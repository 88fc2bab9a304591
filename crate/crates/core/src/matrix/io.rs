//! Matrix files: JSON `{ "dim": n, "rows": [[...], ...] }` or CSV with one
//! row per line. Readers symmetrize and validate.

use std::fs;
use std::path::Path;

use super::{Matrix, PDMatrix, SymMatrix};
use crate::error::{Error, Result};

pub fn parse_json(text: &str) -> Result<SymMatrix> {
    let m: Matrix = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    SymMatrix::new(m)
}

pub fn parse_csv(text: &str) -> Result<SymMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                field.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: lineno + 1,
                    message: format!("{field:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    SymMatrix::new(Matrix::from_rows(&rows)?)
}

/// Reads a symmetric matrix, choosing the format from the first
/// non-blank character (`{` means JSON).
pub fn read_sym(path: impl AsRef<Path>) -> Result<SymMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim_start().starts_with('{') {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

pub fn read_pd(path: impl AsRef<Path>) -> Result<PDMatrix> {
    PDMatrix::new(read_sym(path)?)
}

pub fn to_json(m: &Matrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}

pub fn write_json(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(m) + "\n").map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_csv_agree() {
        let a = parse_json(r#"{"dim": 2, "rows": [[2, 1], [1, 2]]}"#).unwrap();
        let b = parse_csv("2, 1\n1, 2\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_symmetrizes_small_asymmetry() {
        let m = parse_csv("1,0.5000000000001\n0.5,1\n").unwrap();
        assert_eq!(m.matrix()[(0, 1)], m.matrix()[(1, 0)]);
    }

    #[test]
    fn csv_reports_bad_field_line() {
        match parse_csv("1,2\n2,x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_dim_mismatch_rejected() {
        assert!(parse_json(r#"{"dim": 3, "rows": [[1, 0], [0, 1]]}"#).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let m = Matrix::from_rows(&[[0.1, 1.0 / 3.0], [1.0 / 3.0, 7.25]]).unwrap();
        write_json(&path, &m).unwrap();
        assert_eq!(read_sym(&path).unwrap().matrix(), &m);
        assert!(matches!(read_sym(dir.path().join("missing.json")), Err(Error::Io { .. })));
    }
}
