//! Matrix file formats.
//!
//! JSON: `{ "dim": D, "rows": [[[re, im], ...], ...] }`, row-major.
//! CSV: one matrix row per line, entries interleaved as `re,im,re,im,...`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Format("only square matrices can be written".into()));
        }
        let rows = (0..m.rows())
            .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Ok(Self { dim: m.rows(), rows })
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.rows.len() != self.dim || self.rows.iter().any(|r| r.len() != self.dim) {
            return Err(Error::Format(format!(
                "expected {0} rows of {0} entries",
                self.dim
            )));
        }
        let data = self
            .rows
            .iter()
            .flatten()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        ComplexMatrix::new(self.dim, self.dim, data).map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Result<String> {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(m)?)
        .map_err(|e| Error::Format(e.to_string()))
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.to_matrix()
}

pub fn matrix_from_csv(text: &str) -> Result<ComplexMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Format(e.to_string()))?;
        let values = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| Error::Format(format!("bad number {f:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() % 2 != 0 {
            return Err(Error::Format("odd number of columns; expected re,im pairs".into()));
        }
        rows.push(
            values
                .chunks(2)
                .map(|p| C64::new(p[0], p[1]))
                .collect::<Vec<_>>(),
        );
    }
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::Format("CSV matrix must be square".into()));
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| Error::Format(e.to_string()))
}

pub fn matrix_to_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let fields: Vec<String> = m
            .row(i)
            .iter()
            .flat_map(|z| [z.re.to_string(), z.im.to_string()])
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Errors reading a matrix file, split by whether the file could be read.
#[derive(Debug)]
pub enum LoadError {
    Io(std::io::Error),
    Parse(Error),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Io(e) => write!(f, "{e}"),
            LoadError::Parse(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

/// Reads a `.csv` file as CSV and anything else as JSON.
pub fn load_matrix(path: &Path) -> std::result::Result<ComplexMatrix, LoadError> {
    let text = std::fs::read_to_string(path).map_err(LoadError::Io)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        matrix_from_csv(&text)
    } else {
        matrix_from_json(&text)
    }
    .map_err(LoadError::Parse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_field_names() {
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(0.5, 0.0), C64::new(0.0, -0.25)],
            vec![C64::new(0.0, 0.25), C64::new(0.5, 0.0)],
        ])
        .unwrap();
        let text = matrix_to_json(&m).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["rows"][0][1], serde_json::json!([0.0, -0.25]));
        assert_eq!(matrix_from_json(&text).unwrap(), m);
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(matrix_from_json(r#"{"dim": 2, "rows": [[[1,0]]]}"#).is_err());
        assert!(matrix_from_json(r#"{"dim": 1, "rows": [[[1,0]]], "extra": 1}"#).is_err());
        assert!(matrix_from_json("not json").is_err());
    }

    #[test]
    fn csv_ingestion() {
        let text = "# identity/2\n0.5,0,0,0\n0,0,0.5,0\n";
        let m = matrix_from_csv(text).unwrap();
        assert_eq!(m, ComplexMatrix::from_real_diagonal(&[0.5, 0.5]));
        assert!(matrix_from_csv("1,0,0\n").is_err());
        assert!(matrix_from_csv("1,0,0,0\n").is_err());
    }

    #[test]
    fn load_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let m = ComplexMatrix::from_real_diagonal(&[0.25, 0.75]);
        let json = dir.path().join("m.json");
        let csv = dir.path().join("m.csv");
        std::fs::write(&json, matrix_to_json(&m).unwrap()).unwrap();
        std::fs::write(&csv, matrix_to_csv(&m)).unwrap();
        assert_eq!(load_matrix(&json).unwrap(), m);
        assert_eq!(load_matrix(&csv).unwrap(), m);
        assert!(matches!(
            load_matrix(&dir.path().join("missing.json")),
            Err(LoadError::Io(_))
        ));
    }

    proptest! {
        #[test]
        fn json_and_csv_round_trip(entries in proptest::collection::vec(-1e6f64..1e6, 18)) {
            let data: Vec<C64> = entries.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
            let m = ComplexMatrix::new(3, 3, data).unwrap();
            prop_assert_eq!(matrix_from_json(&matrix_to_json(&m).unwrap()).unwrap(), m.clone());
            prop_assert_eq!(matrix_from_csv(&matrix_to_csv(&m)).unwrap(), m);
        }
    }
}
