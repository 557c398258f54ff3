//! Dense row-major matrices and their CSV interchange format.
//!
//! The CSV layout is self-describing: a literal header line `rows,cols`,
//! one line with the two dimensions, then one matrix row per line.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// A dense real matrix with row-major storage.
///
/// All entries are guaranteed finite after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if let Some(index) = entries.iter().position(|e| !e.is_finite()) {
            return Err(Error::NotFinite {
                what: "matrix entries",
                index,
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// y = A x
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "matvec input",
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), x)).collect())
    }

    /// y = Aᵀ x
    pub fn matvec_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                what: "transpose matvec input",
                expected: self.rows,
                got: x.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o += self.at(r, c) * xr;
            }
        }
        Ok(out)
    }

    pub fn transposed(&self) -> Self {
        let mut entries = vec![0.0; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.at(r, c);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str("rows,cols\n");
        let _ = writeln!(out, "{},{}", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|e| format!("{e}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::CsvParse {
            line: 1,
            what: "empty file".into(),
        })?;
        if header.trim() != "rows,cols" {
            return Err(Error::CsvParse {
                line: 1,
                what: format!("expected header \"rows,cols\", found {header:?}"),
            });
        }
        let (_, dims) = lines.next().ok_or_else(|| Error::CsvParse {
            line: 2,
            what: "missing dimension line".into(),
        })?;
        let mut it = dims.split(',');
        let rows: usize = parse_field(it.next(), 2, "rows")?;
        let cols: usize = parse_field(it.next(), 2, "cols")?;
        if rows == 0 || cols == 0 {
            return Err(Error::CsvParse {
                line: 2,
                what: "dimensions must be positive".into(),
            });
        }
        // Guard the allocation against absurd headers before trusting them.
        const MAX_CSV_ENTRIES: usize = 1 << 28;
        let count = rows.checked_mul(cols).filter(|c| *c <= MAX_CSV_ENTRIES);
        let Some(count) = count else {
            return Err(Error::CsvParse {
                line: 2,
                what: format!("implausible dimensions {rows}x{cols}"),
            });
        };
        let mut entries = Vec::with_capacity(count);
        let mut seen = 0usize;
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols {
                return Err(Error::CsvParse {
                    line: idx + 1,
                    what: format!("expected {cols} values, found {}", fields.len()),
                });
            }
            for f in fields {
                let v: f64 = f.trim().parse().map_err(|_| Error::CsvParse {
                    line: idx + 1,
                    what: format!("invalid number {f:?}"),
                })?;
                entries.push(v);
            }
            seen += 1;
        }
        if seen != rows {
            return Err(Error::CsvParse {
                line: seen + 2,
                what: format!("expected {rows} matrix rows, found {seen}"),
            });
        }
        Self::new(rows, cols, entries)
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv_str(&text)
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T> {
    field
        .and_then(|f| f.trim().parse().ok())
        .ok_or_else(|| Error::CsvParse {
            line,
            what: format!("invalid {what} field"),
        })
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_entry_count() {
        let err = DenseMatrix::new(2, 2, vec![1.0, 2.0, 3.0]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn rejects_nan_and_inf() {
        let err = DenseMatrix::new(1, 2, vec![1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NotFinite { index: 1, .. }));
        let err = DenseMatrix::new(1, 2, vec![f64::INFINITY, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NotFinite { index: 0, .. }));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let a = DenseMatrix::new(2, 3, vec![1.5, -2.25, 0.1, 3.0, 4.0, -0.0625]).unwrap();
        let b = DenseMatrix::from_csv_str(&a.to_csv_string()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_reports_bad_lines() {
        let err = DenseMatrix::from_csv_str("rows,cols\n2,2\n1.0,2.0\n3.0\n").unwrap_err();
        match err {
            Error::CsvParse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn csv_rejects_implausible_headers_without_allocating() {
        for dims in ["99999999999,99999999999", "1000000,1000000"] {
            let err = DenseMatrix::from_csv_str(&format!("rows,cols\n{dims}\n")).unwrap_err();
            assert!(matches!(err, Error::CsvParse { line: 2, .. }));
        }
    }

    #[test]
    fn matvec_and_transpose_agree_with_manual_product() {
        let a = DenseMatrix::new(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(a.matvec(&[1.0, 0.0, -1.0]).unwrap(), vec![-2.0, -2.0]);
        assert_eq!(
            a.matvec_transpose(&[1.0, 1.0]).unwrap(),
            vec![5.0, 7.0, 9.0]
        );
        let at = a.transposed();
        assert_eq!(at.at(2, 1), 6.0);
    }
}
