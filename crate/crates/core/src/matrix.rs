//! Dense matrices over a [`Field`] and Gaussian elimination.

use std::fmt;

use thiserror::Error;

use crate::ff::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("entry {value} at ({row}, {col}) is not an element of {field}")]
    Entry {
        row: usize,
        col: usize,
        value: u8,
        field: String,
    },
    #[error("matrices are over different fields or have incompatible shapes")]
    Mismatch,
}

/// Dense row-major matrix with entries encoded as in [`crate::ff`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixF {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl MatrixF {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|&v| !field.contains(v)) {
            return Err(MatrixError::Entry {
                row: pos / cols,
                col: pos % cols,
                value: data[pos],
                field: field.name().to_string(),
            });
        }
        Ok(MatrixF { field, rows, cols, data })
    }

    pub fn from_rows(field: Field, rows: &[Vec<u8>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(MatrixError::Shape {
                rows: rows.len(),
                cols,
                expected: cols,
                got: bad.len(),
            });
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        MatrixF { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn scalar(&self, r: usize, c: usize) -> Scalar {
        Scalar::new(self.field, self.get(r, c)).expect("entries are canonical")
    }

    /// Panics if `value` is not a field element.
    pub fn set(&mut self, r: usize, c: usize, value: u8) {
        assert!(self.field.contains(value), "non-canonical entry {value}");
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn transpose(&self) -> MatrixF {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> MatrixF {
        let data = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c)))
            .collect();
        MatrixF { field: self.field, rows: rows.len(), cols: cols.len(), data }
    }

    /// Re-encode the entries in another field. Only valid when every entry
    /// lies in a common prime subfield (the encodings agree there).
    pub fn embed(&self, field: Field) -> Result<MatrixF, MatrixError> {
        if field.characteristic() != self.field.characteristic()
            || self.data.iter().any(|&v| v >= self.field.characteristic())
        {
            return Err(MatrixError::Mismatch);
        }
        Ok(MatrixF { field, ..self.clone() })
    }

    pub fn mul(&self, other: &MatrixF) -> Result<MatrixF, MatrixError> {
        if self.field != other.field || self.cols != other.rows {
            return Err(MatrixError::Mismatch);
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vecs();
        rref(self.field, &mut rows).len()
    }

    pub fn determinant(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let f = self.field;
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut det = 1u8;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
                return Some(Scalar::zero(f));
            };
            if piv != col {
                a.swap(piv, col);
                det = f.neg(det);
            }
            let p = a[col][col];
            det = f.mul(det, p);
            let pinv = f.inv(p).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = f.mul(a[r][col], pinv);
                if factor != 0 {
                    for c in col..n {
                        let v = f.mul(factor, a[col][c]);
                        a[r][c] = f.sub(a[r][c], v);
                    }
                }
            }
        }
        Some(Scalar::new(f, det).expect("canonical"))
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixF<{}> {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&v| self.field.format(v)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduce `rows` in place to reduced row-echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(field: Field, rows: &mut Vec<Vec<u8>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(rows[r][col]).expect("pivot is nonzero");
        if inv != 1 {
            for v in rows[r].iter_mut().skip(col) {
                *v = field.mul(*v, inv);
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col];
            if factor != 0 {
                for (c, &pv) in pivot_row.iter().enumerate().skip(col) {
                    if pv != 0 {
                        row[c] = field.sub(row[c], field.mul(factor, pv));
                    }
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` where `M` has the given rows of length `ncols`.
pub fn nullspace(field: Field, rows: &[Vec<u8>], ncols: usize) -> Vec<Vec<u8>> {
    let mut reduced = rows.to_vec();
    let pivots = rref(field, &mut reduced);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u8; ncols];
            v[free] = 1;
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = field.neg(row[free]);
            }
            v
        })
        .collect()
}

/// `sum_i coeffs[i] * rows[i]`.
pub fn combine(field: Field, coeffs: &[u8], rows: &[Vec<u8>], len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for (&c, row) in coeffs.iter().zip(rows) {
        if c == 0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(row) {
            if v != 0 {
                *o = field.add(*o, field.mul(c, v));
            }
        }
    }
    out
}
