use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from row-major storage.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for (o, &b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ · other` without materializing the transpose.
    pub fn transpose_matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch { expected: self.rows, found: other.rows });
        }
        let mut out = Matrix::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = other.row(k);
            for (i, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out.row_mut(i).iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Matrix> {
        for &c in columns {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange { index: c, limit: self.cols });
            }
        }
        let mut out = Matrix::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (k, &c) in columns.iter().enumerate() {
                out[(i, k)] = self[(i, c)];
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch { expected: self.cols, found: other.cols });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// An `n × d` table of finite observations, rows are samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Matrix,
    column_names: Option<Vec<String>>,
}

impl DataMatrix {
    /// Validates `n >= 2`, `d >= 1` and finiteness.
    pub fn new(values: Matrix) -> Result<Self> {
        if values.rows() < 2 {
            return Err(Error::InsufficientSamples { required: 2, got: values.rows() });
        }
        if values.cols() < 1 {
            return Err(Error::ShapeMismatch { expected: 1, found: 0 });
        }
        if let Some(pos) = values.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData { row: pos / values.cols(), col: pos % values.cols() });
        }
        Ok(Self { values, column_names: None })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.d() {
            return Err(Error::ShapeMismatch { expected: self.d(), found: names.len() });
        }
        self.column_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.values.rows()
    }

    pub fn d(&self) -> usize {
        self.values.cols()
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn into_values(self) -> Matrix {
        self.values
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.values.row(i)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.column(j)
    }

    pub fn column_means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.d()];
        for i in 0..self.n() {
            for (m, v) in means.iter_mut().zip(self.row(i)) {
                *m += v;
            }
        }
        let n = self.n() as f64;
        means.iter_mut().for_each(|m| *m /= n);
        means
    }

    /// Restricts to the listed columns; names follow along.
    pub fn select_columns(&self, columns: &[usize]) -> Result<DataMatrix> {
        let values = self.values.select_columns(columns)?;
        let column_names = self.column_names.as_ref().map(|names| columns.iter().map(|&c| names[c].clone()).collect());
        Ok(DataMatrix { values, column_names })
    }

    /// Keeps the listed rows (repetition allowed).
    pub fn select_rows(&self, rows: &[usize]) -> Result<DataMatrix> {
        if rows.len() < 2 {
            return Err(Error::InsufficientSamples { required: 2, got: rows.len() });
        }
        let mut data = Vec::with_capacity(rows.len() * self.d());
        for &r in rows {
            if r >= self.n() {
                return Err(Error::IndexOutOfRange { index: r, limit: self.n() });
            }
            data.extend_from_slice(self.row(r));
        }
        Ok(DataMatrix {
            values: Matrix::from_vec(rows.len(), self.d(), data)?,
            column_names: self.column_names.clone(),
        })
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &DataMatrix) -> Result<DataMatrix> {
        if self.d() != other.d() {
            return Err(Error::ShapeMismatch { expected: self.d(), found: other.d() });
        }
        let mut data = Vec::with_capacity((self.n() + other.n()) * self.d());
        data.extend_from_slice(self.values.as_slice());
        data.extend_from_slice(other.values.as_slice());
        DataMatrix::new(Matrix::from_vec(self.n() + other.n(), self.d(), data)?)
    }
}

/// What a [`SymMatrix`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Covariance,
    Correlation,
    Generic,
}

/// A symmetric `d × d` matrix tagged with its interpretation.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    entries: Matrix,
    kind: MatrixKind,
}

impl SymMatrix {
    /// Symmetrizes `(A + Aᵀ)/2` and checks the invariants of `kind`.
    pub fn new(entries: Matrix, kind: MatrixKind) -> Result<Self> {
        let d = entries.rows();
        if entries.cols() != d {
            return Err(Error::ShapeMismatch { expected: d, found: entries.cols() });
        }
        let mut m = entries;
        for i in 0..d {
            for j in (i + 1)..d {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        if let Some(pos) = m.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData { row: pos / d.max(1), col: pos % d.max(1) });
        }
        match kind {
            MatrixKind::Covariance => {
                if let Some(i) = (0..d).find(|&i| m[(i, i)] < 0.0) {
                    return Err(Error::DegenerateVariance { index: i });
                }
            }
            MatrixKind::Correlation => {
                for i in 0..d {
                    if (m[(i, i)] - 1.0).abs() > 1e-12 {
                        return Err(Error::InvalidParameter("correlation diagonal must be 1"));
                    }
                    m[(i, i)] = 1.0;
                    for j in 0..d {
                        if m[(i, j)].abs() > 1.0 + 1e-12 {
                            return Err(Error::InvalidParameter("correlation entries must lie in [-1, 1]"));
                        }
                        m[(i, j)] = m[(i, j)].clamp(-1.0, 1.0);
                    }
                }
            }
            MatrixKind::Generic => {}
        }
        Ok(Self { entries: m, kind })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], kind: MatrixKind) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?, kind)
    }

    pub fn covariance<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(rows, MatrixKind::Covariance)
    }

    pub fn identity(d: usize) -> Self {
        Self { entries: Matrix::identity(d), kind: MatrixKind::Covariance }
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }

    /// `c · A`, keeping the kind (covariance stays covariance for `c > 0`).
    pub fn scaled(&self, c: f64) -> Result<SymMatrix> {
        SymMatrix::new(self.entries.scale(c), self.kind)
    }

    /// Principal submatrix on the listed indices.
    pub fn submatrix(&self, indices: &[usize]) -> Result<SymMatrix> {
        let d = self.dim();
        let mut m = Matrix::zeros(indices.len(), indices.len());
        for (a, &i) in indices.iter().enumerate() {
            if i >= d {
                return Err(Error::IndexOutOfRange { index: i, limit: d });
            }
            for (b, &j) in indices.iter().enumerate() {
                m[(a, b)] = self.entries[(i, j)];
            }
        }
        Ok(SymMatrix { entries: m, kind: self.kind })
    }
}
