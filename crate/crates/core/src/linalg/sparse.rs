//! Compressed sparse row storage.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Real sparse matrix in CSR form.
///
/// Column indices are strictly increasing within each row and no explicit
/// zeros are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed and entries that end up exactly zero are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite entry at ({i}, {j})"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|a| (a.0, a.1));

        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        let mut k = 0;
        while k < sorted.len() {
            let (i, j, mut v) = sorted[k];
            k += 1;
            while k < sorted.len() && sorted[k].0 == i && sorted[k].1 == j {
                v += sorted[k].2;
                k += 1;
            }
            if v != 0.0 {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
            }
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let triplets: Vec<_> = diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(diag.len(), diag.len(), &triplets)
            .expect("diagonal entries are in range")
    }

    /// Converts a dense matrix, dropping entries with `|a_ij| <= drop_tol`.
    pub fn from_dense(m: &DenseMatrix, drop_tol: f64) -> Self {
        let mut triplets = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m[(i, j)];
                if v.abs() > drop_tol {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), &triplets).expect("dense entries are in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterates over stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "spmv: matrix has {} columns, vector has length {}",
                self.cols,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.rows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// `y = self * x` without allocation. Lengths must already match.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    /// `y += alpha * self * x`.
    pub fn spmv_add(&self, alpha: f64, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let s: f64 = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
            *yi += alpha * s;
        }
    }

    /// `y += alpha * selfᵀ * x`.
    pub fn spmv_transpose_add(&self, alpha: f64, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                y[j] += alpha * v * xi;
            }
        }
    }

    pub fn spmv_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "transposed spmv: matrix has {} rows, vector has length {}",
                self.rows,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.cols];
        self.spmv_transpose_add(1.0, x, &mut y);
        Ok(y)
    }

    pub fn transpose(&self) -> Self {
        let triplets: Vec<_> = self.triplets().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.cols, self.rows, &triplets).expect("transpose stays in range")
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let triplets: Vec<_> = self.triplets().map(|(i, j, v)| (i, j, alpha * v)).collect();
        Self::from_triplets(self.rows, self.cols, &triplets).expect("scaling stays in range")
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            d[(i, j)] = v;
        }
        d
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Half-bandwidth: max `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.triplets()
            .map(|(i, j, _)| i.abs_diff(j))
            .max()
            .unwrap_or(0)
    }

    /// Checks `|a_ij - a_ji| <= rel_tol * max|a|` for every stored entry.
    pub fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let tol = rel_tol * self.max_abs();
        for (i, j, v) in self.triplets() {
            let dev = (v - self.get(j, i)).abs();
            if dev > tol {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    deviation: dev,
                });
            }
        }
        Ok(())
    }
}
