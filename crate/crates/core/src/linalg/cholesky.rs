//! Envelope (profile) Cholesky factorization.
//!
//! Row `i` of `L` is stored densely from the first nonzero column of row `i`
//! of the input's lower triangle up to the diagonal. Fill stays inside that
//! envelope, so banded inputs factor in `O(n b^2)` and dense inputs simply
//! become a packed dense factor.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SparseMatrix};

/// Relative pivot floor below which a matrix is declared not positive definite.
pub const PIVOT_TOL: f64 = 1e-14;
/// Relative tolerance of the symmetry check performed before factoring.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Lower-triangular factor `L` with `M = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    n: usize,
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

impl CholeskyFactor {
    pub fn factor(m: &SparseMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        m.check_symmetric(SYMMETRY_TOL)?;
        let n = m.rows();

        let first: Vec<usize> = (0..n)
            .map(|i| {
                let (cols, _) = m.row(i);
                cols.first().copied().filter(|&j| j <= i).unwrap_or(i)
            })
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut values = vec![0.0; start[n]];
        for i in 0..n {
            let (cols, vals) = m.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j <= i {
                    values[start[i] + j - first[i]] = v;
                }
            }
        }

        let max_diag = m.diagonal().iter().fold(0.0f64, |a, &d| a.max(d));
        let floor = PIVOT_TOL * max_diag;

        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let mut s = values[start[i] + j - fi];
                for k in k0..j {
                    s -= values[start[i] + k - fi] * values[start[j] + k - fj];
                }
                values[start[i] + j - fi] = s / values[start[j] + j - fj];
            }
            let row = &values[start[i]..start[i] + (i - fi)];
            let d = values[start[i] + i - fi] - row.iter().map(|v| v * v).sum::<f64>();
            if !(d > floor) {
                return Err(Error::NotPositiveDefinite { row: i, pivot: d });
            }
            values[start[i] + i - fi] = d.sqrt();
        }
        Ok(Self {
            n,
            first,
            start,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `L[i][j]`.
    pub fn l(&self, i: usize, j: usize) -> f64 {
        if j > i || j < self.first[i] {
            0.0
        } else {
            self.values[self.start[i] + j - self.first[i]]
        }
    }

    pub fn l_dense(&self) -> DenseMatrix {
        let mut l = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in self.first[i]..=i {
                l[(i, j)] = self.l(i, j);
            }
        }
        l
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[self.start[i]..self.start[i + 1]]
    }

    /// Overwrites `b` with `L⁻¹ b`.
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        for i in 0..self.n {
            let fi = self.first[i];
            let row = self.row(i);
            let mut s = b[i];
            for (k, &l) in (fi..i).zip(row) {
                s -= l * b[k];
            }
            b[i] = s / row[i - fi];
        }
    }

    /// Overwrites `b` with `L⁻ᵀ b`.
    pub fn solve_upper_in_place(&self, b: &mut [f64]) {
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let row = self.row(i);
            b[i] /= row[i - fi];
            let xi = b[i];
            for (k, &l) in (fi..i).zip(row) {
                b[k] -= l * xi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "cholesky solve: order {} vs rhs length {}",
                self.n,
                b.len()
            )));
        }
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        self.solve_lower_in_place(b);
        self.solve_upper_in_place(b);
    }
}
