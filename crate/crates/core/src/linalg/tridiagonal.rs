use crate::error::{Error, Result};
use crate::linalg::cholesky::{PIVOT_TOL, SYMMETRY_TOL};
use crate::linalg::SparseMatrix;

/// LU factorization without pivoting of an SPD tridiagonal matrix.
///
/// `L` is unit lower bidiagonal with subdiagonal `lower`, `U` is upper
/// bidiagonal with diagonal `pivots` and superdiagonal `upper` (the input's
/// superdiagonal). Symmetry gives `U = diag(pivots) Lᵀ`, which is what the
/// half-solves rely on.
#[derive(Debug, Clone)]
pub struct TridiagonalFactor {
    lower: Vec<f64>,
    pivots: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalFactor {
    pub fn factor(m: &SparseMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.bandwidth() > 1 {
            return Err(Error::InvalidParameter(
                "tridiagonal factor needs bandwidth <= 1".into(),
            ));
        }
        m.check_symmetric(SYMMETRY_TOL)?;
        let n = m.rows();
        let diag = m.diagonal();
        let upper: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m.get(i, i + 1)).collect();
        let sub: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m.get(i + 1, i)).collect();
        let floor = PIVOT_TOL * diag.iter().fold(0.0f64, |a, &d| a.max(d));

        let mut pivots = Vec::with_capacity(n);
        let mut lower = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            let u = if i == 0 {
                diag[0]
            } else {
                diag[i] - lower[i - 1] * upper[i - 1]
            };
            if !(u > floor) {
                return Err(Error::NotPositiveDefinite { row: i, pivot: u });
            }
            pivots.push(u);
            if i + 1 < n {
                lower.push(sub[i] / u);
            }
        }
        Ok(Self {
            lower,
            pivots,
            upper,
        })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        for i in 1..n {
            b[i] -= self.lower[i - 1] * b[i - 1];
        }
        for i in (0..n).rev() {
            if i + 1 < n {
                b[i] -= self.upper[i] * b[i + 1];
            }
            b[i] /= self.pivots[i];
        }
    }

    /// `b ← (L D^{1/2})⁻¹ b`.
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        for i in 1..n {
            b[i] -= self.lower[i - 1] * b[i - 1];
        }
        for (bi, &u) in b.iter_mut().zip(&self.pivots) {
            *bi /= u.sqrt();
        }
    }

    /// `b ← (L D^{1/2})⁻ᵀ b`.
    pub fn solve_upper_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        for (bi, &u) in b.iter_mut().zip(&self.pivots) {
            *bi /= u.sqrt();
        }
        for i in (0..n.saturating_sub(1)).rev() {
            b[i] -= self.lower[i] * b[i + 1];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "tridiagonal solve: order {} vs rhs length {}",
                self.dim(),
                b.len()
            )));
        }
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }
}
