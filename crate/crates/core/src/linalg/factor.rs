use std::cell::Cell;

use crate::error::{Error, Result};
use crate::linalg::{CholeskyFactor, SparseMatrix, TridiagonalFactor};

/// Factorization of an SPD matrix. The tridiagonal path is taken whenever
/// the input has bandwidth at most one.
#[derive(Debug, Clone)]
pub enum SpdFactor {
    Tridiagonal(TridiagonalFactor),
    Cholesky(CholeskyFactor),
}

impl SpdFactor {
    pub fn factor(m: &SparseMatrix) -> Result<Self> {
        if m.rows() == m.cols() && m.bandwidth() <= 1 {
            TridiagonalFactor::factor(m).map(Self::Tridiagonal)
        } else {
            CholeskyFactor::factor(m).map(Self::Cholesky)
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Tridiagonal(f) => f.dim(),
            Self::Cholesky(f) => f.dim(),
        }
    }

    pub fn is_tridiagonal(&self) -> bool {
        matches!(self, Self::Tridiagonal(_))
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "SPD solve: order {} vs rhs length {}",
                self.dim(),
                b.len()
            )));
        }
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        match self {
            Self::Tridiagonal(f) => f.solve_in_place(b),
            Self::Cholesky(f) => f.solve_in_place(b),
        }
    }

    /// `b ← G⁻¹ b` for the factor `M = G Gᵀ`.
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        match self {
            Self::Tridiagonal(f) => f.solve_lower_in_place(b),
            Self::Cholesky(f) => f.solve_lower_in_place(b),
        }
    }

    /// `b ← G⁻ᵀ b` for the factor `M = G Gᵀ`.
    pub fn solve_upper_in_place(&self, b: &mut [f64]) {
        match self {
            Self::Tridiagonal(f) => f.solve_upper_in_place(b),
            Self::Cholesky(f) => f.solve_upper_in_place(b),
        }
    }
}

/// Wraps a factor and counts how many solves go through it.
#[derive(Debug)]
pub struct CountingSolver<'a> {
    factor: &'a SpdFactor,
    count: Cell<usize>,
}

impl<'a> CountingSolver<'a> {
    pub fn new(factor: &'a SpdFactor) -> Self {
        Self {
            factor,
            count: Cell::new(0),
        }
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        self.count.set(self.count.get() + 1);
        self.factor.solve_in_place(b);
    }

    pub fn count(&self) -> usize {
        self.count.get()
    }
}
