//! Matrix kernels, SPD factorizations and eigenvalue utilities.

pub mod cholesky;
pub mod dense;
pub mod eigen;
pub mod factor;
pub mod mm;
pub mod sparse;
pub mod tridiagonal;

pub use cholesky::CholeskyFactor;
pub use dense::DenseMatrix;
pub use eigen::{
    dense_eigenvalues, dense_symmetric_eigenvalues, extremal_symmetric_eigenvalue, spectral_radius,
    EigenEstimate, Extremal, C64,
};
pub use factor::{CountingSolver, SpdFactor};
pub use sparse::SparseMatrix;
pub use tridiagonal::TridiagonalFactor;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
