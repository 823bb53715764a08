use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("matrix is not symmetric (|a_ij - a_ji| = {deviation:e} at ({row}, {col}))")]
    NotSymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("B does not have full row rank")]
    RankDeficient,

    #[error("order {order} exceeds the dense analysis threshold {threshold}")]
    DenseThresholdExceeded { order: usize, threshold: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenvalue iteration did not converge: {0}")]
    EigenNoConvergence(String),

    #[error("preconditioner unsuitable: {0}")]
    Preconditioner(String),

    #[error("matrix market: {0}")]
    MatrixMarket(String),

    #[error("manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
