//! Solvers and spectral analysis for double saddle-point systems
//!
//! ```text
//! [ A  Bᵀ  Cᵀ ] [x]   [f]
//! [ B  0   0  ] [y] = [g]
//! [ C  0  -D  ] [z]   [h]
//! ```
//!
//! with `A`, `D` SPD and `B` of full row rank. The crate provides the
//! three-parameter GSOR stationary iteration (plus the Uzawa-like and GBSOR
//! baselines), the block lower triangular preconditioner it induces for
//! GMRES, block preconditioned MINRES, and executable versions of the
//! convergence and eigenvalue-enclosure results so they can be checked
//! against dense eigenvalue oracles.
//!
//! See `examples/` for one runnable program per capability, and the `gsor`
//! binary for scripted experiment runs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod krylov;
pub mod linalg;
pub mod problem;
pub mod solvers;
pub mod theory;

pub use error::{Error, Result};
pub use problem::{BlockLayout, DoubleSaddleProblem, SpectralData};
pub use solvers::{GsorParams, SolveOptions, SolveReport, SolveStatus};

/// Largest order a matrix may have before dense analysis routines refuse it.
pub const DENSE_THRESHOLD: usize = 2000;
