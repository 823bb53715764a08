//! Preconditioned GMRES and MINRES, the GSOR block lower triangular
//! preconditioner and two comparison preconditioners.

mod gmres;
mod minres;
mod precond;
mod spectrum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::problem::{AssembledOperator, BlockLayout, DoubleSaddleProblem};
use crate::solvers::SolveReport;

pub use gmres::gmres_solve;
pub use minres::minres_solve;
pub use precond::{BlockPreconditioner, Preconditioner, PreconditionerKind};
pub use spectrum::{
    gsor_preconditioned_matrix, preconditioned_matrix, preconditioned_spectrum, spectrum_csv,
    system_spectrum, DEFLATION_TOL,
};

/// A square operator `y = K x`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    fn is_symmetric(&self) -> bool {
        false
    }
}

impl LinearOperator for AssembledOperator<'_> {
    fn dim(&self) -> usize {
        AssembledOperator::dim(self)
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        AssembledOperator::apply(self, x, y)
    }
    fn is_symmetric(&self) -> bool {
        self.layout() == BlockLayout::Symmetric
    }
}

impl LinearOperator for crate::linalg::DenseMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
    fn is_symmetric(&self) -> bool {
        self == &self.transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrylovOptions {
    /// GMRES restart length; ignored by MINRES.
    pub restart: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub record_history: bool,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            restart: 100,
            tol: 1e-8,
            max_iter: 100_000,
            record_history: false,
        }
    }
}

impl KrylovOptions {
    pub fn validate(&self) -> Result<()> {
        if self.restart == 0 {
            return Err(Error::InvalidParameter("restart must be at least 1".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// `‖b − K w‖ / ‖b‖`, or the absolute residual for `b = 0`.
pub(crate) struct TrueResidual<'a> {
    op: &'a dyn LinearOperator,
    b: &'a [f64],
    scale: f64,
    work: Vec<f64>,
}

impl<'a> TrueResidual<'a> {
    pub(crate) fn new(op: &'a dyn LinearOperator, b: &'a [f64]) -> Self {
        let bn = norm2(b);
        Self {
            op,
            b,
            scale: if bn > 0.0 { bn } else { 1.0 },
            work: vec![0.0; b.len()],
        }
    }

    pub(crate) fn residual(&self, w: &[f64], out: &mut [f64]) {
        self.op.apply(w, out);
        for (o, b) in out.iter_mut().zip(self.b) {
            *o = b - *o;
        }
    }

    pub(crate) fn measure(&mut self, w: &[f64]) -> f64 {
        self.op.apply(w, &mut self.work);
        let r2: f64 = self
            .b
            .iter()
            .zip(&self.work)
            .map(|(b, a)| (b - a) * (b - a))
            .sum();
        r2.sqrt() / self.scale
    }
}

/// GMRES on the symmetric system with a block preconditioner; the report
/// counts the preconditioner's inner SPD solves.
pub fn gmres_solve_problem(
    problem: &DoubleSaddleProblem,
    kind: PreconditionerKind,
    opts: &KrylovOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let op = problem.assemble(BlockLayout::Symmetric);
    let pc = BlockPreconditioner::new(problem, kind, BlockLayout::Symmetric)?;
    let (w, mut report) = gmres_solve(&op, &pc, &problem.rhs(), None, opts)?;
    report.inner_solves = pc.solve_count();
    Ok((w, report))
}

/// MINRES on the symmetric system with the block-diagonal preconditioner.
pub fn minres_solve_problem(
    problem: &DoubleSaddleProblem,
    opts: &KrylovOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let op = problem.assemble(BlockLayout::Symmetric);
    let pc = BlockPreconditioner::new(
        problem,
        PreconditionerKind::BlockDiagonal,
        BlockLayout::Symmetric,
    )?;
    let (w, mut report) = minres_solve(&op, &pc, &problem.rhs(), None, opts)?;
    report.inner_solves = pc.solve_count();
    Ok((w, report))
}
