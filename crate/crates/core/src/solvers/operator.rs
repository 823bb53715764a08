use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SparseMatrix};
use crate::problem::DoubleSaddleProblem;
use crate::DENSE_THRESHOLD;

use super::GsorParams;

/// Dense `M` and `N` with `M − N = 𝒜` and `M⁻¹ N = 𝒯`:
///
/// ```text
/// M = [A/ω 0 0; B −P/τ 0; C 0 −D/θ]
/// N = [(1/ω−1)A −Bᵀ −Cᵀ; 0 −P/τ 0; 0 0 (1−1/θ)D]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting {
    pub m: DenseMatrix,
    pub n: DenseMatrix,
}

impl Splitting {
    /// `M⁻¹ N` by a dense LU solve.
    pub fn iteration_matrix(&self) -> Result<DenseMatrix> {
        self.m.solve(&self.n)
    }
}

fn check_order(problem: &DoubleSaddleProblem) -> Result<()> {
    if problem.dim() > DENSE_THRESHOLD {
        return Err(Error::DenseThresholdExceeded {
            order: problem.dim(),
            threshold: DENSE_THRESHOLD,
        });
    }
    Ok(())
}

fn place(
    dst: &mut DenseMatrix,
    block: &SparseMatrix,
    r0: usize,
    c0: usize,
    scale: f64,
    transpose: bool,
) {
    for (i, j, v) in block.triplets() {
        let (i, j) = if transpose { (j, i) } else { (i, j) };
        dst[(r0 + i, c0 + j)] += scale * v;
    }
}

/// `𝒟 − Ω𝓛 = [A 0 0; −τB P 0; −θC 0 D]`
fn lower_part(pr: &DoubleSaddleProblem, params: &GsorParams) -> DenseMatrix {
    let (n, m, k) = (pr.n(), pr.m(), pr.dim());
    let mut l = DenseMatrix::zeros(k, k);
    place(&mut l, pr.a(), 0, 0, 1.0, false);
    place(&mut l, pr.b(), n, 0, -params.tau, false);
    place(&mut l, pr.p(), n, n, 1.0, false);
    place(&mut l, pr.c(), n + m, 0, -params.theta, false);
    place(&mut l, pr.d(), n + m, n + m, 1.0, false);
    l
}

/// Dense GSOR iteration operator
/// `𝒯 = (𝒟 − Ω𝓛)⁻¹ [(I − Ω)𝒟 + Ω𝒰]` for the unsymmetric layout.
pub fn gsor_iteration_operator(
    problem: &DoubleSaddleProblem,
    params: GsorParams,
) -> Result<DenseMatrix> {
    params.validate()?;
    check_order(problem)?;
    let pr = problem;
    let GsorParams { omega, theta, .. } = params;
    let (n, m, k) = (pr.n(), pr.m(), pr.dim());
    let mut r = DenseMatrix::zeros(k, k);
    place(&mut r, pr.a(), 0, 0, 1.0 - omega, false);
    place(&mut r, pr.b(), 0, n, -omega, true);
    place(&mut r, pr.c(), 0, n + m, -omega, true);
    place(&mut r, pr.p(), n, n, 1.0, false);
    place(&mut r, pr.d(), n + m, n + m, 1.0 - theta, false);
    lower_part(pr, &params).solve(&r)
}

/// Constant `c = (𝒟 − Ω𝓛)⁻¹ Ω b̂` of the affine GSOR map `w ↦ 𝒯w + c`.
pub fn gsor_affine_constant(problem: &DoubleSaddleProblem, params: GsorParams) -> Result<Vec<f64>> {
    params.validate()?;
    check_order(problem)?;
    let pr = problem;
    let rhs: Vec<f64> = pr
        .f()
        .iter()
        .map(|v| params.omega * v)
        .chain(pr.g().iter().map(|v| -params.tau * v))
        .chain(pr.h().iter().map(|v| -params.theta * v))
        .collect();
    let b = DenseMatrix::from_row_major(rhs.len(), 1, rhs)?;
    Ok(lower_part(pr, &params).solve(&b)?.column(0))
}

pub fn splitting_matrices(problem: &DoubleSaddleProblem, params: GsorParams) -> Result<Splitting> {
    params.validate()?;
    check_order(problem)?;
    let pr = problem;
    let GsorParams { omega, tau, theta } = params;
    let (n, m, k) = (pr.n(), pr.m(), pr.dim());
    let mut mm = DenseMatrix::zeros(k, k);
    place(&mut mm, pr.a(), 0, 0, 1.0 / omega, false);
    place(&mut mm, pr.b(), n, 0, 1.0, false);
    place(&mut mm, pr.p(), n, n, -1.0 / tau, false);
    place(&mut mm, pr.c(), n + m, 0, 1.0, false);
    place(&mut mm, pr.d(), n + m, n + m, -1.0 / theta, false);

    let mut nn = DenseMatrix::zeros(k, k);
    place(&mut nn, pr.a(), 0, 0, 1.0 / omega - 1.0, false);
    place(&mut nn, pr.b(), 0, n, -1.0, true);
    place(&mut nn, pr.c(), 0, n + m, -1.0, true);
    place(&mut nn, pr.p(), n, n, -1.0 / tau, false);
    place(&mut nn, pr.d(), n + m, n + m, 1.0 - 1.0 / theta, false);
    Ok(Splitting { m: mm, n: nn })
}
