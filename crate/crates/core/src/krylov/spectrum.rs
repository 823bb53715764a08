use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{dense_eigenvalues, dense_symmetric_eigenvalues, DenseMatrix, C64};
use crate::problem::{BlockLayout, DoubleSaddleProblem};
use crate::DENSE_THRESHOLD;

use super::{BlockPreconditioner, PreconditionerKind};

fn check_order(problem: &DoubleSaddleProblem) -> Result<()> {
    if problem.dim() > DENSE_THRESHOLD {
        return Err(Error::DenseThresholdExceeded {
            order: problem.dim(),
            threshold: DENSE_THRESHOLD,
        });
    }
    Ok(())
}

/// Dense `M⁻¹ K` for a preconditioner `M` and the system matrix `K` of the
/// same layout.
pub fn preconditioned_matrix(
    problem: &DoubleSaddleProblem,
    kind: PreconditionerKind,
    layout: BlockLayout,
) -> Result<DenseMatrix> {
    check_order(problem)?;
    let pc = BlockPreconditioner::new(problem, kind, layout)?;
    pc.to_dense().solve(&problem.assemble(layout).to_dense())
}

/// Dense `𝒫⁻¹𝒜` (symmetric layout) or `𝒫̂⁻¹𝒜̂` (unsymmetric layout).
pub fn gsor_preconditioned_matrix(
    problem: &DoubleSaddleProblem,
    tau: f64,
    theta: f64,
    layout: BlockLayout,
) -> Result<DenseMatrix> {
    preconditioned_matrix(problem, PreconditionerKind::gsor(tau, theta), layout)
}

fn sort(mut ev: Vec<C64>) -> Vec<C64> {
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    ev
}

/// Largest deviation of the leading block column of `𝒫⁻¹𝒜` from `(I; 0)`,
/// relative to the largest entry, for which the unit block is deflated.
pub const DEFLATION_TOL: f64 = 1e-10;

/// Eigenvalues of `M⁻¹ 𝒜`, sorted by real then imaginary part.
///
/// For the GSOR preconditioner `𝒫⁻¹𝒜 = [I X; 0 K]` with an `n × n`
/// identity block, so the spectrum is `n` ones together with the
/// eigenvalues of `K`. When the computed matrix has this form to
/// [`DEFLATION_TOL`] only `K` goes to the dense eigensolver. Whenever `K` has
/// an eigenvalue at 1 the full matrix has a defective eigenvalue there, which
/// a dense solver would split by about `√ε`.
pub fn preconditioned_spectrum(
    problem: &DoubleSaddleProblem,
    kind: PreconditionerKind,
) -> Result<Vec<C64>> {
    let m = preconditioned_matrix(problem, kind, BlockLayout::Symmetric)?;
    if let PreconditionerKind::GsorLowerTriangular { .. } = kind {
        if let Some(k) = unit_deflated_block(&m, problem.n()) {
            let mut ev = vec![C64::new(1.0, 0.0); problem.n()];
            ev.extend(dense_eigenvalues(&k)?);
            return Ok(sort(ev));
        }
    }
    Ok(sort(dense_eigenvalues(&m)?))
}

/// The trailing block `K` of `m = [I X; 0 K]`, if the leading `n` columns
/// match `(I; 0)` to [`DEFLATION_TOL`].
fn unit_deflated_block(m: &DenseMatrix, n: usize) -> Option<DenseMatrix> {
    let scale = m.max_abs().max(1.0);
    for i in 0..m.rows() {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            if !((m[(i, j)] - target).abs() <= DEFLATION_TOL * scale) {
                return None;
            }
        }
    }
    let k = m.rows() - n;
    let data = (n..m.rows()).flat_map(|i| m.row(i)[n..].to_vec()).collect();
    DenseMatrix::from_row_major(k, k, data).ok()
}

/// Eigenvalues of the symmetric system matrix `𝒜`, ascending.
pub fn system_spectrum(problem: &DoubleSaddleProblem) -> Result<Vec<C64>> {
    check_order(problem)?;
    let ev = dense_symmetric_eigenvalues(&problem.assemble(BlockLayout::Symmetric).to_dense())?;
    Ok(ev.into_iter().map(|re| C64::new(re, 0.0)).collect())
}

/// `real,imag` rows.
pub fn spectrum_csv(ev: &[C64]) -> String {
    let mut s = String::from("real,imag\n");
    for z in ev {
        writeln!(s, "{:e},{:e}", z.re, z.im).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseMatrix;

    #[test]
    fn layouts_give_the_same_preconditioned_matrix() {
        let one = |v: f64| SparseMatrix::from_diagonal(&[v]);
        let p = DoubleSaddleProblem::new(
            one(2.0),
            one(1.0),
            one(1.0),
            one(1.0),
            Some(one(1.0)),
            vec![2.0],
            vec![0.0],
            vec![0.0],
        )
        .unwrap();
        let s = gsor_preconditioned_matrix(&p, 0.4, 1.7, BlockLayout::Symmetric).unwrap();
        let u = gsor_preconditioned_matrix(&p, 0.4, 1.7, BlockLayout::Unsymmetric).unwrap();
        assert!(s.sub(&u).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn identity_problem_spectrum() {
        // A = B = D = P = I, C = 0, τ = θ = 1: 𝒫⁻¹𝒜 = [I I 0; 0 I 0; 0 0 I] → all ones
        let n = 3;
        let p = DoubleSaddleProblem::new(
            SparseMatrix::identity(n),
            SparseMatrix::identity(n),
            SparseMatrix::zeros(n, n),
            SparseMatrix::identity(n),
            Some(SparseMatrix::identity(n)),
            vec![1.0; n],
            vec![0.0; n],
            vec![0.0; n],
        )
        .unwrap();
        let ev = preconditioned_spectrum(&p, PreconditionerKind::gsor(1.0, 1.0)).unwrap();
        assert_eq!(ev.len(), 3 * n);
        assert!(ev
            .iter()
            .all(|z| (z.re - 1.0).abs() < 1e-6 && z.im.abs() < 1e-6));
        assert!(ev.iter().all(|z| *z == C64::new(1.0, 0.0)));
        let csv = spectrum_csv(&system_spectrum(&p).unwrap());
        assert_eq!(csv.lines().count(), 3 * n + 1);
    }
}
