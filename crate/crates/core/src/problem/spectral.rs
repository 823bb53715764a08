use serde::Serialize;

use crate::linalg::eigen::{symmetric_extremes, ExtremePair};
use crate::linalg::{SparseMatrix, SpdFactor};
use crate::problem::DoubleSaddleProblem;

/// Extremal eigenvalues that drive every convergence and enclosure result.
///
/// `mu_min`/`mu_max` bound the spectrum of `P⁻¹ B A⁻¹ Bᵀ`, `nu_max` is the
/// largest eigenvalue of `D⁻¹ C A⁻¹ Cᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralData {
    pub mu_min: f64,
    pub mu_max: f64,
    pub nu_max: f64,
    /// `false` if the eigenvalue iteration hit its cap.
    pub converged: bool,
}

impl SpectralData {
    pub fn new(mu_min: f64, mu_max: f64, nu_max: f64) -> Self {
        Self {
            mu_min,
            mu_max,
            nu_max,
            converged: true,
        }
    }
}

/// Extremes of `G⁻¹ K A⁻¹ Kᵀ G⁻ᵀ` where `W = G Gᵀ` is the weight factor.
/// This is symmetric and similar to `W⁻¹ K A⁻¹ Kᵀ`.
pub(crate) fn coupled_extremes(a: &SpdFactor, k: &SparseMatrix, weight: &SpdFactor) -> ExtremePair {
    let mut u = vec![0.0; k.cols()];
    let apply = |x: &[f64], y: &mut [f64]| {
        y.copy_from_slice(x);
        weight.solve_upper_in_place(y);
        u.fill(0.0);
        k.spmv_transpose_add(1.0, y, &mut u);
        a.solve_in_place(&mut u);
        k.spmv_into(&u, y);
        weight.solve_lower_in_place(y);
    };
    symmetric_extremes(apply, k.rows())
}

pub fn spectral_data(problem: &DoubleSaddleProblem) -> SpectralData {
    let mu = coupled_extremes(problem.a_factor(), problem.b(), problem.p_factor());
    let nu = coupled_extremes(problem.a_factor(), problem.c(), problem.d_factor());
    SpectralData {
        mu_min: mu.smallest.max(0.0),
        mu_max: mu.largest,
        nu_max: nu.largest.max(0.0),
        converged: mu.converged && nu.converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(v: f64) -> SparseMatrix {
        SparseMatrix::from_diagonal(&[v])
    }

    #[test]
    fn scalar_instance() {
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
        let s = spectral_data(&p);
        assert!(s.converged);
        assert!((s.mu_min - 0.5).abs() < 1e-14);
        assert!((s.mu_max - 0.5).abs() < 1e-14);
        assert!((s.nu_max - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_coupling_gives_zero_nu() {
        let n = 4;
        let b = SparseMatrix::from_triplets(2, n, &[(0, 0, 1.0), (1, 2, 1.0)]).unwrap();
        let p = DoubleSaddleProblem::new(
            SparseMatrix::identity(n),
            b,
            SparseMatrix::zeros(3, n),
            SparseMatrix::identity(3),
            None,
            vec![1.0; n],
            vec![0.0; 2],
            vec![0.0; 3],
        )
        .unwrap();
        let s = spectral_data(&p);
        assert_eq!(s.nu_max, 0.0);
        assert!((s.mu_min - 1.0).abs() < 1e-12 && (s.mu_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_weights_collapse_to_bbt() {
        // B = C, A = D = P = I: mu_max = nu_max = λ_max(B Bᵀ)
        let b = SparseMatrix::from_triplets(
            2,
            3,
            &[(0, 0, 1.0), (0, 1, 2.0), (1, 1, -1.0), (1, 2, 0.5)],
        )
        .unwrap();
        let p = DoubleSaddleProblem::new(
            SparseMatrix::identity(3),
            b.clone(),
            b.clone(),
            SparseMatrix::identity(2),
            Some(SparseMatrix::identity(2)),
            vec![1.0; 3],
            vec![0.0; 2],
            vec![0.0; 2],
        )
        .unwrap();
        let s = spectral_data(&p);
        // B Bᵀ = [[5, -2], [-2, 1.25]]
        let (tr, det): (f64, f64) = (6.25, 5.0 * 1.25 - 4.0);
        let lmax = 0.5 * (tr + (tr * tr - 4.0 * det).sqrt());
        assert!((s.mu_max - lmax).abs() < 1e-12);
        assert!((s.nu_max - lmax).abs() < 1e-12);
    }
}
