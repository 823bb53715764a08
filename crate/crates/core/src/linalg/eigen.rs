//! Eigenvalue utilities: dense oracles and a Lanczos extremal estimator.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, DenseMatrix};
use crate::DENSE_THRESHOLD;

pub type C64 = nalgebra::Complex<f64>;

fn check_dense_square(m: &DenseMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > DENSE_THRESHOLD {
        return Err(Error::DenseThresholdExceeded {
            order: m.rows(),
            threshold: DENSE_THRESHOLD,
        });
    }
    Ok(())
}

/// All eigenvalues of a general real matrix (Hessenberg QR with
/// aggressive early deflation).
pub fn dense_eigenvalues(m: &DenseMatrix) -> Result<Vec<C64>> {
    check_dense_square(m)?;
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    let a = faer::Mat::<f64>::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)]);
    let ev = a
        .eigenvalues()
        .map_err(|e| Error::EigenNoConvergence(format!("{e:?}")))?;
    Ok(ev.into_iter().map(|z| C64::new(z.re, z.im)).collect())
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn dense_symmetric_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    check_dense_square(m)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(m.to_nalgebra())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn spectral_radius(m: &DenseMatrix) -> Result<f64> {
    Ok(dense_eigenvalues(m)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    Largest,
    Smallest,
}

/// Result of an iterative extremal eigenvalue estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenEstimate {
    pub value: f64,
    pub converged: bool,
    pub matvecs: usize,
}

/// Both ends of the spectrum of a symmetric operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremePair {
    pub smallest: f64,
    pub largest: f64,
    pub converged: bool,
    pub matvecs: usize,
}

pub const EIGEN_REL_TOL: f64 = 1e-10;
const MAX_BASIS: usize = 300;
const MAX_RESTARTS: usize = 60;

/// Largest or smallest eigenvalue of the symmetric operator `apply` of order `dim`.
///
/// On iteration-cap exhaustion the best estimate is returned with
/// `converged = false`.
pub fn extremal_symmetric_eigenvalue<F>(apply: F, dim: usize, which: Extremal) -> EigenEstimate
where
    F: FnMut(&[f64], &mut [f64]),
{
    let pair = symmetric_extremes(apply, dim);
    let value = match which {
        Extremal::Largest => pair.largest,
        Extremal::Smallest => pair.smallest,
    };
    EigenEstimate {
        value,
        converged: pair.converged,
        matvecs: pair.matvecs,
    }
}

/// Lanczos with full reorthogonalization, restarted from the sum of the
/// two extreme Ritz vectors until both residuals fall below the tolerance.
pub fn symmetric_extremes<F>(mut apply: F, dim: usize) -> ExtremePair
where
    F: FnMut(&[f64], &mut [f64]),
{
    if dim == 0 {
        return ExtremePair {
            smallest: 0.0,
            largest: 0.0,
            converged: true,
            matvecs: 0,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1a2c);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let basis_cap = dim.min(MAX_BASIS);
    let mut matvecs = 0;
    let mut best = ExtremePair {
        smallest: 0.0,
        largest: 0.0,
        converged: false,
        matvecs: 0,
    };

    for _ in 0..MAX_RESTARTS {
        let nrm = norm2(&start);
        for v in start.iter_mut() {
            *v /= nrm;
        }
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        let mut invariant = false;

        loop {
            let j = basis.len() - 1;
            apply(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= c * qi;
                    }
                }
            }
            let b = norm2(&w);
            let scale = alpha
                .iter()
                .chain(&beta)
                .fold(0.0f64, |m, v| m.max(v.abs()));
            if b <= 1e-13 * scale.max(f64::MIN_POSITIVE) || b == 0.0 {
                invariant = true;
                break;
            }
            if basis.len() == basis_cap {
                beta.push(b);
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }

        let k = alpha.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (mut imin, mut imax) = (0, 0);
        for i in 0..k {
            if eig.eigenvalues[i] < eig.eigenvalues[imin] {
                imin = i;
            }
            if eig.eigenvalues[i] > eig.eigenvalues[imax] {
                imax = i;
            }
        }
        let lo = eig.eigenvalues[imin];
        let hi = eig.eigenvalues[imax];
        let scale = lo.abs().max(hi.abs());
        let res_of = |idx: usize| {
            if invariant {
                0.0
            } else {
                beta[k - 1] * eig.eigenvectors[(k - 1, idx)].abs()
            }
        };
        let tol = EIGEN_REL_TOL * scale;
        let converged = scale == 0.0 || (res_of(imin) <= tol && res_of(imax) <= tol);
        best = ExtremePair {
            smallest: lo,
            largest: hi,
            converged,
            matvecs,
        };
        if converged {
            return best;
        }

        let mut next = vec![0.0; dim];
        for (i, q) in basis.iter().enumerate().take(k) {
            let c = eig.eigenvectors[(i, imin)] + eig.eigenvectors[(i, imax)];
            for (ni, qi) in next.iter_mut().zip(q) {
                *ni += c * qi;
            }
        }
        if norm2(&next) == 0.0 {
            next = basis[0].clone();
        }
        start = next;
    }
    best
}
