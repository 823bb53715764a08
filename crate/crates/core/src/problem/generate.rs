//! Seeded generators for desk-scale test problems.
//!
//! All generators plant a known solution `w*` and set `b = 𝒜 w*`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, SpdFactor};
use crate::problem::spectral::coupled_extremes;
use crate::problem::{dense_schur, DoubleSaddleProblem};

const RANK_RETRIES: usize = 10;

/// Choice of the SPD weighting block `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PChoice {
    /// `P = B A⁻¹ Bᵀ`, the library default.
    #[default]
    Schur,
    /// `P = diag(B A⁻¹ Bᵀ)`.
    SchurDiagonal,
    Identity,
}

/// Shape parameters for [`generate_synthetic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    /// Interval that contains the spectrum of `A`.
    pub a_range: (f64, f64),
    /// Rescale `C` so that `nu_max` hits this value.
    pub nu_target: Option<f64>,
    pub p_choice: PChoice,
}

impl SyntheticSpec {
    pub fn new(n: usize, m: usize, p: usize) -> Self {
        Self {
            n,
            m,
            p,
            a_range: (1.0, 4.0),
            nu_target: None,
            p_choice: PChoice::Schur,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Liquid-crystal-like: `n = 3N`, `m = p = N`, tridiagonal `A`, `nu_max < 1`.
    LcLike,
    /// Stokes–Darcy-like: `n = 2(2N+1)²`, `m = (N+1)²`, `p = (2N+1)²`, `nu_max > 1`.
    DarcyLike,
}

/// `nu_max` the lc-like family is tuned to.
pub const LC_NU_TARGET: f64 = 0.1750;
/// `nu_max` the darcy-like family is tuned to.
pub const DARCY_NU_TARGET: f64 = 1.0057;

impl Family {
    pub fn dims(self, size: usize) -> (usize, usize, usize) {
        match self {
            Family::LcLike => (3 * size, size, size),
            Family::DarcyLike => {
                let k = 2 * size + 1;
                (2 * k * k, (size + 1) * (size + 1), k * k)
            }
        }
    }
}

/// Symmetric tridiagonal matrix whose Gershgorin discs lie in `[lo, hi]`.
fn random_tridiagonal(rng: &mut ChaCha8Rng, n: usize, (lo, hi): (f64, f64)) -> SparseMatrix {
    let s = (hi - lo) / 8.0;
    let mut t = Vec::with_capacity(3 * n);
    for i in 0..n {
        t.push((i, i, rng.random_range(lo + 2.0 * s..=hi - 2.0 * s)));
        if i + 1 < n {
            let e = rng.random_range(-s..=s);
            t.push((i, i + 1, e));
            t.push((i + 1, i, e));
        }
    }
    SparseMatrix::from_triplets(n, n, &t).expect("indices in range")
}

fn nonzero(rng: &mut ChaCha8Rng) -> f64 {
    let v = rng.random_range(0.5..1.5);
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Sparse `m×n` block with pivots in increasing columns plus a few random
/// entries. Square inputs get a forced upper bidiagonal pattern.
fn random_constraint(rng: &mut ChaCha8Rng, m: usize, n: usize) -> SparseMatrix {
    let mut t = Vec::new();
    if m == n {
        for i in 0..m {
            t.push((i, i, nonzero(rng)));
            if i + 1 < n {
                t.push((i, i + 1, rng.random_range(-1.0..1.0)));
            }
        }
    } else {
        for i in 0..m {
            let pivot = i * n / m;
            t.push((i, pivot, nonzero(rng)));
            for _ in 0..2 {
                t.push((i, rng.random_range(0..n), rng.random_range(-0.5..0.5)));
            }
        }
    }
    SparseMatrix::from_triplets(m, n, &t).expect("indices in range")
}

fn random_coupling(rng: &mut ChaCha8Rng, p: usize, n: usize, per_row: usize) -> SparseMatrix {
    let mut t = Vec::new();
    for i in 0..p {
        for _ in 0..per_row {
            t.push((i, rng.random_range(0..n), rng.random_range(-1.0..1.0)));
        }
    }
    // guarantee every row is nonzero so nu_max > 0 and rescaling is possible
    for i in 0..p {
        t.push((i, (i * 7919) % n, nonzero(rng)));
    }
    SparseMatrix::from_triplets(p, n, &t).expect("indices in range")
}

fn random_solution(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn rescale_coupling(
    c: SparseMatrix,
    a: &SparseMatrix,
    d: &SparseMatrix,
    target: f64,
) -> Result<SparseMatrix> {
    let af = SpdFactor::factor(a)?;
    let df = SpdFactor::factor(d)?;
    let nu = coupled_extremes(&af, &c, &df).largest;
    if !(nu > 0.0) {
        return Err(Error::InvalidParameter(
            "C is zero; cannot tune nu_max".into(),
        ));
    }
    Ok(c.scaled((target / nu).sqrt()))
}

fn build_p(choice: PChoice, a: &SparseMatrix, b: &SparseMatrix) -> Result<Option<SparseMatrix>> {
    Ok(match choice {
        PChoice::Schur => None,
        PChoice::Identity => Some(SparseMatrix::identity(b.rows())),
        PChoice::SchurDiagonal => {
            let s = dense_schur(b, &SpdFactor::factor(a)?);
            Some(SparseMatrix::from_diagonal(&s.diagonal()))
        }
    })
}

/// Retries the constructor while it reports a rank-deficient `B`.
fn assemble_with_retries<F>(
    rng: &mut ChaCha8Rng,
    mut build_b: F,
    a: SparseMatrix,
    c: SparseMatrix,
    d: SparseMatrix,
    p_choice: PChoice,
) -> Result<DoubleSaddleProblem>
where
    F: FnMut(&mut ChaCha8Rng) -> SparseMatrix,
{
    let (n, pd) = (a.rows(), d.rows());
    for _ in 0..RANK_RETRIES {
        let b = build_b(rng);
        let m = b.rows();
        let p = build_p(p_choice, &a, &b)?;
        match DoubleSaddleProblem::new(
            a.clone(),
            b,
            c.clone(),
            d.clone(),
            p,
            vec![0.0; n],
            vec![0.0; m],
            vec![0.0; pd],
        ) {
            Ok(problem) => {
                let w = random_solution(rng, problem.dim());
                return problem.with_planted_solution(w);
            }
            Err(Error::RankDeficient) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RankDeficient)
}

/// Random sparse problem with tridiagonal `A` and diagonal-plus-tridiagonal `D`.
pub fn generate_synthetic(seed: u64, spec: &SyntheticSpec) -> Result<DoubleSaddleProblem> {
    let SyntheticSpec {
        n,
        m,
        p,
        a_range,
        nu_target,
        p_choice,
    } = *spec;
    if m > n {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds n = {n}")));
    }
    if n == 0 || m == 0 || p == 0 {
        return Err(Error::InvalidParameter(
            "block dimensions must be positive".into(),
        ));
    }
    if !(a_range.0 > 0.0 && a_range.1 > a_range.0) {
        return Err(Error::InvalidParameter(
            "A spectrum range must satisfy 0 < lo < hi".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_tridiagonal(&mut rng, n, a_range);
    let d = random_tridiagonal(&mut rng, p, (1.0, 2.0));
    let mut c = random_coupling(&mut rng, p, n, 2);
    if let Some(target) = nu_target {
        c = rescale_coupling(c, &a, &d, target)?;
    }
    assemble_with_retries(&mut rng, |r| random_constraint(r, m, n), a, c, d, p_choice)
}

fn laplacian_2d(k: usize, shift: f64) -> Vec<(usize, usize, f64)> {
    let idx = |i: usize, j: usize| i * k + j;
    let mut t = Vec::new();
    for i in 0..k {
        for j in 0..k {
            t.push((idx(i, j), idx(i, j), 4.0 + shift));
            if i + 1 < k {
                t.push((idx(i, j), idx(i + 1, j), -1.0));
                t.push((idx(i + 1, j), idx(i, j), -1.0));
            }
            if j + 1 < k {
                t.push((idx(i, j), idx(i, j + 1), -1.0));
                t.push((idx(i, j + 1), idx(i, j), -1.0));
            }
        }
    }
    t
}

/// Problems whose block dimensions and sparsity mimic the two application
/// families. `size` must be at least 2.
pub fn generate_structured(seed: u64, size: usize, family: Family) -> Result<DoubleSaddleProblem> {
    if size < 2 {
        return Err(Error::InvalidParameter(format!(
            "size must be >= 2, got {size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, m, p) = family.dims(size);
    match family {
        Family::LcLike => {
            let a = random_tridiagonal(&mut rng, n, (1.0, 5.0));
            let d = random_tridiagonal(&mut rng, p, (1.0, 2.0));
            // node i owns unknowns (3i, 3i+1, 3i+2); the constraint row and the
            // coupling row act on the node and its neighbours
            let mut ct = Vec::new();
            for i in 0..p {
                ct.push((i, 3 * i + 2, nonzero(&mut rng)));
                if i > 0 {
                    ct.push((i, 3 * (i - 1) + 2, rng.random_range(-0.5..0.5)));
                }
                if i + 1 < p {
                    ct.push((i, 3 * (i + 1) + 2, rng.random_range(-0.5..0.5)));
                }
            }
            let c = SparseMatrix::from_triplets(p, n, &ct)?;
            let c = rescale_coupling(c, &a, &d, LC_NU_TARGET)?;
            let build_b = |r: &mut ChaCha8Rng| {
                let mut t = Vec::new();
                for i in 0..m {
                    for k in 0..3 {
                        t.push((i, 3 * i + k, nonzero(r)));
                    }
                }
                SparseMatrix::from_triplets(m, n, &t).expect("indices in range")
            };
            assemble_with_retries(&mut rng, build_b, a, c, d, PChoice::Schur)
        }
        Family::DarcyLike => {
            let k = 2 * size + 1;
            let block = k * k;
            let mut at = laplacian_2d(k, 0.5);
            at.extend(
                laplacian_2d(k, 0.5)
                    .into_iter()
                    .map(|(i, j, v)| (i + block, j + block, v)),
            );
            let a = SparseMatrix::from_triplets(n, n, &at)?;
            let d = random_tridiagonal(&mut rng, p, (0.5, 1.5));
            let mut ct = Vec::new();
            for i in 0..p {
                ct.push((i, i, nonzero(&mut rng)));
                ct.push((i, i + block, nonzero(&mut rng)));
            }
            let c = SparseMatrix::from_triplets(p, n, &ct)?;
            let c = rescale_coupling(c, &a, &d, DARCY_NU_TARGET)?;
            let build_b = |r: &mut ChaCha8Rng| random_constraint(r, m, n);
            assemble_with_retries(&mut rng, build_b, a, c, d, PChoice::Schur)
        }
    }
}
