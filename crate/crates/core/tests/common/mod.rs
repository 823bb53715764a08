//! Independent dense oracles and seeded problem suites shared by the
//! integration tests and the acceptance harness.
#![allow(dead_code)]

use faer::Mat;
use gsor::problem::{
    generate_synthetic, DoubleSaddleProblem, PChoice, SpectralData, SyntheticSpec,
};
use gsor::solvers::GsorParams;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C64 = nalgebra::Complex<f64>;

pub fn dense(m: &gsor::linalg::SparseMatrix) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(m.rows(), m.cols());
    for (i, j, v) in m.triplets() {
        d[(i, j)] += v;
    }
    d
}

/// Eigenvalues of `W⁻¹ K A⁻¹ Kᵀ` through the symmetric form
/// `L⁻¹ K A⁻¹ Kᵀ L⁻ᵀ`, `W = L Lᵀ`, all in dense nalgebra arithmetic.
fn coupled_eigs(a: &DMatrix<f64>, k: &DMatrix<f64>, w: &DMatrix<f64>) -> Vec<f64> {
    let a_inv_kt = a.clone().cholesky().expect("A SPD").solve(&k.transpose());
    let s = k * a_inv_kt;
    let l = w.clone().cholesky().expect("weight SPD").l();
    let li = l.try_inverse().unwrap();
    let mut sym = &li * s * li.transpose();
    sym = (&sym + sym.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Exact extremal spectral quantities from dense factorizations.
pub fn dense_spectral(p: &DoubleSaddleProblem) -> SpectralData {
    let a = dense(p.a());
    let mu = coupled_eigs(&a, &dense(p.b()), &dense(p.p()));
    let nu = coupled_eigs(&a, &dense(p.c()), &dense(p.d()));
    SpectralData::new(
        mu[0].max(0.0),
        *mu.last().unwrap(),
        nu.last().unwrap().max(0.0),
    )
}

/// Symmetric system matrix assembled from the blocks.
pub fn dense_system(p: &DoubleSaddleProblem) -> DMatrix<f64> {
    let (n, m, k) = (p.n(), p.m(), p.dim());
    let mut s = DMatrix::zeros(k, k);
    s.view_mut((0, 0), (n, n)).copy_from(&dense(p.a()));
    let b = dense(p.b());
    let c = dense(p.c());
    s.view_mut((n, 0), (m, n)).copy_from(&b);
    s.view_mut((0, n), (n, m)).copy_from(&b.transpose());
    s.view_mut((n + m, 0), (p.p_dim(), n)).copy_from(&c);
    s.view_mut((0, n + m), (n, p.p_dim()))
        .copy_from(&c.transpose());
    s.view_mut((n + m, n + m), (p.p_dim(), p.p_dim()))
        .copy_from(&(-dense(p.d())));
    s
}

/// `M⁻¹ N` for the splitting `M = [A/ω 0 0; B −P/τ 0; C 0 −D/θ]`, `N = M − 𝒜`.
pub fn dense_iteration_matrix(p: &DoubleSaddleProblem, params: GsorParams) -> DMatrix<f64> {
    let (n, m, k) = (p.n(), p.m(), p.dim());
    let mut mm = DMatrix::zeros(k, k);
    mm.view_mut((0, 0), (n, n))
        .copy_from(&(dense(p.a()) / params.omega));
    mm.view_mut((n, 0), (m, n)).copy_from(&dense(p.b()));
    mm.view_mut((n, n), (m, m))
        .copy_from(&(-dense(p.p()) / params.tau));
    mm.view_mut((n + m, 0), (p.p_dim(), n))
        .copy_from(&dense(p.c()));
    mm.view_mut((n + m, n + m), (p.p_dim(), p.p_dim()))
        .copy_from(&(-dense(p.d()) / params.theta));
    let nn = &mm - dense_system(p);
    mm.lu().solve(&nn).expect("M nonsingular")
}

/// `𝒫⁻¹𝒜` with `𝒫 = [A 0 0; B −P/τ 0; C 0 −D/θ]`.
pub fn dense_preconditioned(p: &DoubleSaddleProblem, tau: f64, theta: f64) -> DMatrix<f64> {
    let (n, m, k) = (p.n(), p.m(), p.dim());
    let mut pc = DMatrix::zeros(k, k);
    pc.view_mut((0, 0), (n, n)).copy_from(&dense(p.a()));
    pc.view_mut((n, 0), (m, n)).copy_from(&dense(p.b()));
    pc.view_mut((n, n), (m, m))
        .copy_from(&(-dense(p.p()) / tau));
    pc.view_mut((n + m, 0), (p.p_dim(), n))
        .copy_from(&dense(p.c()));
    pc.view_mut((n + m, n + m), (p.p_dim(), p.p_dim()))
        .copy_from(&(-dense(p.d()) / theta));
    pc.lu()
        .solve(&dense_system(p))
        .expect("preconditioner nonsingular")
}

pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<C64> {
    let a = Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    a.eigenvalues()
        .expect("dense eigenvalues")
        .into_iter()
        .map(|z| C64::new(z.re, z.im))
        .collect()
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    eigenvalues(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Order `n + m + p` drawn from `orders`, with `nu_max` regime, `P` choice
/// and the spectrum of `A` all varied.
pub fn random_problem(seed: u64, orders: (usize, usize)) -> DoubleSaddleProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let order = rng.random_range(orders.0..=orders.1);
    let n = rng.random_range(order / 3..=order / 2).max(2);
    let m = rng.random_range(1..=(order - n - 1).min(n).max(1));
    let p = order - n - m;
    let mut spec = SyntheticSpec::new(n, m, p.max(1));
    spec.nu_target = [
        None,
        Some(0.05),
        Some(0.5),
        Some(0.95),
        Some(1.5),
        Some(4.0),
    ][rng.random_range(0..6)];
    spec.p_choice =
        [PChoice::Schur, PChoice::SchurDiagonal, PChoice::Identity][rng.random_range(0..3)];
    let hi = [2.0, 10.0, 100.0][rng.random_range(0..3)];
    spec.a_range = (1.0, hi);
    generate_synthetic(seed, &spec).expect("synthetic problem")
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Eigenvalues of the trailing block of `𝒫⁻¹𝒜`, which equals `W⁻¹ H` with
/// `W = diag(P/τ, D/θ)` and `H = G A⁻¹ Gᵀ + diag(0, D)`, `G = [B; C]`.
/// Computed from the symmetric form `L⁻¹ H L⁻ᵀ`, `W = L Lᵀ`, ascending.
pub fn trailing_block_eigenvalues(p: &DoubleSaddleProblem, tau: f64, theta: f64) -> Vec<f64> {
    let (n, m, q) = (p.n(), p.m(), p.p_dim());
    let mut g = DMatrix::zeros(m + q, n);
    g.view_mut((0, 0), (m, n)).copy_from(&dense(p.b()));
    g.view_mut((m, 0), (q, n)).copy_from(&dense(p.c()));
    let d = dense(p.d());
    let mut h = &g
        * dense(p.a())
            .cholesky()
            .expect("A SPD")
            .solve(&g.transpose());
    let mut hd = h.view_mut((m, m), (q, q));
    hd += &d;
    let mut w = DMatrix::zeros(m + q, m + q);
    w.view_mut((0, 0), (m, m)).copy_from(&(dense(p.p()) / tau));
    w.view_mut((m, m), (q, q)).copy_from(&(d / theta));
    let li = w.cholesky().expect("W SPD").l().try_inverse().unwrap();
    let sym = &li * h * li.transpose();
    let mut ev: Vec<f64> = ((&sym + sym.transpose()) * 0.5)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}
