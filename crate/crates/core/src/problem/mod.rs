//! The double saddle-point problem, its assembled operators and spectral data.

mod assemble;
pub mod generate;
pub mod io;
mod spectral;

use std::sync::OnceLock;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SparseMatrix, SpdFactor};
use crate::DENSE_THRESHOLD;

pub use assemble::{residual_norm, AssembledOperator, BlockLayout, ResidualNorm};
pub use generate::{generate_structured, generate_synthetic, Family, PChoice, SyntheticSpec};
pub use io::{export_mm, import_mm, Manifest};
pub use spectral::{spectral_data, SpectralData};

/// Where the `(2,2)` weighting matrix `P` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PSource {
    Supplied,
    /// `P = B A⁻¹ Bᵀ`, formed densely.
    DefaultSchur,
    /// Diagonal of `B A⁻¹ Bᵀ` estimated by random probing (large `m`).
    DefaultProbedDiagonal,
}

/// Blocks and right-hand side of
///
/// ```text
/// [ A  Bᵀ  Cᵀ ] [x]   [f]
/// [ B  0   0  ] [y] = [g]
/// [ C  0  -D  ] [z]   [h]
/// ```
///
/// Construction validates the SPD and rank assumptions and keeps the
/// factorizations of `A`, `P` and `D` for the solvers.
#[derive(Debug)]
pub struct DoubleSaddleProblem {
    a: SparseMatrix,
    b: SparseMatrix,
    c: SparseMatrix,
    d: SparseMatrix,
    p: SparseMatrix,
    p_source: PSource,
    f: Vec<f64>,
    g: Vec<f64>,
    h: Vec<f64>,
    planted: Option<Vec<f64>>,
    a_factor: SpdFactor,
    p_factor: SpdFactor,
    d_factor: SpdFactor,
    factor_seconds: f64,
    schur: OnceLock<Result<SpdFactor>>,
    d_schur: OnceLock<Result<SpdFactor>>,
}

impl DoubleSaddleProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: SparseMatrix,
        b: SparseMatrix,
        c: SparseMatrix,
        d: SparseMatrix,
        p: Option<SparseMatrix>,
        f: Vec<f64>,
        g: Vec<f64>,
        h: Vec<f64>,
    ) -> Result<Self> {
        let (n, m, pd) = (a.rows(), b.rows(), d.rows());
        if n == 0 || m == 0 || pd == 0 {
            return Err(Error::DimensionMismatch(
                "all three blocks must be non-empty".into(),
            ));
        }
        if m > n {
            return Err(Error::DimensionMismatch(format!("m = {m} exceeds n = {n}")));
        }
        let shape = |name: &str, mat: &SparseMatrix, r: usize, c: usize| {
            if mat.rows() != r || mat.cols() != c {
                Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {r}x{c}",
                    mat.rows(),
                    mat.cols()
                )))
            } else {
                Ok(())
            }
        };
        shape("A", &a, n, n)?;
        shape("B", &b, m, n)?;
        shape("C", &c, pd, n)?;
        shape("D", &d, pd, pd)?;
        if let Some(p) = &p {
            shape("P", p, m, m)?;
        }
        for (name, v, len) in [("f", &f, n), ("g", &g, m), ("h", &h, pd)] {
            if v.len() != len {
                return Err(Error::DimensionMismatch(format!(
                    "{name} has length {}, expected {len}",
                    v.len()
                )));
            }
        }

        let t0 = Instant::now();
        let a_factor = SpdFactor::factor(&a)?;
        let d_factor = SpdFactor::factor(&d)?;
        check_full_row_rank(&b, &a_factor)?;
        let (p, p_source) = match p {
            Some(p) => (p, PSource::Supplied),
            None => default_p(&b, &a_factor),
        };
        let p_factor = SpdFactor::factor(&p)?;
        let factor_seconds = t0.elapsed().as_secs_f64();

        Ok(Self {
            a,
            b,
            c,
            d,
            p,
            p_source,
            f,
            g,
            h,
            planted: None,
            a_factor,
            p_factor,
            d_factor,
            factor_seconds,
            schur: OnceLock::new(),
            d_schur: OnceLock::new(),
        })
    }

    /// Replaces the right-hand side with `A w` for the given solution and
    /// remembers it as the planted solution.
    pub fn with_planted_solution(mut self, w: Vec<f64>) -> Result<Self> {
        let rhs = self.assemble(BlockLayout::Symmetric).apply_vec(&w)?;
        let (n, m) = (self.n(), self.m());
        self.f = rhs[..n].to_vec();
        self.g = rhs[n..n + m].to_vec();
        self.h = rhs[n + m..].to_vec();
        self.planted = Some(w);
        Ok(self)
    }

    /// Attaches a reference solution without touching the right-hand side.
    pub(crate) fn with_known_solution(mut self, w: Vec<f64>) -> Self {
        self.planted = Some(w);
        self
    }

    pub fn with_rhs(mut self, rhs: &[f64]) -> Result<Self> {
        if rhs.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "rhs has length {}, expected {}",
                rhs.len(),
                self.dim()
            )));
        }
        let (n, m) = (self.n(), self.m());
        self.f = rhs[..n].to_vec();
        self.g = rhs[n..n + m].to_vec();
        self.h = rhs[n + m..].to_vec();
        self.planted = None;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }
    pub fn m(&self) -> usize {
        self.b.rows()
    }
    pub fn p_dim(&self) -> usize {
        self.d.rows()
    }
    /// `n + m + p`
    pub fn dim(&self) -> usize {
        self.n() + self.m() + self.p_dim()
    }

    pub fn a(&self) -> &SparseMatrix {
        &self.a
    }
    pub fn b(&self) -> &SparseMatrix {
        &self.b
    }
    pub fn c(&self) -> &SparseMatrix {
        &self.c
    }
    pub fn d(&self) -> &SparseMatrix {
        &self.d
    }
    pub fn p(&self) -> &SparseMatrix {
        &self.p
    }
    pub fn p_source(&self) -> PSource {
        self.p_source
    }
    pub fn f(&self) -> &[f64] {
        &self.f
    }
    pub fn g(&self) -> &[f64] {
        &self.g
    }
    pub fn h(&self) -> &[f64] {
        &self.h
    }
    pub fn planted_solution(&self) -> Option<&[f64]> {
        self.planted.as_deref()
    }

    /// `b = (f, g, h)` of the symmetric system.
    pub fn rhs(&self) -> Vec<f64> {
        [self.f.as_slice(), &self.g, &self.h].concat()
    }

    /// `b̂ = (f, -g, -h)` of the unsymmetric system.
    pub fn rhs_unsymmetric(&self) -> Vec<f64> {
        self.f
            .iter()
            .copied()
            .chain(self.g.iter().map(|v| -v))
            .chain(self.h.iter().map(|v| -v))
            .collect()
    }

    pub fn a_factor(&self) -> &SpdFactor {
        &self.a_factor
    }
    pub fn p_factor(&self) -> &SpdFactor {
        &self.p_factor
    }
    pub fn d_factor(&self) -> &SpdFactor {
        &self.d_factor
    }

    /// Seconds spent factoring `A`, `D` and `P` (and forming a default `P`).
    pub fn factor_seconds(&self) -> f64 {
        self.factor_seconds
    }

    pub fn assemble(&self, layout: BlockLayout) -> AssembledOperator<'_> {
        AssembledOperator::new(self, layout)
    }

    /// Factor of the Schur complement `B A⁻¹ Bᵀ`, formed densely on first use.
    pub fn schur_factor(&self) -> Result<&SpdFactor> {
        self.schur
            .get_or_init(|| {
                check_dense(self.m())?;
                SpdFactor::factor(&dense_schur(&self.b, &self.a_factor))
            })
            .as_ref()
            .map_err(clone_err)
    }

    /// Factor of `D + C A⁻¹ Cᵀ`, formed densely on first use.
    pub fn d_schur_factor(&self) -> Result<&SpdFactor> {
        self.d_schur
            .get_or_init(|| {
                check_dense(self.p_dim())?;
                let mut s = dense_schur(&self.c, &self.a_factor).to_dense();
                for (i, j, v) in self.d.triplets() {
                    s[(i, j)] += v;
                }
                SpdFactor::factor(&SparseMatrix::from_dense(&s, 0.0))
            })
            .as_ref()
            .map_err(clone_err)
    }
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::NotPositiveDefinite { row, pivot } => Error::NotPositiveDefinite {
            row: *row,
            pivot: *pivot,
        },
        Error::DenseThresholdExceeded { order, threshold } => Error::DenseThresholdExceeded {
            order: *order,
            threshold: *threshold,
        },
        other => Error::InvalidParameter(other.to_string()),
    }
}

fn check_dense(order: usize) -> Result<()> {
    if order > DENSE_THRESHOLD {
        Err(Error::DenseThresholdExceeded {
            order,
            threshold: DENSE_THRESHOLD,
        })
    } else {
        Ok(())
    }
}

/// `K A⁻¹ Kᵀ` for a coupling block `K`, symmetrized to remove round-off.
pub(crate) fn dense_schur(k: &SparseMatrix, a_factor: &SpdFactor) -> SparseMatrix {
    let rows = k.rows();
    let mut s = DenseMatrix::zeros(rows, rows);
    let mut col = vec![0.0; k.cols()];
    let mut out = vec![0.0; rows];
    for i in 0..rows {
        col.fill(0.0);
        let (cols, vals) = k.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            col[j] = v;
        }
        a_factor.solve_in_place(&mut col);
        k.spmv_into(&col, &mut out);
        for (r, &v) in out.iter().enumerate() {
            s[(r, i)] = v;
        }
    }
    for i in 0..rows {
        for j in 0..i {
            let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = avg;
            s[(j, i)] = avg;
        }
    }
    SparseMatrix::from_dense(&s, 0.0)
}

const PROBES: usize = 64;

/// Stochastic estimate of `diag(B A⁻¹ Bᵀ)` from Rademacher probes.
fn probed_schur_diagonal(b: &SparseMatrix, a_factor: &SpdFactor) -> Vec<f64> {
    let m = b.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1a6);
    let mut num = vec![0.0; m];
    let mut den = vec![0.0; m];
    let mut u = vec![0.0; b.cols()];
    let mut s = vec![0.0; m];
    for _ in 0..PROBES {
        let v: Vec<f64> = (0..m)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        u.fill(0.0);
        b.spmv_transpose_add(1.0, &v, &mut u);
        a_factor.solve_in_place(&mut u);
        b.spmv_into(&u, &mut s);
        for i in 0..m {
            num[i] += v[i] * s[i];
            den[i] += v[i] * v[i];
        }
    }
    // floor keeps P SPD when probing noise dominates a small diagonal entry
    (0..m)
        .map(|i| {
            let est = num[i] / den[i];
            let (_, vals) = b.row(i);
            let floor = 1e-8 * vals.iter().map(|v| v * v).sum::<f64>();
            est.max(floor)
        })
        .collect()
}

fn default_p(b: &SparseMatrix, a_factor: &SpdFactor) -> (SparseMatrix, PSource) {
    if b.rows() <= DENSE_THRESHOLD {
        (dense_schur(b, a_factor), PSource::DefaultSchur)
    } else {
        (
            SparseMatrix::from_diagonal(&probed_schur_diagonal(b, a_factor)),
            PSource::DefaultProbedDiagonal,
        )
    }
}

const RANK_TOL: f64 = 1e-10;

/// Column-pivoted QR of `Bᵀ` at desk scale, otherwise a Cholesky test of
/// `B A⁻¹ Bᵀ`.
fn check_full_row_rank(b: &SparseMatrix, a_factor: &SpdFactor) -> Result<()> {
    let m = b.rows();
    if m <= DENSE_THRESHOLD {
        let mut bt = DMatrix::<f64>::zeros(b.cols(), m);
        for (i, j, v) in b.triplets() {
            bt[(j, i)] = v;
        }
        let qr = bt.col_piv_qr();
        let r = qr.unpack_r();
        let diag: Vec<f64> = (0..m).map(|i| r[(i, i)].abs()).collect();
        let max = diag.iter().fold(0.0f64, |a, &v| a.max(v));
        if max == 0.0 || diag.iter().any(|&v| v <= RANK_TOL * max) {
            return Err(Error::RankDeficient);
        }
        Ok(())
    } else {
        SpdFactor::factor(&dense_schur(b, a_factor))
            .map(|_| ())
            .map_err(|_| Error::RankDeficient)
    }
}
