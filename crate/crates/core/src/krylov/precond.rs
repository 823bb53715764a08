use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SpdFactor};
use crate::problem::{BlockLayout, DoubleSaddleProblem};

/// Block preconditioners for the double saddle-point system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PreconditionerKind {
    /// `𝒫 = [A 0 0; B −P/τ 0; C 0 −D/θ]`, or its sign-flipped twin
    /// `[A 0 0; −B P/τ 0; −C 0 D/θ]` for the unsymmetric layout.
    GsorLowerTriangular {
        tau: f64,
        theta: f64,
    },
    /// `diag(A, B A⁻¹ Bᵀ, D + C A⁻¹ Cᵀ)`
    BlockDiagonal,
    /// `[A Bᵀ Cᵀ; 0 −B A⁻¹ Bᵀ 0; 0 0 −(D + C A⁻¹ Cᵀ)]`
    BlockTriangular,
    Identity,
}

impl PreconditionerKind {
    pub fn gsor(tau: f64, theta: f64) -> Self {
        PreconditionerKind::GsorLowerTriangular { tau, theta }
    }
}

/// Applies `v = M⁻¹ r`.
pub trait Preconditioner {
    fn dim(&self) -> usize;
    fn apply(&self, r: &[f64], v: &mut [f64]);
    /// Whether `M` is symmetric positive definite.
    fn is_spd(&self) -> bool;
}

/// A block preconditioner bound to one problem. Counts its inner SPD solves.
pub struct BlockPreconditioner<'a> {
    problem: &'a DoubleSaddleProblem,
    kind: PreconditionerKind,
    layout: BlockLayout,
    schur: Option<&'a SpdFactor>,
    d_schur: Option<&'a SpdFactor>,
    solves: Cell<usize>,
}

impl<'a> BlockPreconditioner<'a> {
    /// `layout` selects the sign convention of the GSOR kind; the other kinds
    /// are defined for the symmetric layout only.
    pub fn new(
        problem: &'a DoubleSaddleProblem,
        kind: PreconditionerKind,
        layout: BlockLayout,
    ) -> Result<Self> {
        let (mut schur, mut d_schur) = (None, None);
        match kind {
            PreconditionerKind::GsorLowerTriangular { tau, theta } => {
                for (name, v) in [("tau", tau), ("theta", theta)] {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::Preconditioner(format!(
                            "{name} must be positive, got {v}"
                        )));
                    }
                }
            }
            PreconditionerKind::BlockDiagonal | PreconditionerKind::BlockTriangular => {
                if layout != BlockLayout::Symmetric {
                    return Err(Error::Preconditioner(
                        "comparison preconditioners use the symmetric layout".into(),
                    ));
                }
                schur = Some(problem.schur_factor()?);
                d_schur = Some(problem.d_schur_factor()?);
            }
            PreconditionerKind::Identity => {}
        }
        Ok(Self {
            problem,
            kind,
            layout,
            schur,
            d_schur,
            solves: Cell::new(0),
        })
    }

    pub fn kind(&self) -> PreconditionerKind {
        self.kind
    }

    /// SPD solves performed so far.
    pub fn solve_count(&self) -> usize {
        self.solves.get()
    }

    fn solve(&self, f: &SpdFactor, b: &mut [f64]) {
        self.solves.set(self.solves.get() + 1);
        f.solve_in_place(b);
    }

    /// Dense `𝒫`, built column by column.
    pub fn to_dense(&self) -> DenseMatrix {
        let pr = self.problem;
        let (n, m, k) = (pr.n(), pr.m(), pr.dim());
        let mut out = DenseMatrix::zeros(k, k);
        let mut put =
            |mat: &crate::linalg::SparseMatrix, r0: usize, c0: usize, s: f64, tr: bool| {
                for (i, j, v) in mat.triplets() {
                    let (i, j) = if tr { (j, i) } else { (i, j) };
                    out[(r0 + i, c0 + j)] += s * v;
                }
            };
        match self.kind {
            PreconditionerKind::GsorLowerTriangular { tau, theta } => {
                let sg = if self.layout == BlockLayout::Symmetric {
                    1.0
                } else {
                    -1.0
                };
                put(pr.a(), 0, 0, 1.0, false);
                put(pr.b(), n, 0, sg, false);
                put(pr.p(), n, n, -sg / tau, false);
                put(pr.c(), n + m, 0, sg, false);
                put(pr.d(), n + m, n + m, -sg / theta, false);
            }
            PreconditionerKind::Identity => {
                for i in 0..k {
                    out[(i, i)] = 1.0;
                }
            }
            PreconditionerKind::BlockDiagonal | PreconditionerKind::BlockTriangular => {
                let s = crate::problem::dense_schur(pr.b(), pr.a_factor());
                let mut e = crate::problem::dense_schur(pr.c(), pr.a_factor()).to_dense();
                for (i, j, v) in pr.d().triplets() {
                    e[(i, j)] += v;
                }
                let e = crate::linalg::SparseMatrix::from_dense(&e, 0.0);
                put(pr.a(), 0, 0, 1.0, false);
                let sign = if self.kind == PreconditionerKind::BlockDiagonal {
                    1.0
                } else {
                    -1.0
                };
                put(&s, n, n, sign, false);
                put(&e, n + m, n + m, sign, false);
                if self.kind == PreconditionerKind::BlockTriangular {
                    put(pr.b(), 0, n, 1.0, true);
                    put(pr.c(), 0, n + m, 1.0, true);
                }
            }
        }
        out
    }
}

impl Preconditioner for BlockPreconditioner<'_> {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn is_spd(&self) -> bool {
        matches!(
            self.kind,
            PreconditionerKind::BlockDiagonal | PreconditionerKind::Identity
        )
    }

    fn apply(&self, r: &[f64], v: &mut [f64]) {
        let pr = self.problem;
        let (n, m) = (pr.n(), pr.m());
        v.copy_from_slice(r);
        let (v1, rest) = v.split_at_mut(n);
        let (v2, v3) = rest.split_at_mut(m);
        match self.kind {
            PreconditionerKind::Identity => {}
            PreconditionerKind::GsorLowerTriangular { tau, theta } => {
                // symmetric:   v₂ = τ P⁻¹ (B v₁ − r₂),  v₃ = θ D⁻¹ (C v₁ − r₃)
                // unsymmetric: v₂ = τ P⁻¹ (B v₁ + r₂),  v₃ = θ D⁻¹ (C v₁ + r₃)
                let sg = if self.layout == BlockLayout::Symmetric {
                    -1.0
                } else {
                    1.0
                };
                self.solve(pr.a_factor(), v1);
                v2.iter_mut().for_each(|x| *x *= sg);
                pr.b().spmv_add(1.0, v1, v2);
                self.solve(pr.p_factor(), v2);
                v2.iter_mut().for_each(|x| *x *= tau);
                v3.iter_mut().for_each(|x| *x *= sg);
                pr.c().spmv_add(1.0, v1, v3);
                self.solve(pr.d_factor(), v3);
                v3.iter_mut().for_each(|x| *x *= theta);
            }
            PreconditionerKind::BlockDiagonal => {
                self.solve(pr.a_factor(), v1);
                self.solve(self.schur.expect("built at construction"), v2);
                self.solve(self.d_schur.expect("built at construction"), v3);
            }
            PreconditionerKind::BlockTriangular => {
                self.solve(self.d_schur.expect("built at construction"), v3);
                v3.iter_mut().for_each(|x| *x = -*x);
                self.solve(self.schur.expect("built at construction"), v2);
                v2.iter_mut().for_each(|x| *x = -*x);
                pr.b().spmv_transpose_add(-1.0, v2, v1);
                pr.c().spmv_transpose_add(-1.0, v3, v1);
                self.solve(pr.a_factor(), v1);
            }
        }
    }
}
