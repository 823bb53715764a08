use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseMatrix};
use crate::problem::DoubleSaddleProblem;

/// Sign convention of the assembled 3×3 block matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockLayout {
    /// `[A Bᵀ Cᵀ; B 0 0; C 0 -D]`
    Symmetric,
    /// `[A Bᵀ Cᵀ; -B 0 0; -C 0 D]`
    Unsymmetric,
}

/// Matrix-free view of the full system matrix built on the stored blocks.
#[derive(Debug, Clone, Copy)]
pub struct AssembledOperator<'a> {
    problem: &'a DoubleSaddleProblem,
    layout: BlockLayout,
}

impl<'a> AssembledOperator<'a> {
    pub fn new(problem: &'a DoubleSaddleProblem, layout: BlockLayout) -> Self {
        Self { problem, layout }
    }

    pub fn dim(&self) -> usize {
        self.problem.dim()
    }

    pub fn layout(&self) -> BlockLayout {
        self.layout
    }

    /// `out = 𝒜 w`; both slices must have length `n + m + p`.
    pub fn apply(&self, w: &[f64], out: &mut [f64]) {
        let pr = self.problem;
        let (n, m) = (pr.n(), pr.m());
        let (x, rest) = w.split_at(n);
        let (y, z) = rest.split_at(m);
        let (ox, orest) = out.split_at_mut(n);
        let (oy, oz) = orest.split_at_mut(m);

        pr.a().spmv_into(x, ox);
        pr.b().spmv_transpose_add(1.0, y, ox);
        pr.c().spmv_transpose_add(1.0, z, ox);

        let sign = match self.layout {
            BlockLayout::Symmetric => 1.0,
            BlockLayout::Unsymmetric => -1.0,
        };
        pr.b().spmv_into(x, oy);
        pr.c().spmv_into(x, oz);
        pr.d().spmv_add(-1.0, z, oz);
        if sign < 0.0 {
            oy.iter_mut().chain(oz.iter_mut()).for_each(|v| *v = -*v);
        }
    }

    pub fn apply_vec(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator of order {} applied to vector of length {}",
                self.dim(),
                w.len()
            )));
        }
        let mut out = vec![0.0; self.dim()];
        self.apply(w, &mut out);
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        let mut d = DenseMatrix::zeros(n, n);
        for j in 0..n {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            for (i, &v) in col.iter().enumerate() {
                d[(i, j)] = v;
            }
            e[j] = 0.0;
        }
        d
    }
}

/// Residual `‖b − 𝒜w‖₂ / ‖b‖₂`, or the absolute residual when `b = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualNorm {
    pub value: f64,
    pub relative: bool,
}

pub fn residual_norm(problem: &DoubleSaddleProblem, w: &[f64]) -> Result<ResidualNorm> {
    let aw = problem.assemble(BlockLayout::Symmetric).apply_vec(w)?;
    let b = problem.rhs();
    let r: Vec<f64> = b.iter().zip(&aw).map(|(bi, ai)| bi - ai).collect();
    let bn = norm2(&b);
    let rn = norm2(&r);
    Ok(if bn > 0.0 {
        ResidualNorm {
            value: rn / bn,
            relative: true,
        }
    } else {
        ResidualNorm {
            value: rn,
            relative: false,
        }
    })
}
