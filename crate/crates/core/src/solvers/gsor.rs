use crate::error::Result;
use crate::linalg::CountingSolver;
use crate::problem::DoubleSaddleProblem;

use super::{initial_guess, run_stationary, GsorParams, SolveOptions, SolveReport, Stepper};

/// In-place GSOR sweep over `(x, y, z)`:
///
/// ```text
/// x ← x + ω A⁻¹ (f − A x − Bᵀ y − Cᵀ z)
/// y ← y + τ P⁻¹ (B x − g)
/// z ← z + θ D⁻¹ (C x − D z − h)
/// ```
///
/// The `y` and `z` updates use the new `x`.
pub struct GsorStepper<'a> {
    problem: &'a DoubleSaddleProblem,
    params: GsorParams,
    a: CountingSolver<'a>,
    p: CountingSolver<'a>,
    d: CountingSolver<'a>,
    rx: Vec<f64>,
    ry: Vec<f64>,
    rz: Vec<f64>,
}

impl<'a> GsorStepper<'a> {
    pub fn new(problem: &'a DoubleSaddleProblem, params: GsorParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            problem,
            params,
            a: CountingSolver::new(problem.a_factor()),
            p: CountingSolver::new(problem.p_factor()),
            d: CountingSolver::new(problem.d_factor()),
            rx: vec![0.0; problem.n()],
            ry: vec![0.0; problem.m()],
            rz: vec![0.0; problem.p_dim()],
        })
    }

    pub fn step(&mut self, w: &mut [f64]) {
        let pr = self.problem;
        let GsorParams { omega, tau, theta } = self.params;
        let (n, m) = (pr.n(), pr.m());
        let (x, rest) = w.split_at_mut(n);
        let (y, z) = rest.split_at_mut(m);

        self.rx.copy_from_slice(pr.f());
        pr.a().spmv_add(-1.0, x, &mut self.rx);
        pr.b().spmv_transpose_add(-1.0, y, &mut self.rx);
        pr.c().spmv_transpose_add(-1.0, z, &mut self.rx);
        self.a.solve_in_place(&mut self.rx);
        for (xi, r) in x.iter_mut().zip(&self.rx) {
            *xi += omega * r;
        }

        pr.b().spmv_into(x, &mut self.ry);
        for (r, g) in self.ry.iter_mut().zip(pr.g()) {
            *r -= g;
        }
        self.p.solve_in_place(&mut self.ry);
        for (yi, r) in y.iter_mut().zip(&self.ry) {
            *yi += tau * r;
        }

        pr.c().spmv_into(x, &mut self.rz);
        pr.d().spmv_add(-1.0, z, &mut self.rz);
        for (r, h) in self.rz.iter_mut().zip(pr.h()) {
            *r -= h;
        }
        self.d.solve_in_place(&mut self.rz);
        for (zi, r) in z.iter_mut().zip(&self.rz) {
            *zi += theta * r;
        }
    }

    /// Total SPD solves performed so far.
    pub fn inner_solves(&self) -> usize {
        self.a.count() + self.p.count() + self.d.count()
    }
}

impl Stepper for GsorStepper<'_> {
    fn step(&mut self, w: &mut [f64]) {
        GsorStepper::step(self, w)
    }
    fn inner_solves(&self) -> usize {
        GsorStepper::inner_solves(self)
    }
}

/// Runs GSOR from `w0` (zero when `None`).
pub fn gsor_solve(
    problem: &DoubleSaddleProblem,
    params: GsorParams,
    opts: &SolveOptions,
    w0: Option<&[f64]>,
) -> Result<(Vec<f64>, SolveReport)> {
    let w = initial_guess(problem, w0)?;
    let mut stepper = GsorStepper::new(problem, params)?;
    run_stationary(problem, &mut stepper, opts, w)
}

/// The Uzawa-like method: GSOR with `ω = θ = 1`.
pub fn uzawa_solve(
    problem: &DoubleSaddleProblem,
    tau: f64,
    opts: &SolveOptions,
    w0: Option<&[f64]>,
) -> Result<(Vec<f64>, SolveReport)> {
    gsor_solve(problem, GsorParams::new(1.0, tau, 1.0)?, opts, w0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseMatrix;
    use crate::solvers::SolveStatus;

    fn scalar() -> DoubleSaddleProblem {
        let one = |v: f64| SparseMatrix::from_diagonal(&[v]);
        DoubleSaddleProblem::new(
            one(2.0),
            one(1.0),
            one(1.0),
            one(1.0),
            Some(one(1.0)),
            vec![2.0],
            vec![0.0],
            vec![0.0],
        )
        .unwrap()
    }

    #[test]
    fn first_scalar_iterate() {
        let p = scalar();
        let mut s = GsorStepper::new(&p, GsorParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        let mut w = vec![0.0; 3];
        s.step(&mut w);
        assert_eq!(w, vec![1.0, 1.0, 1.0]);
        assert_eq!(s.inner_solves(), 3);
    }

    #[test]
    fn scalar_uzawa_converges() {
        let (w, r) = uzawa_solve(&scalar(), 1.0, &SolveOptions::default(), None).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!((w[1] - 2.0).abs() < 1e-7);
        assert_eq!(r.inner_solves, 3 * r.iterations);
    }

    #[test]
    fn exact_start_takes_zero_iterations() {
        let (_, r) = gsor_solve(
            &scalar(),
            GsorParams::new(0.5, 1.0, 1.0).unwrap(),
            &SolveOptions::default(),
            Some(&[0.0, 2.0, 0.0]),
        )
        .unwrap();
        assert_eq!(
            (r.status, r.iterations, r.inner_solves),
            (SolveStatus::Converged, 0, 0)
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GsorParams::new(0.0, 1.0, 1.0).is_err());
        assert!(GsorParams::new(1.0, f64::NAN, 1.0).is_err());
        assert!(uzawa_solve(&scalar(), -1.0, &SolveOptions::default(), None).is_err());
    }

    #[test]
    fn history_has_one_entry_per_iteration_plus_one() {
        let opts = SolveOptions {
            record_history: true,
            ..Default::default()
        };
        let (_, r) = uzawa_solve(&scalar(), 1.0, &opts, None).unwrap();
        let h = r.history.as_ref().unwrap();
        assert_eq!(h.len(), r.iterations + 1);
        assert_eq!(h[0], 1.0);
        assert!(r
            .history_csv()
            .unwrap()
            .starts_with("iteration,res\n0,1e0\n"));
    }
}
