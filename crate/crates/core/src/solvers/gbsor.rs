use crate::error::{Error, Result};
use crate::linalg::CountingSolver;
use crate::problem::{DoubleSaddleProblem, SpectralData};

use super::{initial_guess, run_stationary, SolveOptions, SolveReport, Stepper};

/// `s = 2 / (1 + √ν_max)`, the upper end of the GBSOR convergence interval.
pub fn gbsor_omega_bound(spectral: &SpectralData) -> f64 {
    2.0 / (1.0 + spectral.nu_max.sqrt())
}

/// `s / 2`
pub fn gbsor_default_omega(spectral: &SpectralData) -> f64 {
    0.5 * gbsor_omega_bound(spectral)
}

/// GBSOR step for the splitting with
/// `M = (1/ω) [A Bᵀ 0; B 0 0; ωC 0 −D]`.
///
/// The `(x, y)` block is solved through the Schur complement `S = B A⁻¹ Bᵀ`:
///
/// ```text
/// y ← S⁻¹ (B A⁻¹ r₁ − r₂)
/// x ← A⁻¹ (r₁ − Bᵀ y)
/// z ← D⁻¹ (ω C x − r₃)
/// ```
///
/// with `r = ω (N w + b)`.
pub struct GbsorStepper<'a> {
    problem: &'a DoubleSaddleProblem,
    omega: f64,
    a: CountingSolver<'a>,
    s: CountingSolver<'a>,
    d: CountingSolver<'a>,
    r1: Vec<f64>,
    r2: Vec<f64>,
    r3: Vec<f64>,
    t: Vec<f64>,
}

impl<'a> GbsorStepper<'a> {
    pub fn new(problem: &'a DoubleSaddleProblem, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        Ok(Self {
            problem,
            omega,
            a: CountingSolver::new(problem.a_factor()),
            s: CountingSolver::new(problem.schur_factor()?),
            d: CountingSolver::new(problem.d_factor()),
            r1: vec![0.0; problem.n()],
            r2: vec![0.0; problem.m()],
            r3: vec![0.0; problem.p_dim()],
            t: vec![0.0; problem.n()],
        })
    }

    pub fn step(&mut self, w: &mut [f64]) {
        let pr = self.problem;
        let om = self.omega;
        let (n, m) = (pr.n(), pr.m());
        let (x, rest) = w.split_at_mut(n);
        let (y, z) = rest.split_at_mut(m);

        // r₁ = (1−ω)(A x + Bᵀ y) − ω Cᵀ z + ω f
        pr.a().spmv_into(x, &mut self.r1);
        pr.b().spmv_transpose_add(1.0, y, &mut self.r1);
        for (r, f) in self.r1.iter_mut().zip(pr.f()) {
            *r = (1.0 - om) * *r + om * f;
        }
        pr.c().spmv_transpose_add(-om, z, &mut self.r1);
        // r₂ = (1−ω) B x + ω g
        pr.b().spmv_into(x, &mut self.r2);
        for (r, g) in self.r2.iter_mut().zip(pr.g()) {
            *r = (1.0 - om) * *r + om * g;
        }
        // r₃ = −(1−ω) D z + ω h
        pr.d().spmv_into(z, &mut self.r3);
        for (r, h) in self.r3.iter_mut().zip(pr.h()) {
            *r = -(1.0 - om) * *r + om * h;
        }

        self.t.copy_from_slice(&self.r1);
        self.a.solve_in_place(&mut self.t);
        pr.b().spmv_into(&self.t, y);
        for (yi, r) in y.iter_mut().zip(&self.r2) {
            *yi -= r;
        }
        self.s.solve_in_place(y);

        x.copy_from_slice(&self.r1);
        pr.b().spmv_transpose_add(-1.0, y, x);
        self.a.solve_in_place(x);

        pr.c().spmv_into(x, z);
        for (zi, r) in z.iter_mut().zip(&self.r3) {
            *zi = om * *zi - r;
        }
        self.d.solve_in_place(z);
    }

    pub fn inner_solves(&self) -> usize {
        self.a.count() + self.s.count() + self.d.count()
    }
}

impl Stepper for GbsorStepper<'_> {
    fn step(&mut self, w: &mut [f64]) {
        GbsorStepper::step(self, w)
    }
    fn inner_solves(&self) -> usize {
        GbsorStepper::inner_solves(self)
    }
}

pub fn gbsor_solve(
    problem: &DoubleSaddleProblem,
    omega: f64,
    opts: &SolveOptions,
    w0: Option<&[f64]>,
) -> Result<(Vec<f64>, SolveReport)> {
    let w = initial_guess(problem, w0)?;
    let mut stepper = GbsorStepper::new(problem, omega)?;
    run_stationary(problem, &mut stepper, opts, w)
}
