//! Stationary iterations: GSOR, its Uzawa special case and GBSOR, plus the
//! dense iteration operator and splitting used to analyse them.

mod gbsor;
mod gsor;
mod operator;

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::problem::{BlockLayout, DoubleSaddleProblem};

pub use gbsor::{gbsor_default_omega, gbsor_omega_bound, gbsor_solve, GbsorStepper};
pub use gsor::{gsor_solve, uzawa_solve, GsorStepper};
pub use operator::{gsor_affine_constant, gsor_iteration_operator, splitting_matrices, Splitting};

/// Residuals above this are treated as divergence.
pub const DIVERGENCE_THRESHOLD: f64 = 1e8;

/// The three relaxation parameters `(ω, τ, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsorParams {
    pub omega: f64,
    pub tau: f64,
    pub theta: f64,
}

impl GsorParams {
    pub fn new(omega: f64, tau: f64, theta: f64) -> Result<Self> {
        let p = Self { omega, tau, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega", self.omega),
            ("tau", self.tau),
            ("theta", self.theta),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub record_history: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 100_000,
            record_history: false,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    MaxIter,
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub iterations: usize,
    pub final_res: f64,
    /// Residual after each iteration, starting with the initial guess.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub history: Option<Vec<f64>>,
    /// Seconds spent in the iteration loop.
    #[serde(skip)]
    pub wall_time: f64,
    /// Inner SPD solves performed by the loop.
    pub inner_solves: usize,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// `iteration,res` rows, or `None` when history was not recorded.
    pub fn history_csv(&self) -> Option<String> {
        let h = self.history.as_ref()?;
        let mut s = String::from("iteration,res\n");
        for (k, r) in h.iter().enumerate() {
            writeln!(s, "{k},{r:e}").unwrap();
        }
        Some(s)
    }
}

/// One step of a stationary method acting in place on `w = (x, y, z)`.
pub(crate) trait Stepper {
    fn step(&mut self, w: &mut [f64]);
    fn inner_solves(&self) -> usize;
}

/// Relative residual helper holding the rhs norm and a workspace.
pub(crate) struct ResidualMeter<'a> {
    problem: &'a DoubleSaddleProblem,
    b: Vec<f64>,
    scale: f64,
    work: Vec<f64>,
}

impl<'a> ResidualMeter<'a> {
    pub(crate) fn new(problem: &'a DoubleSaddleProblem) -> Self {
        let b = problem.rhs();
        let bn = norm2(&b);
        Self {
            problem,
            scale: if bn > 0.0 { bn } else { 1.0 },
            b,
            work: vec![0.0; problem.dim()],
        }
    }

    pub(crate) fn measure(&mut self, w: &[f64]) -> f64 {
        self.problem
            .assemble(BlockLayout::Symmetric)
            .apply(w, &mut self.work);
        let r2: f64 = self
            .b
            .iter()
            .zip(&self.work)
            .map(|(b, a)| (b - a) * (b - a))
            .sum();
        r2.sqrt() / self.scale
    }
}

pub(crate) fn initial_guess(problem: &DoubleSaddleProblem, w0: Option<&[f64]>) -> Result<Vec<f64>> {
    match w0 {
        None => Ok(vec![0.0; problem.dim()]),
        Some(w) if w.len() == problem.dim() => Ok(w.to_vec()),
        Some(w) => Err(Error::DimensionMismatch(format!(
            "initial guess has length {}, expected {}",
            w.len(),
            problem.dim()
        ))),
    }
}

/// Shared driver: iterate until the true relative residual meets `tol`.
pub(crate) fn run_stationary<S: Stepper>(
    problem: &DoubleSaddleProblem,
    stepper: &mut S,
    opts: &SolveOptions,
    mut w: Vec<f64>,
) -> Result<(Vec<f64>, SolveReport)> {
    opts.validate()?;
    let t0 = Instant::now();
    let mut meter = ResidualMeter::new(problem);
    let mut res = meter.measure(&w);
    let mut history = opts.record_history.then(|| vec![res]);
    let mut iterations = 0;
    let status = loop {
        if !res.is_finite() || res > DIVERGENCE_THRESHOLD {
            break SolveStatus::Diverged;
        }
        if res <= opts.tol {
            break SolveStatus::Converged;
        }
        if iterations == opts.max_iter {
            break SolveStatus::MaxIter;
        }
        stepper.step(&mut w);
        iterations += 1;
        res = if w.iter().all(|v| v.is_finite()) {
            meter.measure(&w)
        } else {
            f64::NAN
        };
        if let Some(h) = history.as_mut() {
            h.push(res);
        }
    };
    let report = SolveReport {
        status,
        iterations,
        final_res: res,
        history,
        wall_time: t0.elapsed().as_secs_f64(),
        inner_solves: stepper.inner_solves(),
    };
    Ok((w, report))
}
