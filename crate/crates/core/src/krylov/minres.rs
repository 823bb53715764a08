use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::solvers::{SolveReport, SolveStatus};

use super::{KrylovOptions, LinearOperator, Preconditioner, TrueResidual};

/// Preconditioned MINRES for a symmetric operator and an SPD preconditioner.
/// Stops on the true relative residual.
pub fn minres_solve(
    op: &dyn LinearOperator,
    precond: &dyn Preconditioner,
    b: &[f64],
    w0: Option<&[f64]>,
    opts: &KrylovOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    opts.validate()?;
    if !op.is_symmetric() {
        return Err(Error::InvalidParameter(
            "MINRES needs a symmetric operator".into(),
        ));
    }
    if !precond.is_spd() {
        return Err(Error::Preconditioner(
            "MINRES needs an SPD preconditioner".into(),
        ));
    }
    let n = op.dim();
    if b.len() != n || precond.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator order {n}, preconditioner order {}, rhs length {}",
            precond.dim(),
            b.len()
        )));
    }
    let t0 = Instant::now();
    let mut x = match w0 {
        Some(w) if w.len() == n => w.to_vec(),
        Some(w) => {
            return Err(Error::DimensionMismatch(format!(
                "initial guess has length {}, expected {n}",
                w.len()
            )))
        }
        None => vec![0.0; n],
    };
    let mut meter = TrueResidual::new(op, b);
    let mut res = meter.measure(&x);
    let mut history = opts.record_history.then(|| vec![res]);
    let mut iterations = 0;
    let finish = |status, iterations, res, history, x| {
        let report = SolveReport {
            status,
            iterations,
            final_res: res,
            history,
            wall_time: t0.elapsed().as_secs_f64(),
            inner_solves: 0,
        };
        Ok((x, report))
    };
    if res <= opts.tol {
        return finish(SolveStatus::Converged, 0, res, history, x);
    }

    let mut v_prev = vec![0.0; n];
    let mut v = vec![0.0; n];
    meter.residual(&x, &mut v);
    let mut z = vec![0.0; n];
    precond.apply(&v, &mut z);
    let mut gamma = dot(&z, &v);
    if gamma < 0.0 {
        return Err(Error::Preconditioner(
            "preconditioner is not positive definite".into(),
        ));
    }
    gamma = gamma.sqrt();
    let mut gamma_prev = 1.0;
    let mut eta = gamma;
    let (mut s_prev, mut s) = (0.0, 0.0);
    let (mut c_prev, mut c) = (1.0, 1.0);
    let mut w_prev = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut az = vec![0.0; n];
    let mut v_next = vec![0.0; n];
    let mut z_next = vec![0.0; n];

    let status = loop {
        if iterations >= opts.max_iter {
            break SolveStatus::MaxIter;
        }
        if gamma == 0.0 {
            // Krylov space exhausted; x is as good as it gets
            break if res <= opts.tol {
                SolveStatus::Converged
            } else {
                SolveStatus::MaxIter
            };
        }
        z.iter_mut().for_each(|t| *t /= gamma);
        op.apply(&z, &mut az);
        let delta = dot(&az, &z);
        for i in 0..n {
            v_next[i] = az[i] - (delta / gamma) * v[i] - (gamma / gamma_prev) * v_prev[i];
        }
        precond.apply(&v_next, &mut z_next);
        let g2 = dot(&z_next, &v_next);
        if g2 < 0.0 {
            return Err(Error::Preconditioner(
                "preconditioner is not positive definite".into(),
            ));
        }
        let gamma_next = g2.sqrt();

        let a0 = c * delta - c_prev * s * gamma;
        let a1 = a0.hypot(gamma_next);
        let a2 = s * delta + c_prev * c * gamma;
        let a3 = s_prev * gamma;
        let c_next = a0 / a1;
        let s_next = gamma_next / a1;
        for i in 0..n {
            let wn = (z[i] - a3 * w_prev[i] - a2 * w[i]) / a1;
            w_prev[i] = w[i];
            w[i] = wn;
        }
        for (xi, wi) in x.iter_mut().zip(&w) {
            *xi += c_next * eta * wi;
        }
        eta *= -s_next;
        iterations += 1;

        res = meter.measure(&x);
        if let Some(h) = history.as_mut() {
            h.push(res);
        }
        if !res.is_finite() {
            break SolveStatus::Diverged;
        }
        if res <= opts.tol {
            break SolveStatus::Converged;
        }

        std::mem::swap(&mut v_prev, &mut v);
        std::mem::swap(&mut v, &mut v_next);
        std::mem::swap(&mut z, &mut z_next);
        gamma_prev = gamma;
        gamma = gamma_next;
        s_prev = s;
        s = s_next;
        c_prev = c;
        c = c_next;
    };
    finish(status, iterations, res, history, x)
}
