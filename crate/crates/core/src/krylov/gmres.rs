use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2};
use crate::solvers::{SolveReport, SolveStatus};

use super::{KrylovOptions, LinearOperator, Preconditioner, TrueResidual};

const REORTH_TOL: f64 = 1e-8;

/// Breakdown threshold on the new Hessenberg subdiagonal, relative to the
/// norm of the vector before orthogonalization.
const BREAKDOWN_TOL: f64 = 1e-14;

/// Left-preconditioned restarted GMRES.
///
/// Minimizes `‖M⁻¹(b − K w)‖` over each Krylov cycle but stops on the true
/// relative residual `‖b − K w‖ / ‖b‖`, which is checked after every inner
/// step.
pub fn gmres_solve(
    op: &dyn LinearOperator,
    precond: &dyn Preconditioner,
    b: &[f64],
    w0: Option<&[f64]>,
    opts: &KrylovOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    opts.validate()?;
    let n = op.dim();
    if b.len() != n || precond.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator order {n}, preconditioner order {}, rhs length {}",
            precond.dim(),
            b.len()
        )));
    }
    let t0 = Instant::now();
    let mut w = match w0 {
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
    let mut res = meter.measure(&w);
    let mut history = opts.record_history.then(|| vec![res]);
    let mut iterations = 0;
    let restart = opts.restart.min(n);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(restart + 1);
    let mut hess: Vec<Vec<f64>> = Vec::with_capacity(restart);
    let (mut cs, mut sn): (Vec<f64>, Vec<f64>) =
        (Vec::with_capacity(restart), Vec::with_capacity(restart));
    let mut g = vec![0.0; restart + 1];
    let mut r = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut candidate = vec![0.0; n];

    let status = 'outer: loop {
        if !res.is_finite() {
            break SolveStatus::Diverged;
        }
        if res <= opts.tol {
            break SolveStatus::Converged;
        }
        if iterations >= opts.max_iter {
            break SolveStatus::MaxIter;
        }

        meter.residual(&w, &mut u);
        precond.apply(&u, &mut r);
        let beta = norm2(&r);
        if beta == 0.0 || !beta.is_finite() {
            // preconditioned residual vanished while the true one did not
            break if beta.is_finite() {
                SolveStatus::MaxIter
            } else {
                SolveStatus::Diverged
            };
        }
        basis.clear();
        hess.clear();
        cs.clear();
        sn.clear();
        g.fill(0.0);
        g[0] = beta;
        basis.push(r.iter().map(|v| v / beta).collect());

        let mut cycle_len = 0;
        for j in 0..restart {
            if iterations >= opts.max_iter {
                break;
            }
            op.apply(&basis[j], &mut u);
            precond.apply(&u, &mut r);
            let before = norm2(&r);
            let mut h = vec![0.0; j + 2];
            for (i, v) in basis.iter().enumerate() {
                let c = dot(&r, v);
                h[i] = c;
                axpy(-c, v, &mut r);
            }
            let after = norm2(&r);
            if basis.iter().any(|v| dot(&r, v).abs() > REORTH_TOL * after) {
                for (i, v) in basis.iter().enumerate() {
                    let c = dot(&r, v);
                    h[i] += c;
                    axpy(-c, v, &mut r);
                }
            }
            let hnext = norm2(&r);
            h[j + 1] = hnext;

            for i in 0..j {
                let t = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            let denom = h[j].hypot(h[j + 1]);
            let (c, s) = if denom == 0.0 {
                (1.0, 0.0)
            } else {
                (h[j] / denom, h[j + 1] / denom)
            };
            cs.push(c);
            sn.push(s);
            h[j] = denom;
            h[j + 1] = 0.0;
            g[j + 1] = -s * g[j];
            g[j] *= c;
            hess.push(h);
            iterations += 1;
            cycle_len = j + 1;

            update(&w, &basis, &hess, &g, cycle_len, &mut candidate);
            res = meter.measure(&candidate);
            if let Some(hist) = history.as_mut() {
                hist.push(res);
            }
            let breakdown = !(hnext > BREAKDOWN_TOL * before);
            if res <= opts.tol || !res.is_finite() || breakdown {
                w.copy_from_slice(&candidate);
                continue 'outer;
            }
            basis.push(r.iter().map(|v| v / hnext).collect());
        }
        if cycle_len > 0 {
            w.copy_from_slice(&candidate);
        }
    };

    let report = SolveReport {
        status,
        iterations,
        final_res: res,
        history,
        wall_time: t0.elapsed().as_secs_f64(),
        inner_solves: 0,
    };
    Ok((w, report))
}

/// `out = w + V y` where `R y = g` is the rotated least-squares system.
fn update(w: &[f64], basis: &[Vec<f64>], hess: &[Vec<f64>], g: &[f64], k: usize, out: &mut [f64]) {
    let mut y = g[..k].to_vec();
    for i in (0..k).rev() {
        for l in i + 1..k {
            y[i] -= hess[l][i] * y[l];
        }
        y[i] /= hess[i][i];
    }
    out.copy_from_slice(w);
    for (v, yi) in basis.iter().zip(&y) {
        axpy(*yi, v, out);
    }
}
