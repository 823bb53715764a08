//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use common::{
    dense_iteration_matrix, dense_preconditioned, dense_spectral, dense_system, eigenvalues,
    max_abs_diff, random_problem, spectral_radius, trailing_block_eigenvalues,
};
use gsor::krylov::{
    gmres_solve_problem, gsor_preconditioned_matrix, minres_solve_problem, preconditioned_spectrum,
    BlockPreconditioner, KrylovOptions, Preconditioner, PreconditionerKind,
};
use gsor::problem::{generate_structured, DoubleSaddleProblem, Family};
use gsor::solvers::{
    gbsor_default_omega, gbsor_omega_bound, gbsor_solve, gsor_affine_constant,
    gsor_iteration_operator, gsor_solve, splitting_matrices, uzawa_solve, GsorStepper,
};
use gsor::theory::{
    cubic_schur_test, omega1_theta_upper, omega_upper, preconditioned_interval,
    quadratic_schur_test, satisfies_param_bounds, tau_upper, uzawa_conditions, CubicCoeffs,
    GridAxis, Param, QuadraticCoeffs,
};
use gsor::{BlockLayout, GsorParams, SolveOptions, SolveReport, SpectralData};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

static SOLVE_RUNS: AtomicUsize = AtomicUsize::new(0);
static SOLVE_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// Records one stationary run for the inner-solve accounting criterion.
fn account(report: &SolveReport, per_iteration: usize) {
    SOLVE_RUNS.fetch_add(1, Ordering::Relaxed);
    if report.inner_solves != per_iteration * report.iterations {
        SOLVE_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
}

fn within(limit: Duration, t0: Instant, detail: String) -> Outcome {
    let el = t0.elapsed();
    if el < limit {
        Ok(format!("{detail}; {:.2}s", el.as_secs_f64()))
    } else {
        Err(format!(
            "{detail}; {:.2}s exceeds {}s",
            el.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

// 1 ----------------------------------------------------------------------

const BAND: f64 = 1e-9;
const TRIPLES: usize = 10_000;

fn quadratic_max_modulus(a1: f64, a0: f64) -> f64 {
    let disc = a1 * a1 - 4.0 * a0;
    if disc >= 0.0 {
        let s = disc.sqrt();
        ((-a1 + s) / 2.0).abs().max(((-a1 - s) / 2.0).abs())
    } else {
        a0.sqrt()
    }
}

fn cubic_max_modulus(a2: f64, a1: f64, a0: f64) -> f64 {
    let comp = DMatrix::from_row_slice(3, 3, &[-a2, -a1, -a0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    eigenvalues(&comp)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Either a uniform coefficient draw or one built from roots scattered
/// around the unit circle, so both sides of the boundary are well sampled.
fn root_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    if rng.random_bool(0.5) {
        let r1 = rng.random_range(-1.5..1.5);
        let r2 = rng.random_range(-1.5..1.5);
        (r1 + r2, r1 * r2)
    } else {
        let rho: f64 = rng.random_range(0.5..1.5);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::PI);
        (2.0 * rho * phi.cos(), rho * rho)
    }
}

fn root_test_oracles() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let (mut q_checked, mut q_bad, mut q_skipped, mut q_inside) = (0, 0, 0, 0);
    while q_checked < TRIPLES {
        let (a1, a0) = if rng.random_bool(0.5) {
            (rng.random_range(-2.5..2.5), rng.random_range(-1.5..1.5))
        } else {
            let (sum, prod) = root_pair(&mut rng);
            (-sum, prod)
        };
        let rad = quadratic_max_modulus(a1, a0);
        let margins = [(1.0 + a0) - a1.abs(), 2.0 - (1.0 + a0)];
        if (rad - 1.0).abs() < BAND || margins.iter().any(|m| m.abs() < BAND) {
            q_skipped += 1;
            continue;
        }
        q_checked += 1;
        let oracle = rad < 1.0;
        q_inside += oracle as usize;
        if quadratic_schur_test(QuadraticCoeffs { a1, a0 }) != oracle {
            q_bad += 1;
        }
    }

    let (mut c_checked, mut c_bad, mut c_skipped, mut c_inside) = (0, 0, 0, 0);
    while c_checked < TRIPLES {
        let (a2, a1, a0) = if rng.random_bool(0.5) {
            (
                rng.random_range(-3.5..3.5),
                rng.random_range(-3.5..3.5),
                rng.random_range(-1.5..1.5),
            )
        } else {
            let r0: f64 = rng.random_range(-1.5..1.5);
            let (sum, prod) = root_pair(&mut rng);
            (-(r0 + sum), prod + r0 * sum, -r0 * prod)
        };
        let rad = cubic_max_modulus(a2, a1, a0);
        let margins = [
            (1.0 + a1) - (a2 + a0).abs(),
            (3.0 - a1) - (a2 - 3.0 * a0).abs(),
            1.0 - (a0 * a0 + a1 - a0 * a2),
        ];
        if (rad - 1.0).abs() < BAND || margins.iter().any(|m| m.abs() < BAND) {
            c_skipped += 1;
            continue;
        }
        c_checked += 1;
        let oracle = rad < 1.0;
        c_inside += oracle as usize;
        if cubic_schur_test(CubicCoeffs { a2, a1, a0 }) != oracle {
            c_bad += 1;
        }
    }

    let detail = format!(
        "quadratic {q_bad}/{q_checked} disagreements ({q_inside} stable, {q_skipped} in band), \
         cubic {c_bad}/{c_checked} ({c_inside} stable, {c_skipped} in band)"
    );
    if q_bad + c_bad > 0 {
        return Err(detail);
    }
    within(Duration::from_secs(5), t0, detail)
}

// 2 ----------------------------------------------------------------------

const MARGIN: f64 = 1e-3;

/// Draws `(ω, τ, θ)` with every parameter at least `MARGIN` (relative) away
/// from both ends of its admissible range given the other two.
fn sample_inside(s: &SpectralData, rng: &mut ChaCha8Rng) -> GsorParams {
    loop {
        let theta = rng.random_range(2.0 * MARGIN..2.0 * (1.0 - MARGIN));
        let tau = rng.random_range(0.0..4.0 * (2.0 - theta) / (theta * s.mu_max));
        let w_hi = omega_upper(s, theta, tau);
        let omega = rng.random_range(MARGIN * w_hi..(1.0 - MARGIN) * w_hi);
        let t_hi = tau_upper(s, omega, theta);
        if tau >= MARGIN * t_hi && tau <= (1.0 - MARGIN) * t_hi {
            return GsorParams { omega, tau, theta };
        }
    }
}

fn sufficiency() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let (mut worst_rho, mut max_iters, mut failures) = (0.0f64, 0, Vec::new());
    let mut nu_regimes = [0usize; 2];
    for i in 0..100u64 {
        let problem = random_problem(1000 + i, (30, 200));
        let s = dense_spectral(&problem);
        nu_regimes[(s.nu_max >= 1.0) as usize] += 1;
        let params = sample_inside(&s, &mut rng);
        let rho = spectral_radius(&dense_iteration_matrix(&problem, params));
        let (_, report) = gsor_solve(&problem, params, &SolveOptions::default(), None)
            .map_err(|e| e.to_string())?;
        account(&report, 3);
        worst_rho = worst_rho.max(rho);
        max_iters = max_iters.max(report.iterations);
        let ok = satisfies_param_bounds(&s, &params)
            && rho < 1.0
            && report.converged()
            && report.final_res <= 1e-8;
        if !ok {
            failures.push(format!(
                "case {i}: {params:?} rho={rho} {:?} res={:e}",
                report.status, report.final_res
            ));
        }
    }
    let detail = format!(
        "{}/100 converged, max rho {worst_rho:.6}, max iterations {max_iters}, nu<1 {} / nu>=1 {}",
        100 - failures.len(),
        nu_regimes[0],
        nu_regimes[1]
    );
    if !failures.is_empty() {
        return Err(format!("{detail}; {}", failures.join("; ")));
    }
    within(Duration::from_secs(120), t0, detail)
}

// 3 ----------------------------------------------------------------------

fn divergence() -> Outcome {
    let t0 = Instant::now();
    let problem = generate_structured(0, 3, Family::DarcyLike).map_err(|e| e.to_string())?;
    let s = dense_spectral(&problem);
    if s.nu_max < 1.0 {
        return Err(format!("measured nu_max {} < 1", s.nu_max));
    }
    let taus = GridAxis::new(Param::Tau, 0.01, 2.0, 20)
        .map_err(|e| e.to_string())?
        .values();
    let mut bad = Vec::new();
    let mut min_rho = f64::INFINITY;
    for &tau in &taus {
        let params = GsorParams {
            omega: 1.0,
            tau,
            theta: 1.0,
        };
        let rho = spectral_radius(&dense_iteration_matrix(&problem, params));
        let (_, report) = gsor_solve(&problem, params, &SolveOptions::default(), None)
            .map_err(|e| e.to_string())?;
        account(&report, 3);
        min_rho = min_rho.min(rho);
        if report.converged() || rho < 1.0 {
            bad.push(format!("tau={tau}: {:?} rho={rho}", report.status));
        }
    }
    let detail = format!(
        "order {}, nu_max {:.4}, {}/{} tau values fail to converge, min rho {min_rho:.4}",
        problem.dim(),
        s.nu_max,
        taus.len() - bad.len(),
        taus.len()
    );
    if !bad.is_empty() {
        return Err(format!("{detail}; {}", bad.join("; ")));
    }
    within(Duration::from_secs(60), t0, detail)
}

// 4 ----------------------------------------------------------------------

const EIG_TOL: f64 = 1e-8;
const TAU_THETA: [f64; 4] = [0.1, 0.5, 1.0, 1.5];

/// Largest entry of the leading `n` columns of `m` minus `(I; 0)`.
fn unit_block_deviation(m: &DMatrix<f64>, n: usize) -> f64 {
    let mut d = 0.0f64;
    for j in 0..n {
        for i in 0..m.nrows() {
            d = d.max((m[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    d
}

fn enclosure() -> Outcome {
    let t0 = Instant::now();
    let mut violations = Vec::new();
    let mut checked = 0;
    let (mut worst_imag, mut worst_gap, mut worst_structure) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50u64 {
        let problem = random_problem(5000 + i, (30, 120));
        let s = dense_spectral(&problem);
        for &tau in &TAU_THETA {
            for &theta in &TAU_THETA {
                checked += 1;
                let iv = preconditioned_interval(&s, tau, theta);
                let mut ev =
                    preconditioned_spectrum(&problem, PreconditionerKind::gsor(tau, theta))
                        .map_err(|e| e.to_string())?;
                worst_imag = ev.iter().map(|z| z.im.abs()).fold(worst_imag, f64::max);
                let not_real = ev
                    .iter()
                    .filter(|z| z.im.abs() > EIG_TOL || z.re <= 0.0)
                    .count();
                ev.sort_by(|a, b| (a - 1.0).norm().total_cmp(&(b - 1.0).norm()));
                let ones = ev.iter().filter(|z| (*z - 1.0).norm() <= EIG_TOL).count();
                let outside = ev[problem.n()..]
                    .iter()
                    .filter(|z| !iv.contains(z.re, EIG_TOL))
                    .count();
                let structure =
                    unit_block_deviation(&dense_preconditioned(&problem, tau, theta), problem.n());
                let mut oracle = trailing_block_eigenvalues(&problem, tau, theta);
                oracle.extend(std::iter::repeat_n(1.0, problem.n()));
                oracle.sort_by(f64::total_cmp);
                let mut lib: Vec<f64> = ev.iter().map(|z| z.re).collect();
                lib.sort_by(f64::total_cmp);
                let oracle_gap = lib
                    .iter()
                    .zip(&oracle)
                    .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
                    .fold(0.0, f64::max);
                worst_gap = worst_gap.max(oracle_gap);
                worst_structure = worst_structure.max(structure);
                if not_real > 0
                    || ones < problem.n()
                    || outside > 0
                    || structure > EIG_TOL
                    || oracle_gap > EIG_TOL
                {
                    violations.push(format!(
                        "problem {i} tau={tau} theta={theta}: {not_real} non-real, {ones}/{} at 1, {outside} outside [{}, {}], \
                         unit block off by {structure:e}, oracle gap {oracle_gap:e}",
                        problem.n(),
                        iv.lambda_lower,
                        iv.lambda_upper
                    ));
                }
            }
        }
    }
    let detail = format!(
        "{} violations in {checked} spectra, max |imag| {worst_imag:.1e}, unit block off by at most {worst_structure:.1e}, \
         max gap to symmetric oracle {worst_gap:.1e}",
        violations.len()
    );
    if !violations.is_empty() {
        return Err(format!("{detail}; {}", violations.join("; ")));
    }
    within(Duration::from_secs(120), t0, detail)
}

// 5 ----------------------------------------------------------------------

fn formulas() -> Outcome {
    let lc = SpectralData::new(1.0, 1.0, 0.1750);
    let darcy = SpectralData::new(1.0, 1.0, 1.0057);
    let theta_up = omega1_theta_upper(&lc);
    let s = gbsor_omega_bound(&darcy);
    let s_default = 2.0 * gbsor_default_omega(&darcy);
    let e1 = (theta_up - 2.0 / 1.175).abs();
    let e2 = (s - 2.0 / (1.0 + 1.0057f64.sqrt()))
        .abs()
        .max((s_default - s).abs());
    let e3 = (theta_up - 1.702128).abs();
    let mut uzawa_true = 0;
    for mu_max in [1e-3, 0.1, 1.0, 10.0, 1e3] {
        let sd = SpectralData::new(mu_max / 10.0, mu_max, 1.0057);
        for k in 0..=1000 {
            let tau = 10f64.powf(-6.0 + 12.0 * k as f64 / 1000.0);
            uzawa_true += uzawa_conditions(&sd, tau) as usize;
        }
    }
    let detail = format!(
        "theta bound {theta_up:.9} (err {e1:.1e}), s {s:.9} (err {e2:.1e}), uzawa true for {uzawa_true} of 5005 tau"
    );
    if e1 <= 1e-12 && e2 <= 1e-12 && e3 < 5e-7 && uzawa_true == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 6 ----------------------------------------------------------------------

fn dense_max_diff(a: &DMatrix<f64>, b: &gsor::linalg::DenseMatrix) -> f64 {
    let mut d = 0.0f64;
    for i in 0..a.nrows() {
        for (j, v) in b.row(i).iter().enumerate() {
            d = d.max((a[(i, j)] - v).abs());
        }
    }
    d
}

fn equivalences() -> Outcome {
    let t0 = Instant::now();
    let mut notes = Vec::new();
    let mut fails = Vec::new();
    let tight = SolveOptions {
        tol: f64::MIN_POSITIVE,
        max_iter: 1,
        record_history: false,
    };

    for (case, problem) in (0..4u64).map(|i| (i, random_problem(7000 + i, (30, 90)))) {
        let s = dense_spectral(&problem);
        let mut rng = ChaCha8Rng::seed_from_u64(60 + case);
        let w0: Vec<f64> = (0..problem.dim())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();

        let tau = 0.5 / s.mu_max;
        let mut exact = true;
        for k in 1..=100 {
            let opts = SolveOptions {
                max_iter: k,
                ..tight
            };
            let (wu, ru) =
                uzawa_solve(&problem, tau, &opts, Some(&w0)).map_err(|e| e.to_string())?;
            let (wg, rg) = gsor_solve(
                &problem,
                GsorParams {
                    omega: 1.0,
                    tau,
                    theta: 1.0,
                },
                &opts,
                Some(&w0),
            )
            .map_err(|e| e.to_string())?;
            account(&ru, 3);
            account(&rg, 3);
            exact &= wu == wg && ru.iterations == rg.iterations;
        }
        if !exact {
            fails.push(format!(
                "case {case}: Uzawa and GSOR(1, tau, 1) iterates differ"
            ));
        }

        let params = gsor::theory::select_params(&s, 1.0).map_err(|e| e.to_string())?;
        let t = gsor_iteration_operator(&problem, params).map_err(|e| e.to_string())?;
        let c = gsor_affine_constant(&problem, params).map_err(|e| e.to_string())?;
        let oracle_t = dense_max_diff(&dense_iteration_matrix(&problem, params), &t);
        let mut affine = w0.clone();
        let mut stepper = GsorStepper::new(&problem, params).map_err(|e| e.to_string())?;
        let mut stepped = w0.clone();
        let mut traj = 0.0f64;
        for k in 1..=50 {
            let next: Vec<f64> = t
                .matvec(&affine)
                .unwrap()
                .iter()
                .zip(&c)
                .map(|(a, b)| a + b)
                .collect();
            affine = next;
            stepper.step(&mut stepped);
            let opts = SolveOptions {
                max_iter: k,
                ..tight
            };
            let (ws, _) =
                gsor_solve(&problem, params, &opts, Some(&w0)).map_err(|e| e.to_string())?;
            let scale = affine.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            traj = traj
                .max(max_abs_diff(&ws, &affine) / scale)
                .max(max_abs_diff(&ws, &stepped) / scale);
        }
        if traj > 1e-9 || oracle_t > 1e-9 {
            fails.push(format!(
                "case {case}: trajectory gap {traj:e}, operator vs oracle {oracle_t:e}"
            ));
        }

        let split = splitting_matrices(&problem, params).map_err(|e| e.to_string())?;
        let split_err = dense_max_diff(&dense_system(&problem), &split.m.sub(&split.n).unwrap());
        let mut pre_err = 0.0f64;
        for &tau in &TAU_THETA {
            for &theta in &TAU_THETA {
                let sym = gsor_preconditioned_matrix(&problem, tau, theta, BlockLayout::Symmetric)
                    .map_err(|e| e.to_string())?;
                let uns =
                    gsor_preconditioned_matrix(&problem, tau, theta, BlockLayout::Unsymmetric)
                        .map_err(|e| e.to_string())?;
                pre_err = pre_err.max(sym.sub(&uns).unwrap().max_abs());
            }
        }
        if split_err > 1e-12 || pre_err > 1e-12 {
            fails.push(format!(
                "case {case}: |M-N-A| {split_err:e}, preconditioned layouts differ by {pre_err:e}"
            ));
        }
        notes.push(format!(
            "traj {traj:.1e} / split {split_err:.1e} / precond {pre_err:.1e}"
        ));
    }
    let detail = format!(
        "4 problems, Uzawa iterate-exact over 100 steps; {}",
        notes.join(", ")
    );
    if !fails.is_empty() {
        return Err(format!("{detail}; {}", fails.join("; ")));
    }
    within(Duration::from_secs(120), t0, detail)
}

// 7 ----------------------------------------------------------------------

fn krylov_suite() -> Vec<(String, DoubleSaddleProblem)> {
    let mut suite: Vec<(String, DoubleSaddleProblem)> = (0..20u64)
        .map(|i| (format!("random {i}"), random_problem(9000 + i, (30, 200))))
        .collect();
    for size in [4, 8, 16, 32] {
        suite.push((
            format!("lc-like N={size}"),
            generate_structured(1, size, Family::LcLike).unwrap(),
        ));
    }
    for size in [2, 3] {
        suite.push((
            format!("darcy-like N={size}"),
            generate_structured(1, size, Family::DarcyLike).unwrap(),
        ));
    }
    suite
}

fn true_residual(problem: &DoubleSaddleProblem, w: &[f64]) -> f64 {
    let k = dense_system(problem);
    let b = nalgebra::DVector::from_vec(problem.rhs());
    let r = &b - k * nalgebra::DVector::from_column_slice(w);
    r.norm() / b.norm()
}

fn krylov_clustering(suite: &[(String, DoubleSaddleProblem)]) -> Outcome {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let mut worst_slack = i64::MAX;
    let mut minres_max = 0;
    for (name, problem) in suite {
        let bound = problem.m() + problem.p_dim() + 6;
        let opts = KrylovOptions {
            restart: problem.dim(),
            tol: 1e-10,
            ..Default::default()
        };
        let (w, r) = gmres_solve_problem(problem, PreconditionerKind::gsor(1.0, 1.0), &opts)
            .map_err(|e| e.to_string())?;
        let res = true_residual(problem, &w);
        worst_slack = worst_slack.min(bound as i64 - r.iterations as i64);
        if !r.converged() || r.iterations > bound || res > 1e-10 {
            fails.push(format!(
                "{name}: gmres {:?} after {} (bound {bound}), true res {res:e}",
                r.status, r.iterations
            ));
        }
        let (wm, rm) =
            minres_solve_problem(problem, &KrylovOptions::default()).map_err(|e| e.to_string())?;
        minres_max = minres_max.max(rm.iterations);
        if !rm.converged() || true_residual(problem, &wm) > 1e-8 {
            fails.push(format!(
                "{name}: minres {:?} after {}",
                rm.status, rm.iterations
            ));
        }
    }
    let detail = format!(
        "{} instances, GMRES needs at most m+p+{} iterations, MINRES at most {minres_max}",
        suite.len(),
        6 - worst_slack
    );
    if !fails.is_empty() {
        return Err(format!("{detail}; {}", fails.join("; ")));
    }
    within(Duration::from_secs(120), t0, detail)
}

// 8 ----------------------------------------------------------------------

fn inner_solves(suite: &[(String, DoubleSaddleProblem)]) -> Outcome {
    for (_, problem) in suite {
        let s = dense_spectral(problem);
        let opts = SolveOptions {
            max_iter: 20_000,
            ..Default::default()
        };
        let (_, r) = gbsor_solve(problem, gbsor_default_omega(&s), &opts, None)
            .map_err(|e| e.to_string())?;
        account(&r, 4);
        let (_, r) = gsor_solve(
            problem,
            GsorParams {
                omega: 1.0,
                tau: 0.5 / s.mu_max,
                theta: 1.0,
            },
            &opts,
            None,
        )
        .map_err(|e| e.to_string())?;
        account(&r, 3);
    }
    let problem = &suite[0].1;
    let pc = BlockPreconditioner::new(
        problem,
        PreconditionerKind::gsor(1.0, 1.0),
        BlockLayout::Symmetric,
    )
    .map_err(|e| e.to_string())?;
    let mut v = vec![0.0; problem.dim()];
    for k in 1..=5 {
        pc.apply(&problem.rhs(), &mut v);
        if pc.solve_count() != 3 * k {
            return Err(format!(
                "preconditioner made {} solves after {k} applications",
                pc.solve_count()
            ));
        }
    }
    let runs = SOLVE_RUNS.load(Ordering::Relaxed);
    let bad = SOLVE_VIOLATIONS.load(Ordering::Relaxed);
    let detail = format!("{bad} violations over {runs} instrumented GSOR/Uzawa/GBSOR runs; preconditioner 3 per apply");
    if bad > 0 {
        Err(detail)
    } else {
        Ok(detail)
    }
}

// 9 ----------------------------------------------------------------------

fn run_cli(args: &[&str], out: Option<&Path>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gsor"));
    cmd.args(args);
    if let Some(dir) = out {
        cmd.arg("--out").arg(dir);
    }
    let o = cmd.output().map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!(
            "{args:?} exited with {:?}: {}",
            o.status.code(),
            String::from_utf8_lossy(&o.stderr)
        ));
    }
    Ok(o.stdout)
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "timing.json")
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &[
            "region",
            "--generate",
            "lc-like",
            "--size",
            "4",
            "--seed",
            "7",
            "--grid",
            "tau:0.1:2:6",
            "--grid",
            "theta:0.1:1.9:6",
        ],
        &[
            "region",
            "--generate",
            "synthetic",
            "--size",
            "5",
            "--seed",
            "3",
            "--grid",
            "omega:0.1:1.5:5",
            "--grid",
            "tau:0.1:2:5",
            "--spectral",
        ],
        &[
            "solve",
            "--generate",
            "synthetic",
            "--size",
            "8",
            "--seed",
            "5",
            "--history",
        ],
        &[
            "solve",
            "--generate",
            "lc-like",
            "--size",
            "6",
            "--seed",
            "2",
            "--solver",
            "gmres",
            "--history",
        ],
    ];
    let mut compared = 0;
    for args in runs {
        let a = tempfile::tempdir().map_err(|e| e.to_string())?;
        let b = tempfile::tempdir().map_err(|e| e.to_string())?;
        let out_a = run_cli(args, Some(a.path()))?;
        let out_b = run_cli(args, Some(b.path()))?;
        let (fa, fb) = (dir_contents(a.path()), dir_contents(b.path()));
        if fa.is_empty() || fa != fb || out_a != out_b {
            return Err(format!("{args:?}: outputs differ between runs"));
        }
        compared += fa.len();
        if run_cli(args, None)? != run_cli(args, None)? {
            return Err(format!("{args:?}: stdout differs between runs"));
        }
        compared += 1;
    }
    Ok(format!(
        "{compared} outputs byte-identical across two runs each"
    ))
}

// ------------------------------------------------------------------------

fn report(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match outcome {
        Ok(d) => {
            println!("PASS {id} {name}: {d}");
            true
        }
        Err(d) => {
            println!("FAIL {id} {name}: {d}");
            false
        }
    }
}

fn main() {
    let suite = krylov_suite();
    let results = [
        report(1, "root test oracles", root_test_oracles),
        report(2, "sufficient region converges", sufficiency),
        report(3, "divergence for nu_max >= 1", divergence),
        report(4, "preconditioned eigenvalue enclosure", enclosure),
        report(5, "closed-form values", formulas),
        report(6, "equivalences", equivalences),
        report(7, "krylov clustering", || krylov_clustering(&suite)),
        report(8, "inner-solve accounting", || inner_solves(&suite)),
        report(9, "cli determinism", determinism),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
