//! Solve an lc-like problem with GSOR, the Uzawa special case and GBSOR.
//!
//! ```text
//! cargo run --release --example solve_lc_like [N]
//! ```

use gsor::problem::{generate_structured, residual_norm, spectral_data, Family};
use gsor::solvers::{gbsor_default_omega, gbsor_solve, gsor_solve, uzawa_solve};
use gsor::theory::select_params;
use gsor::SolveOptions;

fn main() -> gsor::Result<()> {
    let size = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8);
    let problem = generate_structured(0, size, Family::LcLike)?;
    let s = spectral_data(&problem);
    println!(
        "n={} m={} p={}  mu in [{:.4}, {:.4}]  nu_max={:.4}",
        problem.n(),
        problem.m(),
        problem.p_dim(),
        s.mu_min,
        s.mu_max,
        s.nu_max
    );

    let opts = SolveOptions::default();
    println!(
        "{:<28} {:>8} {:>12} {:>8}",
        "method", "iter", "res", "solves"
    );
    for theta in [0.5, 1.0, 1.5] {
        let params = select_params(&s, theta)?;
        let (w, r) = gsor_solve(&problem, params, &opts, None)?;
        let label = format!("gsor w={:.3} t={:.3} th={theta}", params.omega, params.tau);
        println!(
            "{label:<28} {:>8} {:>12.3e} {:>8}",
            r.iterations,
            residual_norm(&problem, &w)?.value,
            r.inner_solves
        );
    }

    let tau = (1.0 - s.nu_max) / s.mu_max;
    let (_, r) = uzawa_solve(&problem, tau, &opts, None)?;
    println!(
        "{:<28} {:>8} {:>12.3e} {:>8}",
        format!("uzawa t={tau:.3}"),
        r.iterations,
        r.final_res,
        r.inner_solves
    );

    let omega = gbsor_default_omega(&s);
    let (_, r) = gbsor_solve(&problem, omega, &opts, None)?;
    println!(
        "{:<28} {:>8} {:>12.3e} {:>8}",
        format!("gbsor w={omega:.3}"),
        r.iterations,
        r.final_res,
        r.inner_solves
    );
    Ok(())
}
