//! With `ν_max ≥ 1` the Uzawa case `ω = θ = 1` diverges for every `τ`,
//! while GSOR with `θ < 2/(1+ν_max)` still converges.

use gsor::linalg::spectral_radius;
use gsor::problem::{generate_structured, spectral_data, Family};
use gsor::solvers::{gsor_iteration_operator, gsor_solve};
use gsor::theory::{omega1_theta_upper, select_params, GridAxis, Param};
use gsor::{GsorParams, SolveOptions};

fn main() -> gsor::Result<()> {
    let p = generate_structured(0, 3, Family::DarcyLike)?;
    let s = spectral_data(&p);
    println!("darcy-like order {}, nu_max = {:.4}", p.dim(), s.nu_max);
    println!("{:>8} {:>10} {:>10} {:>6}", "tau", "rho", "status", "iter");
    for tau in GridAxis::new(Param::Tau, 0.01, 2.0, 20)?.values() {
        let params = GsorParams::new(1.0, tau, 1.0)?;
        let rho = spectral_radius(&gsor_iteration_operator(&p, params)?)?;
        let (_, r) = gsor_solve(&p, params, &SolveOptions::default(), None)?;
        println!(
            "{tau:>8.3} {rho:>10.6} {:>10} {:>6}",
            format!("{:?}", r.status),
            r.iterations
        );
    }

    let theta = 0.5 * omega1_theta_upper(&s);
    let params = select_params(&s, theta)?;
    let (_, r) = gsor_solve(&p, params, &SolveOptions::default(), None)?;
    println!(
        "gsor ({:.4}, {:.4}, {theta:.4}): {:?} after {} iterations",
        params.omega, params.tau, r.status, r.iterations
    );
    Ok(())
}
