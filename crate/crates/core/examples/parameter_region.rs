//! Empirical convergence region of GSOR over `(τ, θ)` with `ω = 1`,
//! printed as a character map next to the sufficient region.
//!
//! `#` converged inside the sufficient region, `+` converged outside it,
//! `.` did not converge.

use gsor::problem::{generate_structured, spectral_data, Family};
use gsor::theory::{omega1_conditions, region_scan, GridAxis, Param, RegionSpec};

fn main() -> gsor::Result<()> {
    let problem = generate_structured(0, 4, Family::LcLike)?;
    let s = spectral_data(&problem);
    let taus = GridAxis::new(Param::Tau, 0.05, 3.0, 40)?;
    let thetas = GridAxis::new(Param::Theta, 0.05, 2.2, 20)?;
    let mut spec = RegionSpec::new(taus, thetas, 1.0);
    spec.opts.max_iter = 2000;
    let cells = region_scan(&problem, &spec)?;

    println!("theta \\ tau {:.2} .. {:.2}", taus.lo, taus.hi);
    for (j, theta) in thetas.values().iter().enumerate().rev() {
        let row: String = (0..taus.steps)
            .map(|i| {
                let c = &cells[i * thetas.steps + j];
                match (c.converged, omega1_conditions(&s, c.param2, c.param1)) {
                    (true, true) => '#',
                    (true, false) => '+',
                    (false, _) => '.',
                }
            })
            .collect();
        println!("{theta:>5.2} {row}");
    }
    let conv = cells.iter().filter(|c| c.converged).count();
    println!("{conv}/{} cells converged", cells.len());
    Ok(())
}
