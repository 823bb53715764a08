//! Spectrum of the GSOR-preconditioned matrix against the predicted
//! enclosure, for a few `(τ, θ)`.

use gsor::krylov::{preconditioned_spectrum, system_spectrum, PreconditionerKind};
use gsor::problem::{generate_synthetic, spectral_data, SyntheticSpec};
use gsor::theory::{condition_number_bound, preconditioned_interval};

fn main() -> gsor::Result<()> {
    let mut spec = SyntheticSpec::new(60, 20, 15);
    spec.nu_target = Some(0.8);
    let problem = generate_synthetic(3, &spec)?;
    let s = spectral_data(&problem);

    let sys = system_spectrum(&problem)?;
    let (lo, hi) = (sys.first().unwrap().re, sys.last().unwrap().re);
    println!(
        "system matrix: eigenvalues in [{lo:.3}, {hi:.3}], order {}",
        sys.len()
    );

    for (tau, theta) in [(1.0, 1.0), (0.1, 1.0), (1.0, 0.1), (0.5, 1.5)] {
        let ev = preconditioned_spectrum(&problem, PreconditionerKind::gsor(tau, theta))?;
        let iv = preconditioned_interval(&s, tau, theta);
        let ones = ev.iter().filter(|z| (*z - 1.0).norm() < 1e-8).count();
        let rest: Vec<f64> = ev
            .iter()
            .filter(|z| (*z - 1.0).norm() >= 1e-8)
            .map(|z| z.re)
            .collect();
        let max_im = ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let (rmin, rmax) = rest
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
                (a.min(x), b.max(x))
            });
        let cond = condition_number_bound(&s, tau, theta);
        println!(
            "tau={tau:<4} theta={theta:<4} ones={ones:<3} rest in [{rmin:.4}, {rmax:.4}] predicted [{:.4}, {:.4}] \
             max|im|={max_im:.1e} cond<={:.2}",
            iv.lambda_lower, iv.lambda_upper, cond.enclosure_ratio
        );
    }
    Ok(())
}
