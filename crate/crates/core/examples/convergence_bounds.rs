//! Parameter bounds, the eigenvalue enclosure and the condition-number
//! bounds for both structured families, checked against the dense spectral
//! radius of the iteration operator.

use gsor::linalg::spectral_radius;
use gsor::problem::{generate_structured, spectral_data, Family};
use gsor::solvers::{gbsor_omega_bound, gsor_iteration_operator};
use gsor::theory::{
    bounds_report, cubic_schur_test, quadratic_schur_test, select_params, CubicCoeffs,
    QuadraticCoeffs,
};

fn main() -> gsor::Result<()> {
    for family in [Family::LcLike, Family::DarcyLike] {
        let p = generate_structured(0, 3, family)?;
        let s = spectral_data(&p);
        let r = bounds_report(s, 1.0, 1.0)?;
        println!(
            "{family:?}: mu [{:.4}, {:.4}] nu_max {:.4}",
            s.mu_min, s.mu_max, s.nu_max
        );
        println!(
            "  omega < {:.4} at tau = theta = 1",
            r.param_bounds.omega_upper
        );
        println!(
            "  omega = 1 needs theta < {:.6}; uzawa admissible: {}",
            r.omega1_theta_upper, r.uzawa_convergent
        );
        println!(
            "  enclosure [{:.4}, {:.4}]",
            r.interval.lambda_lower, r.interval.lambda_upper
        );
        println!(
            "  condition bounds: literal {:.3}, simplified {:.3}, enclosure ratio {:.3}",
            r.condition.literal, r.condition.simplified, r.condition.enclosure_ratio
        );
        println!("  gbsor s = {:.6}", gbsor_omega_bound(&s));
        for theta in [0.5, 1.0, 1.5] {
            let params = select_params(&s, theta)?;
            let rho = spectral_radius(&gsor_iteration_operator(&p, params)?)?;
            println!(
                "  selected (omega, tau, theta) = ({:.4}, {:.4}, {theta}) -> rho = {rho:.6}",
                params.omega, params.tau
            );
        }
    }

    println!(
        "lambda^2 - 1.2 lambda + 0.35 stable: {}",
        quadratic_schur_test(QuadraticCoeffs { a1: -1.2, a0: 0.35 })
    );
    println!(
        "(lambda - 0.5)^2 (lambda + 1.1) stable: {}",
        cubic_schur_test(CubicCoeffs {
            a2: 0.1,
            a1: -0.85,
            a0: 0.275
        })
    );
    Ok(())
}
