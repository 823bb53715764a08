use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::SpectralData;
use crate::solvers::GsorParams;

use super::root_tests::{strictly_less, BOUNDARY_SLACK};

/// Convergence region of GSOR for a given `θ` and `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamBounds {
    /// Open interval for `θ`, always `(0, 2)`.
    pub theta_range: (f64, f64),
    /// `2(2−θ)/(θ μ_max)`: for this `θ`, any `τ` below it satisfies the `τ`
    /// condition for every admissible `ω`.
    pub tau_upper: f64,
    /// `4(2−θ) / [(2−θ)(2+τ μ_max) + 2θ ν_max]`
    pub omega_upper: f64,
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in (0, 2), got {theta}"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {v}"
        )));
    }
    Ok(())
}

pub fn omega_upper(s: &SpectralData, theta: f64, tau: f64) -> f64 {
    4.0 * (2.0 - theta) / ((2.0 - theta) * (2.0 + tau * s.mu_max) + 2.0 * theta * s.nu_max)
}

/// `4(ω + θ − ωθ) / (ωθ μ_max)`
pub fn tau_upper(s: &SpectralData, omega: f64, theta: f64) -> f64 {
    4.0 * (omega + theta - omega * theta) / (omega * theta * s.mu_max)
}

pub fn param_bounds(s: &SpectralData, theta: f64, tau: f64) -> Result<ParamBounds> {
    check_theta(theta)?;
    check_positive("tau", tau)?;
    Ok(ParamBounds {
        theta_range: (0.0, 2.0),
        tau_upper: 2.0 * (2.0 - theta) / (theta * s.mu_max),
        omega_upper: omega_upper(s, theta, tau),
    })
}

/// Whether `params` lie strictly inside the sufficient convergence region.
pub fn satisfies_param_bounds(s: &SpectralData, params: &GsorParams) -> bool {
    let GsorParams { omega, tau, theta } = *params;
    let eps = BOUNDARY_SLACK;
    omega > 0.0
        && tau > 0.0
        && theta > 0.0
        && strictly_less(theta, 2.0, eps)
        && strictly_less(omega, omega_upper(s, theta, tau), eps)
        && strictly_less(tau, tau_upper(s, omega, theta), eps)
}

/// Midpoint choice: `τ = (2−θ)/(θ μ_max)`, then `ω` at half its upper bound.
pub fn select_params(s: &SpectralData, theta: f64) -> Result<GsorParams> {
    check_theta(theta)?;
    if !(s.mu_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mu_max must be positive, got {}",
            s.mu_max
        )));
    }
    let tau = (2.0 - theta) / (theta * s.mu_max);
    let omega = 0.5 * omega_upper(s, theta, tau);
    GsorParams::new(omega, tau, theta)
}

/// `2/(1+ν_max)`, the upper end of the `θ` range when `ω = 1`.
pub fn omega1_theta_upper(s: &SpectralData) -> f64 {
    2.0 / (1.0 + s.nu_max)
}

/// Sufficient conditions for GSOR with `ω = 1`:
/// `θ < 2/(1+ν_max)` and `τ < 2(2−θ−θν_max)/((2−θ) μ_max)`.
pub fn omega1_conditions(s: &SpectralData, theta: f64, tau: f64) -> bool {
    let eps = BOUNDARY_SLACK;
    theta > 0.0
        && tau > 0.0
        && strictly_less(theta, omega1_theta_upper(s), eps)
        && strictly_less(
            tau,
            2.0 * (2.0 - theta - theta * s.nu_max) / ((2.0 - theta) * s.mu_max),
            eps,
        )
}

/// Sufficient conditions for the Uzawa-like case `ω = θ = 1`:
/// `ν_max < 1` and `τ < 2(1−ν_max)/μ_max`.
pub fn uzawa_conditions(s: &SpectralData, tau: f64) -> bool {
    let eps = BOUNDARY_SLACK;
    tau > 0.0
        && strictly_less(s.nu_max, 1.0, eps)
        && strictly_less(tau, 2.0 * (1.0 - s.nu_max) / s.mu_max, eps)
}

/// Interval holding the eigenvalues of the GSOR-preconditioned matrix other
/// than the cluster at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralInterval {
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    /// `θ(1+ν_max) + τ μ_min`
    pub big_lambda_low: f64,
    /// `θ(1+ν_max) + τ μ_max`
    pub big_lambda_high: f64,
}

impl SpectralInterval {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lambda_lower - slack && x <= self.lambda_upper + slack
    }
}

pub fn preconditioned_interval(s: &SpectralData, tau: f64, theta: f64) -> SpectralInterval {
    let lo = theta * (1.0 + s.nu_max) + tau * s.mu_min;
    let hi = theta * (1.0 + s.nu_max) + tau * s.mu_max;
    let disc_lo = (lo * lo - 4.0 * tau * theta * s.mu_min).max(0.0);
    let disc_hi = (hi * hi - 4.0 * tau * theta * s.mu_max).max(0.0);
    SpectralInterval {
        lambda_lower: 0.5 * (lo - disc_lo.sqrt()),
        lambda_upper: 0.5 * (hi + disc_hi.sqrt()),
        big_lambda_low: lo,
        big_lambda_high: hi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionBounds {
    /// `max{λ_upper, λ_upper/λ_lower}`. Only an upper bound on the
    /// condition number when `λ_lower ≤ 1 ≤ λ_upper`.
    pub literal: f64,
    /// `(θ/τ)(1+ν_max)²/μ_min + (τ/θ)μ_max + (1+ν_max)(1+μ_max/μ_min)`
    pub simplified: f64,
    /// `max(λ_upper, 1) / min(λ_lower, 1)`, which accounts for the cluster at
    /// 1 and bounds the condition number in every case.
    pub enclosure_ratio: f64,
}

pub fn condition_number_bound(s: &SpectralData, tau: f64, theta: f64) -> ConditionBounds {
    let iv = preconditioned_interval(s, tau, theta);
    let nu1 = 1.0 + s.nu_max;
    ConditionBounds {
        literal: iv.lambda_upper.max(iv.lambda_upper / iv.lambda_lower),
        simplified: (theta / tau) * nu1 * nu1 / s.mu_min
            + (tau / theta) * s.mu_max
            + nu1 * (1.0 + s.mu_max / s.mu_min),
        enclosure_ratio: iv.lambda_upper.max(1.0) / iv.lambda_lower.min(1.0),
    }
}
