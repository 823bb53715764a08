//! Root-location tests, parameter bounds and spectral enclosures for GSOR
//! and its preconditioner, plus empirical region scans.

mod bounds;
mod region;

use serde::Serialize;

use crate::error::Result;
use crate::problem::SpectralData;

pub use bounds::{
    condition_number_bound, omega1_conditions, omega1_theta_upper, omega_upper, param_bounds,
    preconditioned_interval, satisfies_param_bounds, select_params, tau_upper, uzawa_conditions,
    ConditionBounds, ParamBounds, SpectralInterval,
};
pub use region::{region_csv, region_scan, GridAxis, Param, RegionCell, RegionMode, RegionSpec};
pub use root_tests::{
    cubic_schur_test, cubic_schur_test_with, quadratic_schur_test, quadratic_schur_test_with,
    CubicCoeffs, QuadraticCoeffs, BOUNDARY_SLACK,
};

/// Everything the theory predicts for one problem and one `(τ, θ)`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub spectral: SpectralData,
    pub tau: f64,
    pub theta: f64,
    pub param_bounds: ParamBounds,
    pub interval: SpectralInterval,
    pub condition: ConditionBounds,
    /// `θ` must stay below this when `ω = 1`.
    pub omega1_theta_upper: f64,
    pub omega1_convergent: bool,
    pub uzawa_convergent: bool,
}

pub fn bounds_report(spectral: SpectralData, tau: f64, theta: f64) -> Result<BoundsReport> {
    Ok(BoundsReport {
        spectral,
        tau,
        theta,
        param_bounds: param_bounds(&spectral, theta, tau)?,
        interval: preconditioned_interval(&spectral, tau, theta),
        condition: condition_number_bound(&spectral, tau, theta),
        omega1_theta_upper: omega1_theta_upper(&spectral),
        omega1_convergent: omega1_conditions(&spectral, theta, tau),
        uzawa_convergent: uzawa_conditions(&spectral, tau),
    })
}
