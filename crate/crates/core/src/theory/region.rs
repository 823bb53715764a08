use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::spectral_radius;
use crate::problem::DoubleSaddleProblem;
use crate::solvers::{gsor_iteration_operator, gsor_solve, GsorParams, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Omega,
    Tau,
    Theta,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Param::Omega => "omega",
            Param::Tau => "tau",
            Param::Theta => "theta",
        })
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(Param::Omega),
            "tau" => Ok(Param::Tau),
            "theta" => Ok(Param::Theta),
            _ => Err(Error::InvalidParameter(format!("unknown parameter {s:?}"))),
        }
    }
}

/// Evenly spaced values `lo..=hi`; a single step yields `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub param: Param,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(param: Param, lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let axis = Self {
            param,
            lo,
            hi,
            steps,
        };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidParameter(
                "grid needs at least one step".into(),
            ));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo > 0.0 && self.hi >= self.lo) {
            return Err(Error::InvalidParameter(format!(
                "grid range for {} must satisfy 0 < lo <= hi, got {}..{}",
                self.param, self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + h * i as f64
                }
            })
            .collect()
    }
}

/// Parses `param:lo:hi:steps`, e.g. `tau:0.01:2:20`.
impl FromStr for GridAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad =
            || Error::InvalidParameter(format!("grid {s:?} is not of the form param:lo:hi:steps"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let lo = parts[1].parse().map_err(|_| bad())?;
        let hi = parts[2].parse().map_err(|_| bad())?;
        let steps = parts[3].parse().map_err(|_| bad())?;
        GridAxis::new(parts[0].parse()?, lo, hi, steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionMode {
    /// Run GSOR in every cell.
    #[default]
    Empirical,
    /// Also report `ρ(𝒯)` from the dense iteration operator.
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    pub first: GridAxis,
    pub second: GridAxis,
    /// Value of the parameter not on either axis.
    pub fixed: f64,
    pub mode: RegionMode,
    pub opts: SolveOptions,
}

impl RegionSpec {
    /// Empirical scan with `Res ≤ 1e-8` within 5000 iterations.
    pub fn new(first: GridAxis, second: GridAxis, fixed: f64) -> Self {
        Self {
            first,
            second,
            fixed,
            mode: RegionMode::Empirical,
            opts: SolveOptions {
                max_iter: 5000,
                ..Default::default()
            },
        }
    }

    pub fn fixed_param(&self) -> Result<Param> {
        let (a, b) = (self.first.param, self.second.param);
        if a == b {
            return Err(Error::InvalidParameter(format!("both grid axes scan {a}")));
        }
        Ok([Param::Omega, Param::Tau, Param::Theta]
            .into_iter()
            .find(|p| *p != a && *p != b)
            .unwrap())
    }

    fn params_at(&self, v1: f64, v2: f64) -> Result<GsorParams> {
        let fixed = self.fixed_param()?;
        let mut vals = [0.0; 3];
        let idx = |p: Param| match p {
            Param::Omega => 0,
            Param::Tau => 1,
            Param::Theta => 2,
        };
        vals[idx(self.first.param)] = v1;
        vals[idx(self.second.param)] = v2;
        vals[idx(fixed)] = self.fixed;
        GsorParams::new(vals[0], vals[1], vals[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub param1: f64,
    pub param2: f64,
    pub converged: bool,
    pub iters: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

/// Scans a two-parameter grid, `first` varying slowest. Cells are
/// independent and evaluated in parallel.
pub fn region_scan(problem: &DoubleSaddleProblem, spec: &RegionSpec) -> Result<Vec<RegionCell>> {
    spec.first.validate()?;
    spec.second.validate()?;
    spec.fixed_param()?;
    let cells: Vec<(f64, f64)> = spec
        .first
        .values()
        .into_iter()
        .flat_map(|a| spec.second.values().into_iter().map(move |b| (a, b)))
        .collect();
    cells
        .into_par_iter()
        .map(|(v1, v2)| {
            let params = spec.params_at(v1, v2)?;
            let (_, report) = gsor_solve(problem, params, &spec.opts, None)?;
            let rho = match spec.mode {
                RegionMode::Empirical => None,
                RegionMode::Spectral => {
                    Some(spectral_radius(&gsor_iteration_operator(problem, params)?)?)
                }
            };
            Ok(RegionCell {
                param1: v1,
                param2: v2,
                converged: report.converged(),
                iters: report.iterations,
                rho,
            })
        })
        .collect()
}

/// `param1,param2,converged,iters` plus `rho` when any cell carries one.
pub fn region_csv(cells: &[RegionCell]) -> String {
    let with_rho = cells.iter().any(|c| c.rho.is_some());
    let mut s = String::from(if with_rho {
        "param1,param2,converged,iters,rho\n"
    } else {
        "param1,param2,converged,iters\n"
    });
    for c in cells {
        write!(s, "{},{},{},{}", c.param1, c.param2, c.converged, c.iters).unwrap();
        if with_rho {
            match c.rho {
                Some(r) => write!(s, ",{r:e}").unwrap(),
                None => s.push(','),
            }
        }
        s.push('\n');
    }
    s
}
