use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{
    generate_structured, generate_synthetic, import_mm, DoubleSaddleProblem, Family, SyntheticSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerateKind {
    LcLike,
    DarcyLike,
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Gsor,
    Uzawa,
    Gbsor,
    Gmres,
    Minres,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrecondChoice {
    Gsor,
    BlockDiagonal,
    BlockTriangular,
    None,
}

/// Flags shared by all subcommands. Anything given on the command line
/// overrides the same key in `--config`.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// JSON file with any of these options (kebab-case keys).
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Generate a problem from a seeded family.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generate: Option<GenerateKind>,
    /// Load a problem from a Matrix Market manifest.
    #[arg(long, value_name = "MANIFEST")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub import: Option<PathBuf>,
    /// Size parameter N of the generated family (default 4).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// Seed of the generator (default 0).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Target nu_max for the synthetic generator.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_target: Option<f64>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverKind>,
    /// Preconditioner for `--solver gmres` (default gsor).
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preconditioner: Option<PrecondChoice>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    /// GMRES restart length (default 100).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart: Option<usize>,

    /// Grid axis `param:lo:hi:steps`; give exactly two for `region`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<String>,
    /// Also report the spectral radius of the iteration operator per cell.
    #[arg(long)]
    pub spectral: bool,
    /// Emit spectra for (τ, θ) = (1, 1), (0.1, 1) and (1, 0.1).
    #[arg(long)]
    pub presets: bool,
    /// Write the residual history CSV.
    #[arg(long)]
    pub history: bool,

    /// Output directory; without it the primary output goes to stdout.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Validate the configuration and exit.
    #[arg(long)]
    pub dry_run: bool,
}

impl RunConfig {
    /// Merges the `--config` file under the command-line values and checks
    /// the result.
    pub fn resolve(self) -> Result<Self> {
        let merged = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                let file: RunConfig = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
                self.over(file)
            }
            None => self,
        };
        merged.validate()?;
        Ok(merged)
    }

    fn over(self, file: RunConfig) -> RunConfig {
        RunConfig {
            config: self.config,
            generate: self.generate.or(file.generate),
            import: self.import.or(file.import),
            size: self.size.or(file.size),
            seed: self.seed.or(file.seed),
            nu_target: self.nu_target.or(file.nu_target),
            solver: self.solver.or(file.solver),
            preconditioner: self.preconditioner.or(file.preconditioner),
            omega: self.omega.or(file.omega),
            tau: self.tau.or(file.tau),
            theta: self.theta.or(file.theta),
            tol: self.tol.or(file.tol),
            max_iter: self.max_iter.or(file.max_iter),
            restart: self.restart.or(file.restart),
            grid: if self.grid.is_empty() {
                file.grid
            } else {
                self.grid
            },
            spectral: self.spectral || file.spectral,
            presets: self.presets || file.presets,
            history: self.history || file.history,
            out: self.out.or(file.out),
            dry_run: self.dry_run || file.dry_run,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.generate.is_some() && self.import.is_some() {
            return bad("give either --generate or --import, not both".into());
        }
        for (name, v) in [
            ("omega", self.omega),
            ("tau", self.tau),
            ("theta", self.theta),
            ("tol", self.tol),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return bad(format!("--{name} must be positive, got {v}"));
                }
            }
        }
        if self.max_iter == Some(0) || self.restart == Some(0) {
            return bad("--max-iter and --restart must be at least 1".into());
        }
        if let Some(s) = self.size {
            if s < 2 {
                return bad(format!("--size must be at least 2, got {s}"));
            }
        }
        for g in &self.grid {
            g.parse::<crate::theory::GridAxis>()?;
        }
        if let Some(path) = &self.import {
            if !path.is_file() {
                return bad(format!("manifest {} does not exist", path.display()));
            }
        }
        Ok(())
    }

    /// Generated problems default to lc-like with N = 4 and seed 0. The
    /// synthetic family uses `n = 3N`, `m = p = N`.
    pub fn build_problem(&self) -> Result<DoubleSaddleProblem> {
        if let Some(path) = &self.import {
            return import_mm(path);
        }
        let size = self.size.unwrap_or(4);
        let seed = self.seed.unwrap_or(0);
        match self.generate.unwrap_or(GenerateKind::LcLike) {
            GenerateKind::LcLike => generate_structured(seed, size, Family::LcLike),
            GenerateKind::DarcyLike => generate_structured(seed, size, Family::DarcyLike),
            GenerateKind::Synthetic => {
                let mut spec = SyntheticSpec::new(3 * size, size, size);
                spec.nu_target = self.nu_target;
                generate_synthetic(seed, &spec)
            }
        }
    }
}
