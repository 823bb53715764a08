//! Command-line front end: `solve`, `region`, `spectrum` and `bounds`.
//!
//! Every command is deterministic given its flags and seed. Timing goes to
//! stderr and to a separate `timing.json`, so all other outputs are
//! byte-identical across runs.

mod config;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::krylov::{
    gmres_solve_problem, minres_solve_problem, preconditioned_spectrum, spectrum_csv,
    system_spectrum, KrylovOptions, PreconditionerKind,
};
use crate::problem::{spectral_data, DoubleSaddleProblem, SpectralData};
use crate::solvers::{
    gbsor_default_omega, gbsor_omega_bound, gbsor_solve, gsor_solve, uzawa_solve, GsorParams,
    SolveOptions, SolveReport, SolveStatus,
};
use crate::theory::{
    bounds_report, region_csv, region_scan, select_params, GridAxis, RegionMode, RegionSpec,
};

pub use config::{GenerateKind, PrecondChoice, RunConfig, SolverKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MAX_ITER: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "gsor",
    version,
    about = "GSOR experiments on double saddle-point systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write a JSON report.
    Solve(RunConfig),
    /// Scan a two-parameter grid and write `param1,param2,converged,iters`.
    Region(RunConfig),
    /// Dense spectra of the system matrix and of the preconditioned matrix.
    Spectrum(RunConfig),
    /// Spectral data, parameter bounds and eigenvalue enclosure as JSON.
    Bounds(RunConfig),
}

/// Maps a library error to the process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter(_)
        | Error::DimensionMismatch(_)
        | Error::Manifest(_)
        | Error::MatrixMarket(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::NotSquare { .. } => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing the primary output to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    let (name, cfg) = match command {
        Command::Solve(c) => ("solve", c),
        Command::Region(c) => ("region", c),
        Command::Spectrum(c) => ("spectrum", c),
        Command::Bounds(c) => ("bounds", c),
    };
    let cfg = cfg.resolve()?;
    if cfg.dry_run {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(
                &json!({ "command": name, "config": cfg, "valid": true })
            )?
        )?;
        return Ok(EXIT_OK);
    }
    let problem = cfg.build_problem()?;
    match name {
        "solve" => cmd_solve(&cfg, &problem, out),
        "region" => cmd_region(&cfg, &problem, out),
        "spectrum" => cmd_spectrum(&cfg, &problem, out),
        _ => cmd_bounds(&cfg, &problem, out),
    }
}

fn write_or_print(cfg: &RunConfig, file: &str, text: &str, out: &mut dyn Write) -> Result<()> {
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(file), text)?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Serialize)]
struct ProblemSummary {
    n: usize,
    m: usize,
    p: usize,
    p_source: crate::problem::PSource,
}

fn summary(p: &DoubleSaddleProblem) -> ProblemSummary {
    ProblemSummary {
        n: p.n(),
        m: p.m(),
        p: p.p_dim(),
        p_source: p.p_source(),
    }
}

fn status_code(s: SolveStatus) -> i32 {
    match s {
        SolveStatus::Converged => EXIT_OK,
        SolveStatus::MaxIter => EXIT_MAX_ITER,
        SolveStatus::Diverged => EXIT_DIVERGED,
    }
}

/// Fills unset GSOR parameters: `θ` defaults to 1 and `(τ, ω)` come from
/// [`select_params`].
fn gsor_params(cfg: &RunConfig, spectral: &SpectralData) -> Result<GsorParams> {
    let theta = cfg.theta.unwrap_or(1.0);
    if let (Some(omega), Some(tau)) = (cfg.omega, cfg.tau) {
        return GsorParams::new(omega, tau, theta);
    }
    let sel = select_params(spectral, theta)?;
    let tau = cfg.tau.unwrap_or(sel.tau);
    let omega = cfg
        .omega
        .unwrap_or_else(|| 0.5 * crate::theory::omega_upper(spectral, theta, tau));
    GsorParams::new(omega, tau, theta)
}

fn cmd_solve(cfg: &RunConfig, problem: &DoubleSaddleProblem, out: &mut dyn Write) -> Result<i32> {
    let solver = cfg.solver.unwrap_or(SolverKind::Gsor);
    let needs_spectral = match solver {
        SolverKind::Gsor => cfg.omega.is_none() || cfg.tau.is_none(),
        SolverKind::Uzawa => cfg.tau.is_none(),
        SolverKind::Gbsor => cfg.omega.is_none(),
        _ => false,
    };
    let spectral = needs_spectral.then(|| spectral_data(problem));
    let opts = SolveOptions {
        tol: cfg.tol.unwrap_or(1e-8),
        max_iter: cfg.max_iter.unwrap_or(100_000),
        record_history: cfg.history,
    };
    let kopts = KrylovOptions {
        restart: cfg.restart.unwrap_or(100),
        tol: opts.tol,
        max_iter: opts.max_iter,
        record_history: cfg.history,
    };

    let (params, report): (serde_json::Value, SolveReport) = match solver {
        SolverKind::Gsor => {
            let params = match &spectral {
                Some(s) => gsor_params(cfg, s)?,
                None => GsorParams::new(
                    cfg.omega.unwrap(),
                    cfg.tau.unwrap(),
                    cfg.theta.unwrap_or(1.0),
                )?,
            };
            (
                serde_json::to_value(params)?,
                gsor_solve(problem, params, &opts, None)?.1,
            )
        }
        SolverKind::Uzawa => {
            let tau = match (cfg.tau, &spectral) {
                (Some(t), _) => t,
                (None, Some(s)) if s.nu_max < 1.0 => (1.0 - s.nu_max) / s.mu_max,
                _ => 1.0,
            };
            (
                json!({ "omega": 1.0, "tau": tau, "theta": 1.0 }),
                uzawa_solve(problem, tau, &opts, None)?.1,
            )
        }
        SolverKind::Gbsor => {
            let omega = cfg
                .omega
                .unwrap_or_else(|| gbsor_default_omega(spectral.as_ref().unwrap()));
            (
                json!({ "omega": omega }),
                gbsor_solve(problem, omega, &opts, None)?.1,
            )
        }
        SolverKind::Gmres => {
            let kind = match cfg.preconditioner.unwrap_or(PrecondChoice::Gsor) {
                PrecondChoice::Gsor => {
                    PreconditionerKind::gsor(cfg.tau.unwrap_or(1.0), cfg.theta.unwrap_or(1.0))
                }
                PrecondChoice::BlockDiagonal => PreconditionerKind::BlockDiagonal,
                PrecondChoice::BlockTriangular => PreconditionerKind::BlockTriangular,
                PrecondChoice::None => PreconditionerKind::Identity,
            };
            (
                json!({ "preconditioner": kind, "restart": kopts.restart }),
                gmres_solve_problem(problem, kind, &kopts)?.1,
            )
        }
        SolverKind::Minres => (
            json!({ "preconditioner": PreconditionerKind::BlockDiagonal }),
            minres_solve_problem(problem, &kopts)?.1,
        ),
    };

    let doc = json!({
        "command": "solve",
        "solver": solver,
        "problem": summary(problem),
        "spectral": spectral,
        "params": params,
        "tol": opts.tol,
        "max_iter": opts.max_iter,
        "status": report.status,
        "iter": report.iterations,
        "res": report.final_res,
        "inner_solves": report.inner_solves,
    });
    let timing =
        json!({ "cpu_seconds": report.wall_time, "factor_seconds": problem.factor_seconds() });
    write_or_print(cfg, "report.json", &to_json(&doc)?, out)?;
    if let Some(dir) = &cfg.out {
        fs::write(dir.join("timing.json"), to_json(&timing)?)?;
        if let Some(csv) = report.history_csv() {
            fs::write(dir.join("history.csv"), csv)?;
        }
    }
    eprintln!(
        "{:?}: iter {} res {:.3e} cpu {:.3}s (factorization {:.3}s)",
        report.status,
        report.iterations,
        report.final_res,
        report.wall_time,
        problem.factor_seconds()
    );
    Ok(status_code(report.status))
}

fn cmd_region(cfg: &RunConfig, problem: &DoubleSaddleProblem, out: &mut dyn Write) -> Result<i32> {
    if cfg.grid.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "region needs exactly two --grid axes, got {}",
            cfg.grid.len()
        )));
    }
    let first: GridAxis = cfg.grid[0].parse()?;
    let second: GridAxis = cfg.grid[1].parse()?;
    let mut spec = RegionSpec::new(first, second, 1.0);
    spec.fixed = match spec.fixed_param()? {
        crate::theory::Param::Omega => cfg.omega,
        crate::theory::Param::Tau => cfg.tau,
        crate::theory::Param::Theta => cfg.theta,
    }
    .unwrap_or(1.0);
    spec.opts.tol = cfg.tol.unwrap_or(spec.opts.tol);
    spec.opts.max_iter = cfg.max_iter.unwrap_or(spec.opts.max_iter);
    if cfg.spectral {
        spec.mode = RegionMode::Spectral;
    }
    let cells = region_scan(problem, &spec)?;
    write_or_print(cfg, "region.csv", &region_csv(&cells), out)?;
    Ok(EXIT_OK)
}

fn cmd_spectrum(
    cfg: &RunConfig,
    problem: &DoubleSaddleProblem,
    out: &mut dyn Write,
) -> Result<i32> {
    let pairs: Vec<(f64, f64)> = if cfg.presets {
        vec![(1.0, 1.0), (0.1, 1.0), (1.0, 0.1)]
    } else {
        vec![(cfg.tau.unwrap_or(1.0), cfg.theta.unwrap_or(1.0))]
    };
    let sys = spectrum_csv(&system_spectrum(problem)?);
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("system_spectrum.csv"), sys)?;
            for (tau, theta) in pairs {
                let ev = preconditioned_spectrum(problem, PreconditionerKind::gsor(tau, theta))?;
                fs::write(
                    dir.join(format!("preconditioned_tau{tau}_theta{theta}.csv")),
                    spectrum_csv(&ev),
                )?;
            }
        }
        None => {
            let (tau, theta) = pairs[0];
            let ev = preconditioned_spectrum(problem, PreconditionerKind::gsor(tau, theta))?;
            write!(out, "{}", spectrum_csv(&ev))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bounds(cfg: &RunConfig, problem: &DoubleSaddleProblem, out: &mut dyn Write) -> Result<i32> {
    let spectral = spectral_data(problem);
    let report = bounds_report(spectral, cfg.tau.unwrap_or(1.0), cfg.theta.unwrap_or(1.0))?;
    let doc = json!({
        "command": "bounds",
        "problem": summary(problem),
        "eigen_converged": spectral.converged,
        "bounds": report,
        "gbsor_omega_bound": gbsor_omega_bound(&spectral),
        "gbsor_default_omega": gbsor_default_omega(&spectral),
    });
    write_or_print(cfg, "bounds.json", &to_json(&doc)?, out)?;
    Ok(EXIT_OK)
}
