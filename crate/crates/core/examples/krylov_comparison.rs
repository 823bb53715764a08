//! GMRES with the GSOR, block triangular and no preconditioner, and MINRES
//! with the block-diagonal preconditioner, on both structured families.

use gsor::krylov::{gmres_solve_problem, minres_solve_problem, KrylovOptions, PreconditionerKind};
use gsor::problem::{generate_structured, Family};

fn main() -> gsor::Result<()> {
    let opts = KrylovOptions {
        tol: 1e-10,
        ..Default::default()
    };
    for (family, size) in [(Family::LcLike, 16), (Family::DarcyLike, 3)] {
        let p = generate_structured(0, size, family)?;
        println!(
            "{family:?}: n={} m={} p={} (m+p+1 = {})",
            p.n(),
            p.m(),
            p.p_dim(),
            p.m() + p.p_dim() + 1
        );
        let runs = [
            ("gmres + gsor(1, 1)", PreconditionerKind::gsor(1.0, 1.0)),
            ("gmres + gsor(0.5, 1.5)", PreconditionerKind::gsor(0.5, 1.5)),
            (
                "gmres + block triangular",
                PreconditionerKind::BlockTriangular,
            ),
            ("gmres, unpreconditioned", PreconditionerKind::Identity),
        ];
        for (label, kind) in runs {
            let (_, r) = gmres_solve_problem(&p, kind, &opts)?;
            println!(
                "  {label:<26} {:?} iter {:>4} res {:.2e} solves {}",
                r.status, r.iterations, r.final_res, r.inner_solves
            );
        }
        let (_, r) = minres_solve_problem(&p, &opts)?;
        println!(
            "  {:<26} {:?} iter {:>4} res {:.2e} solves {}",
            "minres + block diagonal", r.status, r.iterations, r.final_res, r.inner_solves
        );
    }
    Ok(())
}
