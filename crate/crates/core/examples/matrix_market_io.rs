//! Export a generated problem as Matrix Market files plus a JSON manifest,
//! read it back and solve it.
//!
//! ```text
//! cargo run --release --example matrix_market_io [DIR]
//! ```

use std::path::PathBuf;

use gsor::problem::{export_mm, generate_synthetic, import_mm, spectral_data, SyntheticSpec};
use gsor::solvers::gsor_solve;
use gsor::theory::select_params;
use gsor::SolveOptions;

fn main() -> gsor::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("gsor_mm"));
    let mut spec = SyntheticSpec::new(40, 10, 12);
    spec.nu_target = Some(0.5);
    let original = generate_synthetic(9, &spec)?;
    let manifest = export_mm(&original, &dir)?;
    println!("wrote {}", manifest.display());
    let mut names: Vec<String> = std::fs::read_dir(&dir)?
        .map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect::<Result<_, _>>()?;
    names.sort();
    for name in names {
        println!("  {name}");
    }

    let problem = import_mm(&manifest)?;
    let s = spectral_data(&problem);
    let (w, r) = gsor_solve(
        &problem,
        select_params(&s, 1.0)?,
        &SolveOptions::default(),
        None,
    )?;
    let err = match problem.planted_solution() {
        Some(x) => w
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
        None => f64::NAN,
    };
    println!(
        "{:?} after {} iterations, max error vs stored solution {err:.2e}",
        r.status, r.iterations
    );
    Ok(())
}
