//! Multi-block problem bundles: Matrix Market files plus a JSON manifest.
//!
//! ```json
//! { "n": 12, "m": 4, "p": 4,
//!   "A": "A.mtx", "B": "B.mtx", "C": "C.mtx", "D": "D.mtx",
//!   "P": "P.mtx", "rhs": "rhs.mtx", "solution": "solution.mtx" }
//! ```
//!
//! `P` and `solution` are optional. File names are relative to the
//! manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::mm;
use crate::problem::{DoubleSaddleProblem, PSource};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p_file: Option<String>,
    /// Stacked `(f, g, h)` of length `n + m + p`.
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
}

fn check(name: &str, got: (usize, usize), want: (usize, usize)) -> Result<()> {
    if got != want {
        return Err(Error::Manifest(format!(
            "{name} is {}x{}, manifest implies {}x{}",
            got.0, got.1, want.0, want.1
        )));
    }
    Ok(())
}

/// Loads the bundle described by the manifest at `manifest_path`.
pub fn import_mm(manifest_path: &Path) -> Result<DoubleSaddleProblem> {
    let text = fs::read_to_string(manifest_path)?;
    let man: Manifest = serde_json::from_str(&text).map_err(|e| Error::Manifest(e.to_string()))?;
    let dir = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let path = |f: &str| -> PathBuf { dir.join(f) };
    let (n, m, p) = (man.n, man.m, man.p);

    let a = mm::read_sparse(&path(&man.a))?;
    check("A", (a.rows(), a.cols()), (n, n))?;
    let b = mm::read_sparse(&path(&man.b))?;
    check("B", (b.rows(), b.cols()), (m, n))?;
    let c = mm::read_sparse(&path(&man.c))?;
    check("C", (c.rows(), c.cols()), (p, n))?;
    let d = mm::read_sparse(&path(&man.d))?;
    check("D", (d.rows(), d.cols()), (p, p))?;
    let pw = match &man.p_file {
        Some(f) => {
            let pw = mm::read_sparse(&path(f))?;
            check("P", (pw.rows(), pw.cols()), (m, m))?;
            Some(pw)
        }
        None => None,
    };
    let rhs = mm::read_vector(&path(&man.rhs))?;
    check("rhs", (rhs.len(), 1), (n + m + p, 1))?;
    let solution = match &man.solution {
        Some(f) => {
            let w = mm::read_vector(&path(f))?;
            check("solution", (w.len(), 1), (n + m + p, 1))?;
            Some(w)
        }
        None => None,
    };

    let problem = DoubleSaddleProblem::new(
        a,
        b,
        c,
        d,
        pw,
        rhs[..n].to_vec(),
        rhs[n..n + m].to_vec(),
        rhs[n + m..].to_vec(),
    )?;
    Ok(match solution {
        Some(w) => problem.with_known_solution(w),
        None => problem,
    })
}

/// Writes the blocks, right-hand side and manifest into `dir` and returns
/// the manifest path. `P` is written only when it was supplied by the
/// caller; a default `P` is rebuilt identically on import.
pub fn export_mm(problem: &DoubleSaddleProblem, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut man = Manifest {
        n: problem.n(),
        m: problem.m(),
        p: problem.p_dim(),
        a: "A.mtx".into(),
        b: "B.mtx".into(),
        c: "C.mtx".into(),
        d: "D.mtx".into(),
        p_file: None,
        rhs: "rhs.mtx".into(),
        solution: None,
    };
    mm::save_sparse(problem.a(), &dir.join(&man.a))?;
    mm::save_sparse(problem.b(), &dir.join(&man.b))?;
    mm::save_sparse(problem.c(), &dir.join(&man.c))?;
    mm::save_sparse(problem.d(), &dir.join(&man.d))?;
    if problem.p_source() == PSource::Supplied {
        let f = "P.mtx".to_string();
        mm::save_sparse(problem.p(), &dir.join(&f))?;
        man.p_file = Some(f);
    }
    mm::save_vector(&problem.rhs(), &dir.join(&man.rhs))?;
    if let Some(w) = problem.planted_solution() {
        let f = "solution.mtx".to_string();
        mm::save_vector(w, &dir.join(&f))?;
        man.solution = Some(f);
    }
    let path = dir.join(MANIFEST_NAME);
    fs::write(&path, serde_json::to_string_pretty(&man)? + "\n")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{generate_synthetic, PChoice, SyntheticSpec};

    #[test]
    fn round_trip_is_value_identical() {
        let dir = tempfile::tempdir().unwrap();
        for choice in [PChoice::Schur, PChoice::Identity] {
            let mut spec = SyntheticSpec::new(15, 6, 5);
            spec.p_choice = choice;
            let orig = generate_synthetic(11, &spec).unwrap();
            let path = export_mm(&orig, dir.path()).unwrap();
            let back = import_mm(&path).unwrap();
            assert_eq!(back.a(), orig.a());
            assert_eq!(back.b(), orig.b());
            assert_eq!(back.c(), orig.c());
            assert_eq!(back.d(), orig.d());
            assert_eq!(back.p(), orig.p());
            assert_eq!(back.rhs(), orig.rhs());
            assert_eq!(back.planted_solution(), orig.planted_solution());
            fs::remove_dir_all(dir.path()).unwrap();
        }
    }

    #[test]
    fn manifest_dimension_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let orig = generate_synthetic(2, &SyntheticSpec::new(8, 3, 2)).unwrap();
        let path = export_mm(&orig, dir.path()).unwrap();
        let mut man: Manifest = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        man.n = 9;
        fs::write(&path, serde_json::to_string(&man).unwrap()).unwrap();
        assert!(matches!(import_mm(&path), Err(Error::Manifest(_))));
    }
}
