//! Matrix Market reading and writing.
//!
//! Sparse matrices use the `coordinate real {general|symmetric}` flavour,
//! vectors the `array real general` flavour. Values are written with 17
//! significant digits so that text round trips are value-exact.

use std::fs;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

fn mm_err(msg: impl Into<String>) -> Error {
    Error::MatrixMarket(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

struct Header {
    array: bool,
    symmetry: Symmetry,
}

fn parse_header(line: &str) -> Result<Header> {
    let tokens: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(mm_err(format!("bad banner: {line:?}")));
    }
    let array = match tokens[2].as_str() {
        "coordinate" => false,
        "array" => true,
        other => return Err(mm_err(format!("unsupported format {other}"))),
    };
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(mm_err(format!("unsupported field {}", tokens[3])));
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(mm_err(format!("unsupported symmetry {other}"))),
    };
    Ok(Header { array, symmetry })
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'))
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    tok.ok_or_else(|| mm_err(format!("line {line}: missing value")))?
        .parse::<f64>()
        .map_err(|e| mm_err(format!("line {line}: {e}")))
}

fn parse_usize(tok: Option<&str>, line: usize) -> Result<usize> {
    tok.ok_or_else(|| mm_err(format!("line {line}: missing index")))?
        .parse::<usize>()
        .map_err(|e| mm_err(format!("line {line}: {e}")))
}

pub fn parse_sparse(text: &str) -> Result<SparseMatrix> {
    let banner = text.lines().next().ok_or_else(|| mm_err("empty input"))?;
    let header = parse_header(banner)?;
    if header.array {
        return Err(mm_err("expected coordinate format for a sparse matrix"));
    }
    let mut lines = data_lines(text);
    let (ln, size) = lines.next().ok_or_else(|| mm_err("missing size line"))?;
    let mut it = size.split_whitespace();
    let rows = parse_usize(it.next(), ln)?;
    let cols = parse_usize(it.next(), ln)?;
    let nnz = parse_usize(it.next(), ln)?;
    if header.symmetry == Symmetry::Symmetric && rows != cols {
        return Err(mm_err("symmetric matrix must be square"));
    }

    let mut triplets = Vec::with_capacity(nnz * 2);
    let mut count = 0;
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        let i = parse_usize(it.next(), ln)?;
        let j = parse_usize(it.next(), ln)?;
        let v = parse_f64(it.next(), ln)?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(mm_err(format!("line {ln}: index ({i}, {j}) out of range")));
        }
        triplets.push((i - 1, j - 1, v));
        if header.symmetry == Symmetry::Symmetric && i != j {
            if j > i {
                return Err(mm_err(format!(
                    "line {ln}: symmetric file stores upper entry"
                )));
            }
            triplets.push((j - 1, i - 1, v));
        }
        count += 1;
    }
    if count != nnz {
        return Err(mm_err(format!(
            "header promises {nnz} entries, found {count}"
        )));
    }
    SparseMatrix::from_triplets(rows, cols, &triplets)
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let banner = text.lines().next().ok_or_else(|| mm_err("empty input"))?;
    let header = parse_header(banner)?;
    if !header.array {
        return Err(mm_err("expected array format for a vector"));
    }
    let mut lines = data_lines(text);
    let (ln, size) = lines.next().ok_or_else(|| mm_err("missing size line"))?;
    let mut it = size.split_whitespace();
    let rows = parse_usize(it.next(), ln)?;
    let cols = parse_usize(it.next(), ln)?;
    if cols != 1 {
        return Err(mm_err(format!("vector must have one column, got {cols}")));
    }
    let values = lines
        .map(|(ln, l)| parse_f64(l.split_whitespace().next(), ln))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != rows {
        return Err(mm_err(format!(
            "expected {rows} values, found {}",
            values.len()
        )));
    }
    Ok(values)
}

/// Formats a value with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_sparse<W: Write>(m: &SparseMatrix, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (i, j, v) in m.triplets() {
        writeln!(w, "{} {} {}", i + 1, j + 1, format_value(v))?;
    }
    Ok(())
}

pub fn write_vector<W: Write>(v: &[f64], mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} 1", v.len())?;
    for x in v {
        writeln!(w, "{}", format_value(*x))?;
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    let mut s = String::new();
    BufReader::new(fs::File::open(path)?).read_to_string(&mut s)?;
    Ok(s)
}

pub fn read_sparse(path: &Path) -> Result<SparseMatrix> {
    parse_sparse(&read_text(path)?).map_err(|e| mm_err(format!("{}: {e}", path.display())))
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    parse_vector(&read_text(path)?).map_err(|e| mm_err(format!("{}: {e}", path.display())))
}

pub fn save_sparse(m: &SparseMatrix, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_sparse(m, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn save_vector(v: &[f64], path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_vector(v, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_file_is_mirrored() {
        let text =
            "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 4.0\n2 1 2.0\n";
        let m = parse_sparse(text).unwrap();
        assert_eq!(m.get(0, 1), 2.0);
        assert_eq!(m.get(1, 0), 2.0);
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_sparse("%%MatrixMarket matrix coordinate complex general\n1 1 0\n").is_err());
        assert!(
            parse_sparse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n").is_err()
        );
        assert!(
            parse_sparse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n").is_err()
        );
        assert!(parse_vector("%%MatrixMarket matrix array real general\n3 1\n1\n2\n").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip_is_exact(
            entries in prop::collection::vec((0usize..6, 0usize..5, -1e6f64..1e6), 0..25),
            scale in prop::sample::select(vec![1.0, 1e-300, 1e300, 3.0f64.sqrt()]),
        ) {
            let t: Vec<_> = entries.into_iter().map(|(i, j, v)| (i, j, v * scale)).collect();
            let m = SparseMatrix::from_triplets(6, 5, &t).unwrap();
            let mut buf = Vec::new();
            write_sparse(&m, &mut buf).unwrap();
            let back = parse_sparse(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(&back, &m);

            let v: Vec<f64> = m.triplets().map(|(_, _, v)| v).collect();
            let mut buf = Vec::new();
            write_vector(&v, &mut buf).unwrap();
            prop_assert_eq!(parse_vector(std::str::from_utf8(&buf).unwrap()).unwrap(), v);
        }
    }
}
