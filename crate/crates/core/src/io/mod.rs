//! Problem files, command-line value syntax and result artifacts.

pub mod matrix_market;
pub mod results;

use std::path::{Path, PathBuf};

use crate::c64;
use crate::error::{Error, Result};
use crate::problem::TwoParProblem;
use crate::sparse::AMatrix;

/// File names used by `save_problem` inside a directory.
pub const MATRIX_NAMES: [&str; 6] = ["A1.mtx", "A2.mtx", "A3.mtx", "B1.mtx", "B2.mtx", "B3.mtx"];
pub const C_NAME: &str = "c.mtx";

/// Reads `A1, A2, A3, B1, B2, B3` (and `c` if given). Coordinate A files stay
/// sparse; B matrices are densified. Without `c`, the pencil's seeded
/// default is used.
pub fn load_problem(matrices: &[PathBuf; 6], c: Option<&Path>) -> Result<TwoParProblem> {
    let mut a = Vec::with_capacity(3);
    for p in &matrices[..3] {
        a.push(matrix_market::read(p)?.matrix);
    }
    let mut b = Vec::with_capacity(3);
    for p in &matrices[3..] {
        b.push(matrix_market::read_dense(p)?);
    }
    let a: [AMatrix; 3] = a.try_into().expect("three A matrices");
    let b: [crate::linalg::CMat; 3] = b.try_into().expect("three B matrices");
    let problem = match c {
        Some(path) => TwoParProblem::new(a, b, matrix_market::read_vector(path)?)?,
        None => TwoParProblem::with_default_c(a, b)?,
    };
    let label = matrices[0]
        .parent()
        .map(|d| d.display().to_string())
        .unwrap_or_default();
    Ok(problem.with_label(label))
}

/// Paths of the six matrix files and `c` inside `dir`.
pub fn problem_paths(dir: &Path) -> ([PathBuf; 6], PathBuf) {
    (MATRIX_NAMES.map(|n| dir.join(n)), dir.join(C_NAME))
}

/// Writes the problem into `dir` as `A1.mtx ... B3.mtx, c.mtx`.
pub fn save_problem(problem: &TwoParProblem, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let (paths, c_path) = problem_paths(dir);
    for j in 0..3 {
        matrix_market::write(&paths[j], problem.a(j))?;
        matrix_market::write_dense(&paths[3 + j], problem.b(j))?;
    }
    matrix_market::write_vector(&c_path, problem.c())
}

/// Parses `1.5`, `-2i`, `0.15+0.1i`, `1e-3-4e2i` (also with `j`).
pub fn parse_complex(s: &str) -> Result<c64> {
    let bad = || Error::InvalidInput(format!("cannot parse '{s}' as a complex number"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t
            .parse::<f64>()
            .map(|re| c64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // Split at the last sign that does not belong to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |p: &str| -> Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(c64::new(re, imag(&body[k..])?))
        }
        None => Ok(c64::new(0.0, imag(body)?)),
    }
}

/// `a:h:b` with `h > 0`, `a <= b`: `a, a + h, ...` up to `b` (included when
/// it lies on the grid up to rounding).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::InvalidInput(format!("grid '{s}': {why} (expected a:h:b)"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("need three fields"));
    }
    let num = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| bad("non-numeric field"))
    };
    let (a, h, b) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if !(h > 0.0) || !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(bad("need h > 0 and a <= b"));
    }
    let count = ((b - a) / h + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| a + k as f64 * h).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let cases = [
            ("0.15+0.1i", c64::new(0.15, 0.1)),
            ("-2i", c64::new(0.0, -2.0)),
            ("3", c64::new(3.0, 0.0)),
            ("1e-3-4e2i", c64::new(1e-3, -4e2)),
            ("-1e+2+i", c64::new(-100.0, 1.0)),
            ("i", c64::new(0.0, 1.0)),
        ];
        for (s, want) in cases {
            assert_eq!(parse_complex(s).unwrap(), want, "{s}");
        }
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn grid_includes_endpoint() {
        let g = parse_grid("-10:0.1:100").unwrap();
        assert_eq!(g.len(), 1101);
        assert!((g[1100] - 100.0).abs() < 1e-9);
        assert!(parse_grid("1:0:2").is_err());
    }
}
