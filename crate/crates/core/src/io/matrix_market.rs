//! Matrix Market reader and writer.
//!
//! Reads `coordinate` and `array` files with `real`, `complex`, `integer` or
//! `pattern` fields and `general`, `symmetric`, `skew-symmetric` or
//! `hermitian` storage. Coordinate files keep explicitly listed zeros in the
//! sparsity pattern.

use std::fmt::Write as _;
use std::path::Path;

use faer::Mat;

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::sparse::{AMatrix, CsrMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
    Integer,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub format: Format,
    pub field: Field,
    pub symmetry: Symmetry,
}

/// A parsed file: coordinate files give `Sparse`, array files `Dense`.
#[derive(Clone, Debug)]
pub struct MmMatrix {
    pub header: Header,
    pub matrix: AMatrix,
}

struct Cursor<'a> {
    path: &'a str,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Cursor<'a> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_string(),
            line,
            message: message.into(),
        }
    }

    /// Next line that is neither blank nor a comment, with its 1-based number.
    fn next_data(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.lines.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            return Some((i + 1, t));
        }
        None
    }
}

fn parse_header(cur: &mut Cursor<'_>) -> Result<Header> {
    let Some((_, first)) = cur.lines.next() else {
        return Err(cur.err(1, "empty file"));
    };
    let words: Vec<String> = first
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(cur.err(
            1,
            "expected '%%MatrixMarket matrix <format> <field> <symmetry>'",
        ));
    }
    let format = match words[2].as_str() {
        "coordinate" => Format::Coordinate,
        "array" => Format::Array,
        other => return Err(cur.err(1, format!("unknown format '{other}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "double" => Field::Real,
        "complex" => Field::Complex,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(cur.err(1, format!("unknown field '{other}'"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(cur.err(1, format!("unknown symmetry '{other}'"))),
    };
    if format == Format::Array && field == Field::Pattern {
        return Err(cur.err(1, "pattern field requires coordinate format"));
    }
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(cur.err(1, "hermitian symmetry requires a complex field"));
    }
    Ok(Header {
        format,
        field,
        symmetry,
    })
}

fn parse_usize(cur: &Cursor<'_>, line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| {
        cur.err(
            line,
            format!("{what}: '{tok}' is not a nonnegative integer"),
        )
    })
}

fn parse_value(cur: &Cursor<'_>, line: usize, toks: &[&str], field: Field) -> Result<c64> {
    let num = |t: &str| -> Result<f64> {
        t.parse::<f64>()
            .map_err(|_| cur.err(line, format!("'{t}' is not a number")))
    };
    let want = match field {
        Field::Pattern => 0,
        Field::Complex => 2,
        Field::Real | Field::Integer => 1,
    };
    if toks.len() != want {
        return Err(cur.err(
            line,
            format!("expected {want} value token(s), found {}", toks.len()),
        ));
    }
    Ok(match field {
        Field::Pattern => c64::new(1.0, 0.0),
        Field::Complex => c64::new(num(toks[0])?, num(toks[1])?),
        Field::Integer => {
            let v: i64 = toks[0]
                .parse()
                .map_err(|_| cur.err(line, format!("'{}' is not an integer", toks[0])))?;
            c64::new(v as f64, 0.0)
        }
        Field::Real => c64::new(num(toks[0])?, 0.0),
    })
}

/// Value stored at the mirrored position `(j, i)` of a symmetric-type file.
fn mirror(sym: Symmetry, v: c64) -> Option<c64> {
    match sym {
        Symmetry::General => None,
        Symmetry::Symmetric => Some(v),
        Symmetry::SkewSymmetric => Some(-v),
        Symmetry::Hermitian => Some(v.conj()),
    }
}

/// Parses Matrix Market text. `path` is used only in error messages.
pub fn parse(text: &str, path: &str) -> Result<MmMatrix> {
    let mut cur = Cursor {
        path,
        lines: text.lines().enumerate(),
    };
    let header = parse_header(&mut cur)?;
    let (size_line, size) = cur
        .next_data()
        .ok_or_else(|| cur.err(1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let expect = if header.format == Format::Coordinate {
        3
    } else {
        2
    };
    if dims.len() != expect {
        return Err(cur.err(size_line, format!("size line needs {expect} integers")));
    }
    let nrows = parse_usize(&cur, size_line, dims[0], "rows")?;
    let ncols = parse_usize(&cur, size_line, dims[1], "columns")?;
    if header.symmetry != Symmetry::General && nrows != ncols {
        return Err(cur.err(size_line, "symmetric storage requires a square matrix"));
    }
    let sym = header.symmetry;

    let matrix = match header.format {
        Format::Coordinate => {
            let nnz = parse_usize(&cur, size_line, dims[2], "entries")?;
            let mut entries =
                Vec::with_capacity(nnz * if sym == Symmetry::General { 1 } else { 2 });
            for k in 0..nnz {
                let (line, t) = cur.next_data().ok_or_else(|| {
                    cur.err(size_line, format!("expected {nnz} entries, found {k}"))
                })?;
                let toks: Vec<&str> = t.split_whitespace().collect();
                if toks.len() < 2 {
                    return Err(cur.err(line, "entry needs row and column indices"));
                }
                let i = parse_usize(&cur, line, toks[0], "row index")?;
                let j = parse_usize(&cur, line, toks[1], "column index")?;
                if i == 0 || j == 0 || i > nrows || j > ncols {
                    return Err(cur.err(line, format!("index ({i}, {j}) outside {nrows}x{ncols}")));
                }
                let v = parse_value(&cur, line, &toks[2..], header.field)?;
                let (i, j) = (i - 1, j - 1);
                if sym != Symmetry::General && j > i {
                    return Err(cur.err(line, "symmetric storage lists the lower triangle only"));
                }
                if sym == Symmetry::SkewSymmetric && i == j {
                    return Err(cur.err(line, "skew-symmetric storage has no diagonal entries"));
                }
                entries.push((i, j, v));
                if i != j {
                    if let Some(m) = mirror(sym, v) {
                        entries.push((j, i, m));
                    }
                }
            }
            if let Some((line, _)) = cur.next_data() {
                return Err(cur.err(line, format!("more than the declared {nnz} entries")));
            }
            AMatrix::Sparse(CsrMatrix::from_triplets(nrows, ncols, &entries)?)
        }
        Format::Array => {
            let mut a = Mat::<c64>::zeros(nrows, ncols);
            // Column-major order over the stored triangle.
            let mut slots = Vec::new();
            for j in 0..ncols {
                let start = match sym {
                    Symmetry::General => 0,
                    Symmetry::SkewSymmetric => j + 1,
                    Symmetry::Symmetric | Symmetry::Hermitian => j,
                };
                for i in start..nrows {
                    slots.push((i, j));
                }
            }
            for (k, &(i, j)) in slots.iter().enumerate() {
                let (line, t) = cur.next_data().ok_or_else(|| {
                    cur.err(
                        size_line,
                        format!("expected {} values, found {k}", slots.len()),
                    )
                })?;
                let toks: Vec<&str> = t.split_whitespace().collect();
                let v = parse_value(&cur, line, &toks, header.field)?;
                a[(i, j)] = v;
                if i != j {
                    if let Some(m) = mirror(sym, v) {
                        a[(j, i)] = m;
                    }
                }
            }
            if let Some((line, _)) = cur.next_data() {
                return Err(cur.err(
                    line,
                    format!("more than the declared {} values", slots.len()),
                ));
            }
            AMatrix::Dense(a)
        }
    };
    Ok(MmMatrix { header, matrix })
}

pub fn read(path: &Path) -> Result<MmMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse(&text, &path.display().to_string())
}

/// Reads a matrix and densifies it.
pub fn read_dense(path: &Path) -> Result<CMat> {
    Ok(read(path)?.matrix.to_dense())
}

/// Reads an `n x 1` (or `1 x n`) matrix as a column.
pub fn read_vector(path: &Path) -> Result<crate::linalg::CCol> {
    let a = read_dense(path)?;
    match (a.nrows(), a.ncols()) {
        (_, 1) => Ok(a.col(0).to_owned()),
        (1, _) => Ok(a.row(0).transpose().to_owned()),
        (r, c) => Err(Error::DimensionMismatch(format!(
            "{} holds a {r}x{c} matrix, expected a vector",
            path.display()
        ))),
    }
}

fn push_value(out: &mut String, v: c64) {
    // `{:e}` on f64 prints the shortest representation that round-trips.
    let _ = write!(out, "{:e} {:e}", v.re, v.im);
}

/// Complex general text: `coordinate` for sparse input, `array` for dense.
pub fn to_string(a: &AMatrix) -> String {
    let mut out = String::new();
    match a {
        AMatrix::Sparse(s) => {
            out.push_str("%%MatrixMarket matrix coordinate complex general\n");
            let _ = writeln!(out, "{} {} {}", s.nrows(), s.ncols(), s.nnz());
            for (i, j, v) in s.triplets() {
                let _ = write!(out, "{} {} ", i + 1, j + 1);
                push_value(&mut out, v);
                out.push('\n');
            }
        }
        AMatrix::Dense(d) => {
            out.push_str("%%MatrixMarket matrix array complex general\n");
            let _ = writeln!(out, "{} {}", d.nrows(), d.ncols());
            for j in 0..d.ncols() {
                for i in 0..d.nrows() {
                    push_value(&mut out, d[(i, j)]);
                    out.push('\n');
                }
            }
        }
    }
    out
}

pub fn write(path: &Path, a: &AMatrix) -> Result<()> {
    std::fs::write(path, to_string(a))?;
    Ok(())
}

pub fn write_dense(path: &Path, a: &CMat) -> Result<()> {
    write(path, &AMatrix::Dense(a.clone()))
}

pub fn write_vector(path: &Path, v: &crate::linalg::CCol) -> Result<()> {
    write_dense(path, &Mat::from_fn(v.nrows(), 1, |i, _| v[i]))
}
