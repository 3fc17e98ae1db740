//! Compressed-row storage for the large A side, and a dense/sparse sum type
//! used wherever an A matrix is applied or factorized.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu as SparseLuFactor;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Col, Mat};

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{is_finite, random_complex_col, seeded_rng, CCol, CMat, DenseLu};

/// Below this order sparse matrices are densified before factorization.
pub const DENSE_FALLBACK: usize = 500;

/// Row-compressed matrix. Explicitly stored zeros are kept in the pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<c64>,
}

impl CsrMatrix {
    /// Duplicate `(i, j)` entries are summed; entries are sorted by column
    /// within each row.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: &[(usize, usize, c64)],
    ) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, c64)> = Vec::with_capacity(entries.len());
        for &(i, j, v) in entries {
            if i >= nrows || j >= ncols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside a {nrows}x{ncols} matrix"
                )));
            }
            sorted.push((i, j, v));
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<c64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
            last = Some((i, j));
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn from_dense(a: &CMat) -> Self {
        let mut t = Vec::new();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if a[(i, j)] != c64::new(0.0, 0.0) {
                    t.push((i, j, a[(i, j)]));
                }
            }
        }
        Self::from_triplets(a.nrows(), a.ncols(), &t).expect("indices in range")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, c64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(move |k| (i, self.col_idx[k], self.values[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> Option<c64> {
        let row = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[row.clone()]
            .binary_search(&j)
            .ok()
            .map(|k| self.values[row.start + k])
    }

    pub fn apply(&self, x: &CCol) -> CCol {
        Col::from_fn(self.nrows, |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(|k| self.values[k] * x[self.col_idx[k]])
                .sum()
        })
    }

    /// `A^H x`
    pub fn apply_adjoint(&self, x: &CCol) -> CCol {
        let mut out = Col::zeros(self.ncols);
        for (i, j, v) in self.triplets() {
            out[j] += v.conj() * x[i];
        }
        out
    }

    pub fn to_dense(&self) -> CMat {
        let mut out = Mat::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            out[(i, j)] += v;
        }
        out
    }

    pub fn norm_fro(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn map_values(&self, f: impl Fn(usize, c64) -> c64) -> Self {
        let mut out = self.clone();
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out.values[k] = f(i, self.values[k]);
            }
        }
        out
    }

    fn to_faer(&self) -> SparseColMat<usize, c64> {
        let t: Vec<_> = self
            .triplets()
            .map(|(i, j, v)| Triplet::new(i, j, v))
            .collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &t).expect("valid pattern")
    }
}

/// An A-side coefficient: dense, or compressed rows.
#[derive(Clone, Debug, PartialEq)]
pub enum AMatrix {
    Dense(CMat),
    Sparse(CsrMatrix),
}

impl AMatrix {
    pub fn nrows(&self) -> usize {
        match self {
            AMatrix::Dense(a) => a.nrows(),
            AMatrix::Sparse(a) => a.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            AMatrix::Dense(a) => a.ncols(),
            AMatrix::Sparse(a) => a.ncols(),
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, AMatrix::Sparse(_))
    }

    pub fn apply(&self, x: &CCol) -> CCol {
        match self {
            AMatrix::Dense(a) => a * x,
            AMatrix::Sparse(a) => a.apply(x),
        }
    }

    pub fn apply_adjoint(&self, x: &CCol) -> CCol {
        match self {
            AMatrix::Dense(a) => a.adjoint() * x,
            AMatrix::Sparse(a) => a.apply_adjoint(x),
        }
    }

    pub fn norm_fro(&self) -> f64 {
        match self {
            AMatrix::Dense(a) => a.norm_l2(),
            AMatrix::Sparse(a) => a.norm_fro(),
        }
    }

    pub fn to_dense(&self) -> CMat {
        match self {
            AMatrix::Dense(a) => a.clone(),
            AMatrix::Sparse(a) => a.to_dense(),
        }
    }

    /// Left-multiplies by `diag(d)`.
    pub fn scale_rows(&self, d: &[c64]) -> AMatrix {
        match self {
            AMatrix::Dense(a) => {
                AMatrix::Dense(Mat::from_fn(a.nrows(), a.ncols(), |i, j| d[i] * a[(i, j)]))
            }
            AMatrix::Sparse(a) => AMatrix::Sparse(a.map_values(|i, v| d[i] * v)),
        }
    }

    pub fn scaled(&self, s: c64) -> AMatrix {
        match self {
            AMatrix::Dense(a) => {
                AMatrix::Dense(Mat::from_fn(a.nrows(), a.ncols(), |i, j| s * a[(i, j)]))
            }
            AMatrix::Sparse(a) => AMatrix::Sparse(a.map_values(|_, v| s * v)),
        }
    }

    pub fn diagonal(&self) -> Vec<c64> {
        let n = self.nrows().min(self.ncols());
        match self {
            AMatrix::Dense(a) => (0..n).map(|i| a[(i, i)]).collect(),
            AMatrix::Sparse(a) => (0..n).map(|i| a.get(i, i).unwrap_or_default()).collect(),
        }
    }
}

/// `sum_k coeffs[k] * mats[k]`; sparse when every term is sparse.
pub fn combine(mats: &[&AMatrix], coeffs: &[c64]) -> AMatrix {
    let n = mats[0].nrows();
    let m = mats[0].ncols();
    if mats.iter().all(|a| a.is_sparse()) {
        let mut t = Vec::new();
        for (a, &s) in mats.iter().zip(coeffs) {
            if let AMatrix::Sparse(a) = a {
                t.extend(a.triplets().map(|(i, j, v)| (i, j, s * v)));
            }
        }
        AMatrix::Sparse(CsrMatrix::from_triplets(n, m, &t).expect("indices in range"))
    } else {
        let mut out = Mat::<c64>::zeros(n, m);
        for (a, &s) in mats.iter().zip(coeffs) {
            match a {
                AMatrix::Dense(d) => {
                    for j in 0..m {
                        for i in 0..n {
                            out[(i, j)] += s * d[(i, j)];
                        }
                    }
                }
                AMatrix::Sparse(sp) => {
                    for (i, j, v) in sp.triplets() {
                        out[(i, j)] += s * v;
                    }
                }
            }
        }
        AMatrix::Dense(out)
    }
}

/// LU factorization of an `AMatrix`, dense below `DENSE_FALLBACK`.
pub enum Factor {
    Dense(DenseLu),
    Sparse {
        lu: SparseLuFactor<usize, c64>,
        norm_fro: f64,
        n: usize,
    },
}

impl Factor {
    pub fn new(a: &AMatrix) -> Result<Self> {
        match a {
            AMatrix::Sparse(s) if s.nrows() >= DENSE_FALLBACK => {
                let lu = s.to_faer().sp_lu().map_err(|_| Error::SingularMatrix {
                    context: "sparse LU".into(),
                })?;
                Ok(Factor::Sparse {
                    lu,
                    norm_fro: s.norm_fro(),
                    n: s.nrows(),
                })
            }
            _ => Ok(Factor::Dense(DenseLu::new(&a.to_dense()))),
        }
    }

    pub fn solve(&self, rhs: &CCol) -> CCol {
        match self {
            Factor::Dense(lu) => lu.solve(rhs),
            Factor::Sparse { lu, .. } => lu.solve(rhs),
        }
    }

    pub fn solve_adjoint(&self, rhs: &CCol) -> CCol {
        match self {
            Factor::Dense(lu) => lu.solve_adjoint(rhs),
            Factor::Sparse { lu, .. } => lu.solve_adjoint(rhs),
        }
    }

    /// Growth of a fixed pseudo-random solve, see `DenseLu::growth`.
    pub fn growth(&self) -> f64 {
        match self {
            Factor::Dense(lu) => lu.growth(),
            Factor::Sparse { lu, norm_fro, n } => {
                let mut rng = seeded_rng(0x5eed_9a11);
                let b = random_complex_col(*n, &mut rng);
                let x: CCol = lu.solve(&b);
                if !is_finite(&x) {
                    return f64::INFINITY;
                }
                norm_fro * x.norm_l2() / b.norm_l2()
            }
        }
    }
}
