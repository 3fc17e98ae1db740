use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{dot_t, normalized, scale, CCol, CMat};
use crate::sparse::{combine, AMatrix};

/// `(A1 + lambda A2 + mu A3) x = 0`, `(B1 + lambda B2 + mu B3) y = 0`, with
/// eigenvectors `y` normalized by `c^T y = 1`.
///
/// Immutable once built; solvers only borrow it.
#[derive(Clone, Debug)]
pub struct TwoParProblem {
    a: [AMatrix; 3],
    b: [CMat; 3],
    c: CCol,
    a_norms: [f64; 3],
    b_norms: [f64; 3],
    label: String,
}

impl TwoParProblem {
    pub fn new(a: [AMatrix; 3], b: [CMat; 3], c: CCol) -> Result<Self> {
        let n = a[0].nrows();
        let m = b[0].nrows();
        let a_ok = a.iter().all(|x| x.nrows() == n && x.ncols() == n);
        let b_ok = b.iter().all(|x| x.nrows() == m && x.ncols() == m);
        if !a_ok || !b_ok || n == 0 || m == 0 || c.nrows() != m {
            let shapes: Vec<String> = a
                .iter()
                .map(|x| (x.nrows(), x.ncols()))
                .chain(b.iter().map(|x| (x.nrows(), x.ncols())))
                .zip(["A1", "A2", "A3", "B1", "B2", "B3"])
                .map(|((r, s), name)| format!("{name}: {r}x{s}"))
                .collect();
            return Err(Error::DimensionMismatch(format!(
                "{}, c: {} (A matrices must share an order n >= 1, B matrices an order m >= 1, c has length m)",
                shapes.join(", "),
                c.nrows()
            )));
        }
        if c.norm_l2() == 0.0 {
            return Err(Error::InvalidInput("normalization vector c is zero".into()));
        }
        let a_norms = [a[0].norm_fro(), a[1].norm_fro(), a[2].norm_fro()];
        let b_norms = [b[0].norm_l2(), b[1].norm_l2(), b[2].norm_l2()];
        Ok(TwoParProblem {
            a,
            b,
            c,
            a_norms,
            b_norms,
            label: String::new(),
        })
    }

    /// Same as `new`, with `c` drawn by `pencil::default_c`.
    pub fn with_default_c(a: [AMatrix; 3], b: [CMat; 3]) -> Result<Self> {
        let m = b[0].nrows();
        let placeholder = CCol::from_fn(m, |_| c64::new(1.0, 0.0));
        let p = Self::new(a, b, placeholder)?;
        let c = crate::pencil::default_c(&p)?;
        Ok(p.with_c(c))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Replaces the normalization vector. Panics on a length mismatch.
    pub fn with_c(mut self, c: CCol) -> Self {
        assert_eq!(c.nrows(), self.m(), "c must have length m");
        self.c = c;
        self
    }

    pub fn n(&self) -> usize {
        self.a[0].nrows()
    }

    pub fn m(&self) -> usize {
        self.b[0].nrows()
    }

    /// `A_{j+1}` for `j` in `0..3`.
    pub fn a(&self, j: usize) -> &AMatrix {
        &self.a[j]
    }

    pub fn b(&self, j: usize) -> &CMat {
        &self.b[j]
    }

    pub fn c(&self) -> &CCol {
        &self.c
    }

    pub fn a_norms(&self) -> [f64; 3] {
        self.a_norms
    }

    pub fn b_norms(&self) -> [f64; 3] {
        self.b_norms
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `(A1 + lambda A2 + mu A3) x`
    pub fn apply_a(&self, lambda: c64, mu: c64, x: &CCol) -> CCol {
        let mut out = self.a[0].apply(x);
        out += scale(lambda, &self.a[1].apply(x));
        out += scale(mu, &self.a[2].apply(x));
        out
    }

    pub fn a_at(&self, lambda: c64, mu: c64) -> AMatrix {
        combine(
            &[&self.a[0], &self.a[1], &self.a[2]],
            &[c64::new(1.0, 0.0), lambda, mu],
        )
    }

    /// `B1 + lambda B2 + mu B3`
    pub fn b_at(&self, lambda: c64, mu: c64) -> CMat {
        let m = self.m();
        Mat::from_fn(m, m, |i, j| {
            self.b[0][(i, j)] + lambda * self.b[1][(i, j)] + mu * self.b[2][(i, j)]
        })
    }

    pub fn a_scale(&self, lambda: c64, mu: c64) -> f64 {
        self.a_norms[0] + lambda.norm() * self.a_norms[1] + mu.norm() * self.a_norms[2]
    }

    pub fn b_scale(&self, lambda: c64, mu: c64) -> f64 {
        self.b_norms[0] + lambda.norm() * self.b_norms[1] + mu.norm() * self.b_norms[2]
    }

    /// Rescales `y` so that `c^T y = 1`; returns `false` (and a unit vector)
    /// when `|c^T y|` is below `1e-10 ||y||`.
    pub fn c_normalize(&self, y: &CCol) -> (CCol, bool) {
        let cy = dot_t(&self.c, y);
        if cy.norm() <= 1e-10 * y.norm_l2() {
            (normalized(y), false)
        } else {
            (scale(cy.inv(), y), true)
        }
    }
}

/// Relative residuals of both equations (Frobenius matrix norms, 2-norm
/// vectors).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub res_a: f64,
    pub res_b: f64,
}

/// A solution candidate `(lambda, x, mu, y)`.
#[derive(Clone, Debug)]
pub struct Quadruplet {
    pub lambda: c64,
    pub mu: c64,
    pub x: CCol,
    pub y: CCol,
    /// Left eigenvector of `M(lambda)`.
    pub v: Option<CCol>,
    /// Left eigenvector of the B pencil.
    pub w: Option<CCol>,
    pub residuals: ResidualRecord,
    /// `false` when `c^T y` was too small and `y` is unit-norm instead.
    pub c_normalized: bool,
}

impl Quadruplet {
    /// Builds a quadruplet with `y` c-normalized and residuals filled in.
    pub fn new(problem: &TwoParProblem, lambda: c64, mu: c64, x: CCol, y: CCol) -> Result<Self> {
        let (y, c_normalized) = problem.c_normalize(&y);
        let mut q = Quadruplet {
            lambda,
            mu,
            x,
            y,
            v: None,
            w: None,
            residuals: ResidualRecord::default(),
            c_normalized,
        };
        q.residuals = residuals(problem, &q)?;
        Ok(q)
    }
}

pub fn residual_a(problem: &TwoParProblem, lambda: c64, mu: c64, x: &CCol) -> f64 {
    let r = problem.apply_a(lambda, mu, x);
    r.norm_l2() / (problem.a_scale(lambda, mu) * x.norm_l2())
}

pub fn residual_b(problem: &TwoParProblem, lambda: c64, mu: c64, y: &CCol) -> f64 {
    let r: CCol = &problem.b_at(lambda, mu) * y;
    r.norm_l2() / (problem.b_scale(lambda, mu) * y.norm_l2())
}

pub fn residuals(problem: &TwoParProblem, q: &Quadruplet) -> Result<ResidualRecord> {
    if q.x.nrows() != problem.n() || q.y.nrows() != problem.m() {
        return Err(Error::DimensionMismatch(format!(
            "quadruplet has x of length {} and y of length {}, problem has n = {}, m = {}",
            q.x.nrows(),
            q.y.nrows(),
            problem.n(),
            problem.m()
        )));
    }
    Ok(ResidualRecord {
        res_a: residual_a(problem, q.lambda, q.mu, &q.x),
        res_b: residual_b(problem, q.lambda, q.mu, &q.y),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_complex_col, seeded_rng};

    fn dense(n: usize, seed: u64) -> CMat {
        let mut rng = seeded_rng(seed);
        Mat::from_fn(n, n, |_, _| random_complex_col(1, &mut rng)[0])
    }

    fn toy() -> TwoParProblem {
        let a = [0, 1, 2].map(|k| AMatrix::Dense(dense(4, k)));
        let b = [3, 4, 5].map(|k| dense(2, k));
        TwoParProblem::new(a, b, CCol::from_fn(2, |_| c64::new(1.0, 0.0))).unwrap()
    }

    #[test]
    fn rejects_mismatched_b() {
        let a = [0, 1, 2].map(|k| AMatrix::Dense(dense(4, k)));
        let b = [dense(2, 3), dense(3, 4), dense(2, 5)];
        let err = TwoParProblem::new(a, b, CCol::zeros(2)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("B1: 2x2") && msg.contains("B2: 3x3"), "{msg}");
    }

    #[test]
    fn rejects_zero_c() {
        let a = [0, 1, 2].map(|k| AMatrix::Dense(dense(4, k)));
        let b = [3, 4, 5].map(|k| dense(2, k));
        assert!(matches!(
            TwoParProblem::new(a, b, CCol::zeros(2)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn residual_dimension_check() {
        let p = toy();
        let mut q = Quadruplet::new(
            &p,
            c64::new(1.0, 0.0),
            c64::new(0.0, 1.0),
            CCol::zeros(4),
            CCol::zeros(2),
        )
        .unwrap_or_else(|_| unreachable!());
        q.x = CCol::zeros(3);
        assert!(matches!(
            residuals(&p, &q),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn random_quadruplet_has_large_residual() {
        let p = toy();
        let mut rng = seeded_rng(99);
        let x = random_complex_col(4, &mut rng);
        let y = random_complex_col(2, &mut rng);
        let q = Quadruplet::new(&p, c64::new(0.3, 0.1), c64::new(-0.7, 0.2), x, y).unwrap();
        assert!(q.residuals.res_a > 1e-3);
        assert!(q.residuals.res_b > 1e-3);
    }
}
