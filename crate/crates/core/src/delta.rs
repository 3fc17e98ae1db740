//! Operator determinants on the tensor space: the dense reference solver.
//!
//! With `z = y ⊗ x` (index `i * n + k` holds `y_i x_k`), solutions satisfy
//! `Delta1 z = lambda Delta0 z` and `Delta2 z = mu Delta0 z`.

use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{dot_h, kron, mat_is_finite, CCol, CMat, DenseLu};
use crate::problem::{Quadruplet, TwoParProblem};

/// Default bound on `n * m`.
pub const DEFAULT_CAP: usize = 4000;
/// Environment variable overriding `DEFAULT_CAP`.
pub const CAP_ENV: &str = "MEPNL_CAP";
/// Both relative residuals of a returned quadruplet are at most this.
pub const ORACLE_TOL: f64 = 1e-8;
/// Candidates whose reshaped eigenvector has `sigma_2 > RANK_ONE_RATIO * sigma_1`
/// are dropped.
pub const RANK_ONE_RATIO: f64 = 0.01;
const SINGULAR_GROWTH: f64 = 1e12;

pub fn size_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// `Delta0 = B2⊗A3 - B3⊗A2`, `Delta1 = B3⊗A1 - B1⊗A3`,
/// `Delta2 = B1⊗A2 - B2⊗A1`.
#[derive(Clone, Debug)]
pub struct DeltaPencil {
    pub delta0: CMat,
    pub delta1: CMat,
    pub delta2: CMat,
    pub n: usize,
    pub m: usize,
}

pub fn assemble(problem: &TwoParProblem) -> Result<DeltaPencil> {
    assemble_with_cap(problem, size_cap())
}

pub fn assemble_with_cap(problem: &TwoParProblem, cap: usize) -> Result<DeltaPencil> {
    let (n, m) = (problem.n(), problem.m());
    if n * m > cap {
        return Err(Error::TooLarge { size: n * m, cap });
    }
    let a: [CMat; 3] = std::array::from_fn(|j| problem.a(j).to_dense());
    let b = |j: usize| problem.b(j);
    let diff = |x: CMat, y: CMat| &x - &y;
    Ok(DeltaPencil {
        delta0: diff(kron(b(1), &a[2]), kron(b(2), &a[1])),
        delta1: diff(kron(b(2), &a[0]), kron(b(0), &a[2])),
        delta2: diff(kron(b(0), &a[1]), kron(b(1), &a[0])),
        n,
        m,
    })
}

impl DeltaPencil {
    /// `(z^H Delta2 z) / (z^H Delta0 z)`
    pub fn mu_rayleigh(&self, z: &CCol) -> c64 {
        dot_h(z, &(&self.delta2 * z)) / dot_h(z, &(&self.delta0 * z))
    }
}

/// Eigenpairs of `Delta1 z = lambda Delta0 z` that did not produce a
/// quadruplet.
#[derive(Clone, Debug)]
pub struct Dropped {
    pub lambda: c64,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct DeltaSolution {
    /// Sorted by `|lambda|`.
    pub quadruplets: Vec<Quadruplet>,
    /// Tensor eigenvectors, aligned with `quadruplets`.
    pub z: Vec<CCol>,
    pub dropped: Vec<Dropped>,
}

pub fn solve(problem: &TwoParProblem) -> Result<Vec<Quadruplet>> {
    Ok(solve_detailed(problem)?.quadruplets)
}

pub fn solve_detailed(problem: &TwoParProblem) -> Result<DeltaSolution> {
    let pencil = assemble(problem)?;
    solve_pencil(problem, &pencil)
}

pub fn solve_pencil(problem: &TwoParProblem, pencil: &DeltaPencil) -> Result<DeltaSolution> {
    let (n, m) = (pencil.n, pencil.m);
    let lu = DenseLu::new(&pencil.delta0);
    let growth = lu.growth();
    if !(growth <= SINGULAR_GROWTH) {
        return Err(Error::SingularProblem { growth });
    }
    let k: CMat = lu.solve_mat(&pencil.delta1);
    if !mat_is_finite(&k) {
        return Err(Error::SingularProblem {
            growth: f64::INFINITY,
        });
    }
    let evd = k.eigen().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let nm = n * m;
    let mut found: Vec<(Quadruplet, CCol)> = Vec::new();
    let mut dropped = Vec::new();
    for j in 0..nm {
        let lambda = evd.S().column_vector()[j];
        let z: CCol = evd.U().col(j).to_owned();
        let zmat = Mat::from_fn(n, m, |kk, i| z[i * n + kk]);
        let svd = zmat.svd().map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = svd.S().column_vector();
        let (s0, s1) = (s[0].re, if m.min(n) > 1 { s[1].re } else { 0.0 });
        if s1 > RANK_ONE_RATIO * s0 {
            dropped.push(Dropped {
                lambda,
                reason: format!(
                    "eigenvector is not rank one (sigma2/sigma1 = {:.3e})",
                    s1 / s0
                ),
            });
            continue;
        }
        let x: CCol = svd.U().col(0).to_owned();
        let y = CCol::from_fn(m, |i| svd.V()[(i, 0)].conj());
        let a3x = problem.a(2).apply(&x);
        let mut rest = problem.a(0).apply(&x);
        rest += crate::linalg::scale(lambda, &problem.a(1).apply(&x));
        let den = a3x.norm_l2().powi(2);
        if den == 0.0 {
            dropped.push(Dropped {
                lambda,
                reason: "A3 x vanishes, mu undetermined".into(),
            });
            continue;
        }
        let mu = -dot_h(&a3x, &rest) / den;
        let q = Quadruplet::new(problem, lambda, mu, x, y)?;
        if q.residuals.res_a <= ORACLE_TOL && q.residuals.res_b <= ORACLE_TOL {
            found.push((q, z));
        } else {
            dropped.push(Dropped {
                lambda,
                reason: format!(
                    "residuals {:.3e} / {:.3e} above {ORACLE_TOL:e}",
                    q.residuals.res_a, q.residuals.res_b
                ),
            });
        }
    }
    found.sort_by(|(a, _), (b, _)| {
        a.lambda
            .norm()
            .total_cmp(&b.lambda.norm())
            .then(a.lambda.re.total_cmp(&b.lambda.re))
            .then(a.lambda.im.total_cmp(&b.lambda.im))
    });
    let (quadruplets, z) = found.into_iter().unzip();
    Ok(DeltaSolution {
        quadruplets,
        z,
        dropped,
    })
}

/// Reference solve path for `Delta0^{-1} Delta1` applied to a single
/// right-hand side, used by the consistency checks.
pub fn delta0_solve(pencil: &DeltaPencil, rhs: &CCol) -> CCol {
    pencil.delta0.partial_piv_lu().solve(rhs)
}
