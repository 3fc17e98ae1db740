use faer::Mat;

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{dot_t, mat_axpy, mat_scale, pencil_eigen, CCol, CMat};
use crate::problem::TwoParProblem;
use crate::sparse::AMatrix;

/// One solution of the scalar-projected problem.
#[derive(Clone, Debug)]
pub struct RayleighCandidate {
    pub lambda: c64,
    pub mu: c64,
    pub y: CCol,
}

/// All finite solutions of the problem projected onto `w^T (.) v`:
/// `((a3) B1 - (a1) B3) y = lambda ((a2) B3 - (a3) B2) y` with
/// `a_j = w^T A_j v`, and `mu = -(a1 + lambda a2) / a3`.
pub fn rayleigh_gep_all(
    problem: &TwoParProblem,
    v: &CCol,
    w: &CCol,
) -> Result<Vec<RayleighCandidate>> {
    let a: [c64; 3] = std::array::from_fn(|j| dot_t(w, &problem.a(j).apply(v)));
    let scale = w.norm_l2() * v.norm_l2() * problem.a_norms()[2];
    if a[2].norm() <= 1e-14 * scale {
        return Err(Error::DegenerateProjection {
            value: a[2].norm(),
            iterate: 0,
        });
    }
    let p = mat_axpy(&mat_scale(a[2], problem.b(0)), -a[0], problem.b(2));
    let q = mat_axpy(&mat_scale(a[1], problem.b(2)), -a[2], problem.b(1));
    let mut out = Vec::new();
    for e in pencil_eigen(&p, &q, false)? {
        if let Some(lambda) = e.value {
            let (y, _) = problem.c_normalize(&e.right);
            out.push(RayleighCandidate {
                lambda,
                mu: -(a[0] + lambda * a[1]) / a[2],
                y,
            });
        }
    }
    Ok(out)
}

/// The solution of `rayleigh_gep_all` whose `lambda` is nearest to
/// `reference`, ties broken by smaller `|lambda|`.
pub fn rayleigh_gep(
    problem: &TwoParProblem,
    v: &CCol,
    w: &CCol,
    reference: c64,
) -> Result<RayleighCandidate> {
    rayleigh_gep_all(problem, v, w)?
        .into_iter()
        .min_by(|a, b| {
            (a.lambda - reference)
                .norm()
                .total_cmp(&(b.lambda - reference).norm())
                .then(a.lambda.norm().total_cmp(&b.lambda.norm()))
        })
        .ok_or(Error::NoFiniteBranch { lambda: reference })
}

/// Petrov-Galerkin projection `A_j <- W^T A_j V`; the B side and `c` are
/// kept.
pub fn project_2ep(problem: &TwoParProblem, v: &CMat, w: &CMat) -> Result<TwoParProblem> {
    let n = problem.n();
    let p = v.ncols();
    if v.nrows() != n || w.nrows() != n || w.ncols() != p || p == 0 {
        return Err(Error::DimensionMismatch(format!(
            "projection bases are {}x{} and {}x{}, need two n x p matrices with n = {n}, p >= 1",
            v.nrows(),
            v.ncols(),
            w.nrows(),
            w.ncols()
        )));
    }
    let wt: CMat = w.transpose().to_owned();
    let a: [AMatrix; 3] = std::array::from_fn(|j| {
        let mut av = Mat::<c64>::zeros(n, p);
        for col in 0..p {
            let y = problem.a(j).apply(&v.col(col).to_owned());
            for i in 0..n {
                av[(i, col)] = y[i];
            }
        }
        AMatrix::Dense(&wt * &av)
    });
    let b = [
        problem.b(0).clone(),
        problem.b(1).clone(),
        problem.b(2).clone(),
    ];
    Ok(TwoParProblem::new(a, b, problem.c().clone())?
        .with_label(format!("projection of {}", problem.label())))
}
