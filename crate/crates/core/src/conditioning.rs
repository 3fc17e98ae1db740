//! First-order sensitivity of a computed eigenvalue `lambda` to
//! perturbations of all six coefficient matrices.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{dot_h, CCol, CMat};
use crate::problem::{Quadruplet, TwoParProblem};

/// Relative size below which `|w^H B3 y|` or `|v^H M'(lambda) x|` marks a
/// non-simple eigenvalue.
pub const TOL_SIMPLE: f64 = 1e-12;

/// Perturbation budget: `||dA_j|| <= eps alpha_j`, `||dB_j|| <= eps beta_j`,
/// `|d lambda| <= eps gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub gamma: f64,
}

impl Weights {
    pub fn absolute() -> Self {
        Weights {
            alpha: [1.0; 3],
            beta: [1.0; 3],
            gamma: 1.0,
        }
    }

    /// `alpha_j = ||A_j||_F`, `beta_j = ||B_j||_F`.
    pub fn relative(problem: &TwoParProblem) -> Self {
        Weights {
            alpha: problem.a_norms(),
            beta: problem.b_norms(),
            gamma: 1.0,
        }
    }

    pub fn zero() -> Self {
        Weights {
            alpha: [0.0; 3],
            beta: [0.0; 3],
            gamma: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub kappa_a: f64,
    pub kappa_g_b: f64,
    pub kappa_g_lambda: f64,
    pub kappa_total: f64,
    pub det_c0: c64,
    /// `|d lambda| / eps` when only `B1`, `B3` carry backward errors
    /// `beta_1 eps`, `beta_3 eps`.
    pub backward_lambda_bound: f64,
    /// `1 + |lambda| + |g|`
    pub theta2_absolute: f64,
    /// `||B1|| + |lambda| ||B2|| + |g| ||B3||`
    pub theta2_relative: f64,
    pub weights: Weights,
}

/// Scalars shared by all formulas.
struct Projections {
    va2x: c64,
    va3x: c64,
    wb2y: c64,
    wb3y: c64,
    /// `v^H M'(lambda) x` with `g' = -(w^H B2 y)/(w^H B3 y)`.
    vmx: c64,
}

fn left_vectors(q: &Quadruplet) -> Result<(&CCol, &CCol)> {
    match (&q.v, &q.w) {
        (Some(v), Some(w)) if v.norm_l2() > 0.0 && w.norm_l2() > 0.0 => Ok((v, w)),
        _ => Err(Error::MissingLeftVectors(
            "attach v (nep::left_vector) and w (pencil::eigenpairs_at) to the quadruplet first"
                .into(),
        )),
    }
}

fn projections(problem: &TwoParProblem, q: &Quadruplet) -> Result<Projections> {
    let (v, w) = left_vectors(q)?;
    let va2x = dot_h(v, &problem.a(1).apply(&q.x));
    let va3x = dot_h(v, &problem.a(2).apply(&q.x));
    let wb2y = dot_h(w, &(problem.b(1) * &q.y));
    let wb3y = dot_h(w, &(problem.b(2) * &q.y));
    let mu_scale = w.norm_l2() * problem.b_norms()[2] * q.y.norm_l2();
    if wb3y.norm() <= TOL_SIMPLE * mu_scale {
        return Err(Error::NonSimpleMu {
            value: wb3y.norm(),
            threshold: TOL_SIMPLE * mu_scale,
        });
    }
    let g1 = -wb2y / wb3y;
    let vmx = va2x + g1 * va3x;
    let [_, a2, a3] = problem.a_norms();
    let lam_scale = v.norm_l2() * q.x.norm_l2() * (a2 + g1.norm() * a3);
    if vmx.norm() <= TOL_SIMPLE * lam_scale {
        return Err(Error::NonSimpleLambda {
            value: vmx.norm(),
            threshold: TOL_SIMPLE * lam_scale,
        });
    }
    Ok(Projections {
        va2x,
        va3x,
        wb2y,
        wb3y,
        vmx,
    })
}

/// `[[v^H A2 x, v^H A3 x], [w^H B2 y, w^H B3 y]]`
pub fn c0_matrix(problem: &TwoParProblem, q: &Quadruplet) -> Result<[[c64; 2]; 2]> {
    let (v, w) = left_vectors(q)?;
    Ok([
        [
            dot_h(v, &problem.a(1).apply(&q.x)),
            dot_h(v, &problem.a(2).apply(&q.x)),
        ],
        [
            dot_h(w, &(problem.b(1) * &q.y)),
            dot_h(w, &(problem.b(2) * &q.y)),
        ],
    ])
}

pub fn det2(c: &[[c64; 2]; 2]) -> c64 {
    c[0][0] * c[1][1] - c[0][1] * c[1][0]
}

pub fn condition_numbers(
    problem: &TwoParProblem,
    q: &Quadruplet,
    weights: &Weights,
) -> Result<ConditionReport> {
    let pr = projections(problem, q)?;
    let (v, w) = left_vectors(q)?;
    let (lam, g) = (q.lambda.norm(), q.mu.norm());
    let vx = v.norm_l2() * q.x.norm_l2();
    let wy = w.norm_l2() * q.y.norm_l2();
    let [a1, a2, a3] = weights.alpha;
    let [b1, b2, b3] = weights.beta;
    let kappa_a = vx * (a1 + lam * a2 + g * a3) / pr.vmx.norm();
    let kappa_g_b = wy * (b1 + lam * b2 + g * b3) / pr.wb3y.norm();
    let kappa_g_lambda = weights.gamma * pr.wb2y.norm() / pr.wb3y.norm();
    let coupling = pr.va3x.norm() / pr.vmx.norm();
    let [n1, n2, n3] = problem.b_norms();
    Ok(ConditionReport {
        kappa_a,
        kappa_g_b,
        kappa_g_lambda,
        kappa_total: kappa_a + kappa_g_b * coupling,
        det_c0: pr.va2x * pr.wb3y - pr.va3x * pr.wb2y,
        backward_lambda_bound: wy * (b1 + g * b3) / pr.wb3y.norm() * coupling,
        theta2_absolute: 1.0 + lam + g,
        theta2_relative: n1 + lam * n2 + g * n3,
        weights: *weights,
    })
}

/// Rank-one perturbations `(dA_1..3, dB_1..3)` of size `eps` (in the
/// weighted sense) whose first-order effect on `lambda` is `eps * kappa`.
///
/// The B-side terms carry an extra unit phase that aligns their
/// contribution with the A-side terms; without it the two parts can
/// partially cancel.
pub fn attaining_perturbation(
    problem: &TwoParProblem,
    q: &Quadruplet,
    weights: &Weights,
    eps: f64,
) -> Result<([CMat; 3], [CMat; 3])> {
    let pr = projections(problem, q)?;
    let (v, w) = left_vectors(q)?;
    let unit = |z: c64| {
        if z.norm() == 0.0 {
            c64::new(1.0, 0.0)
        } else {
            z / z.norm()
        }
    };
    let ph_l = unit(q.lambda).conj();
    let ph_g = unit(q.mu).conj();
    let ratio = pr.va3x / pr.wb3y;
    let ph_b = unit(ratio).conj();
    let n = problem.n();
    let m = problem.m();
    let vx = v.norm_l2() * q.x.norm_l2();
    let wy = w.norm_l2() * q.y.norm_l2();
    let a_hat = Mat::from_fn(n, n, |i, j| v[i] * q.x[j].conj() / vx);
    let b_hat = Mat::from_fn(m, m, |i, j| w[i] * q.y[j].conj() / wy);
    let sa = [c64::new(1.0, 0.0), ph_l, ph_g];
    let da: [CMat; 3] = std::array::from_fn(|k| {
        let s = -sa[k] * eps * weights.alpha[k];
        Mat::from_fn(n, n, |i, j| s * a_hat[(i, j)])
    });
    let db: [CMat; 3] = std::array::from_fn(|k| {
        let s = sa[k] * ph_b * eps * weights.beta[k];
        Mat::from_fn(m, m, |i, j| s * b_hat[(i, j)])
    });
    Ok((da, db))
}
