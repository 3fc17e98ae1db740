//! Dense complex helpers shared by the pencil, operator-determinant and
//! solver modules. Heavy lifting (LU, SVD, Schur-based eigensolver) is
//! delegated to `faer`.

use faer::linalg::solvers::{DenseSolveCore, PartialPivLu, Solve};
use faer::{Col, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::c64;
use crate::error::{Error, Result};

pub type CMat = Mat<c64>;
pub type CCol = Col<c64>;

/// Reciprocal condition number below which `Q` is not inverted directly
/// when reducing `P y = theta Q y` to a standard problem.
pub const GEP_RCOND_DIRECT: f64 = 1e-8;
/// Relative size of `|theta|` (shift-and-invert form) below which an
/// eigenvalue of a pencil is declared infinite.
pub const TOL_INF: f64 = 1e-10;

pub fn zero() -> c64 {
    c64::new(0.0, 0.0)
}

pub fn one() -> c64 {
    c64::new(1.0, 0.0)
}

/// `sum_i a_i b_i` (no conjugation).
pub fn dot_t(a: &CCol, b: &CCol) -> c64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// `a^H b`.
pub fn dot_h(a: &CCol, b: &CCol) -> c64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn scale(s: c64, x: &CCol) -> CCol {
    Col::from_fn(x.nrows(), |i| s * x[i])
}

/// `y + s x`
pub fn axpy(s: c64, x: &CCol, y: &CCol) -> CCol {
    Col::from_fn(x.nrows(), |i| y[i] + s * x[i])
}

pub fn conj(x: &CCol) -> CCol {
    Col::from_fn(x.nrows(), |i| x[i].conj())
}

pub fn normalized(x: &CCol) -> CCol {
    let n = x.norm_l2();
    scale(c64::new(1.0 / n, 0.0), x)
}

pub fn is_finite(x: &CCol) -> bool {
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

pub fn mat_is_finite(a: &CMat) -> bool {
    (0..a.ncols())
        .all(|j| (0..a.nrows()).all(|i| a[(i, j)].re.is_finite() && a[(i, j)].im.is_finite()))
}

/// `a + s b` for dense matrices of equal shape.
pub fn mat_axpy(a: &CMat, s: c64, b: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + s * b[(i, j)])
}

pub fn mat_scale(s: c64, a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| s * a[(i, j)])
}

/// Kronecker product; block `(i, j)` of the result is `x[(i, j)] * y`.
pub fn kron(x: &CMat, y: &CMat) -> CMat {
    let (p, q) = (x.nrows(), x.ncols());
    let (r, s) = (y.nrows(), y.ncols());
    let mut out = Mat::zeros(p * r, q * s);
    for bj in 0..q {
        for bi in 0..p {
            let xij = x[(bi, bj)];
            if xij == zero() {
                continue;
            }
            for j in 0..s {
                for i in 0..r {
                    out[(bi * r + i, bj * s + j)] = xij * y[(i, j)];
                }
            }
        }
    }
    out
}

/// Largest and smallest singular values.
pub fn sigma_extremes(a: &CMat) -> Result<(f64, f64)> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok((0.0, 0.0));
    }
    let sv = a
        .singular_values()
        .map_err(|e| Error::Eigen(format!("singular values: {e:?}")))?;
    Ok((sv[0], *sv.last().unwrap()))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex_col(n: usize, rng: &mut ChaCha8Rng) -> CCol {
    Col::from_fn(n, |_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64::new(re, im)
    })
}

pub fn random_real_mat(n: usize, m: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut out = Mat::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            let v: f64 = StandardNormal.sample(rng);
            out[(i, j)] = c64::new(v, 0.0);
        }
    }
    out
}

/// Dense LU with partial pivoting plus a cheap singularity probe.
pub struct DenseLu {
    lu: PartialPivLu<c64>,
    norm_fro: f64,
    n: usize,
}

impl DenseLu {
    pub fn new(a: &CMat) -> Self {
        DenseLu {
            lu: a.partial_piv_lu(),
            norm_fro: a.norm_l2(),
            n: a.nrows(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &CCol) -> CCol {
        self.lu.solve(rhs)
    }

    pub fn solve_adjoint(&self, rhs: &CCol) -> CCol {
        self.lu.solve_adjoint(rhs)
    }

    pub fn solve_mat(&self, rhs: &CMat) -> CMat {
        self.lu.solve(rhs)
    }

    pub fn inverse(&self) -> CMat {
        self.lu.inverse()
    }

    /// Growth `||A|| ||A^{-1} b|| / ||b||` for a fixed pseudo-random `b`;
    /// a lower bound on the Frobenius condition number, infinite when the
    /// factorization broke down.
    pub fn growth(&self) -> f64 {
        let mut rng = seeded_rng(0x5eed_9a11);
        let b = random_complex_col(self.n, &mut rng);
        let x = self.solve(&b);
        if !is_finite(&x) {
            return f64::INFINITY;
        }
        self.norm_fro * x.norm_l2() / b.norm_l2()
    }
}

/// One eigen-triplet of a dense pencil `P y = theta Q y`.
#[derive(Clone, Debug)]
pub struct PencilEig {
    /// `None` for an infinite eigenvalue.
    pub value: Option<c64>,
    pub right: CCol,
    /// Left eigenvector `w` with `w^H (P - theta Q) = 0` (finite eigenvalues).
    pub left: Option<CCol>,
}

/// All eigenvalues of the small dense pencil `P y = theta Q y`.
///
/// When `Q` is well conditioned the pencil is reduced to `Q^{-1} P`.
/// Otherwise `(P - tau Q)^{-1} Q` is used for a deterministic
/// pseudo-random shift `tau`; eigenvalues `nu` of that matrix map back to
/// `theta = tau + 1/nu`, and `|nu|` below `TOL_INF * ||(P - tau Q)^{-1} Q||`
/// marks an infinite eigenvalue.
pub fn pencil_eigen(p: &CMat, q: &CMat, want_left: bool) -> Result<Vec<PencilEig>> {
    let m = p.nrows();
    if m == 0 {
        return Ok(Vec::new());
    }
    let (qmax, qmin) = sigma_extremes(q)?;
    let direct = qmax > 0.0 && qmin >= GEP_RCOND_DIRECT * qmax;

    let (factor, k, tau) = if direct {
        let lu = DenseLu::new(q);
        let k = lu.solve_mat(p);
        (lu, k, None)
    } else {
        let tau = choose_shift(p, q)?;
        let r = mat_axpy(p, -tau, q);
        let lu = DenseLu::new(&r);
        let k = lu.solve_mat(q);
        (lu, k, Some(tau))
    };
    if !mat_is_finite(&k) {
        return Err(Error::SingularMatrix {
            context: "pencil reduction".into(),
        });
    }
    let evd = k
        .eigen()
        .map_err(|e| Error::Eigen(format!("pencil eigendecomposition: {e:?}")))?;
    let u: CMat = evd.U().to_owned();
    let s: Vec<c64> = (0..m).map(|i| evd.S().column_vector()[i]).collect();
    let knorm = k.norm_l2();

    // Rows of U^{-1} are left eigenvectors of K; mapped back through the
    // inverted factor they become left eigenvectors of the pencil.
    let left_basis = if want_left {
        let ulu = DenseLu::new(&u);
        let g = ulu.inverse();
        if mat_is_finite(&g) {
            let gh: CMat = g.adjoint().to_owned();
            Some(factor.lu.solve_adjoint(&gh))
        } else {
            None
        }
    } else {
        None
    };

    let pnorm = p.norm_l2();
    let qnorm = q.norm_l2();
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let right = normalized(&u.col(j).to_owned());
        let value = match tau {
            None => Some(s[j]),
            Some(tau) => {
                if s[j].norm() <= TOL_INF * knorm {
                    None
                } else {
                    Some(tau + s[j].inv())
                }
            }
        };
        let left = match (value, want_left) {
            (Some(theta), true) => {
                let from_basis = left_basis
                    .as_ref()
                    .map(|w| normalized(&w.col(j).to_owned()));
                let tol = 1e-8 * (pnorm + theta.norm() * qnorm);
                let ok = from_basis
                    .as_ref()
                    .map(|w| is_finite(w) && left_residual(p, q, theta, w) <= tol)
                    .unwrap_or(false);
                if ok {
                    from_basis
                } else {
                    Some(left_null_vector(&mat_axpy(p, -theta, q))?)
                }
            }
            _ => None,
        };
        out.push(PencilEig { value, right, left });
    }
    Ok(out)
}

fn left_residual(p: &CMat, q: &CMat, theta: c64, w: &CCol) -> f64 {
    let ph: CCol = p.adjoint() * w;
    let qh: CCol = q.adjoint() * w;
    axpy(-theta.conj(), &qh, &ph).norm_l2() / w.norm_l2()
}

/// Unit vector spanning the (numerical) left null space of `a`.
pub fn left_null_vector(a: &CMat) -> Result<CCol> {
    let svd = a.svd().map_err(|e| Error::Eigen(format!("svd: {e:?}")))?;
    let last = a.ncols().min(a.nrows()) - 1;
    Ok(svd.U().col(last).to_owned())
}

/// Unit vector spanning the (numerical) right null space of `a`.
pub fn right_null_vector(a: &CMat) -> Result<CCol> {
    let svd = a.svd().map_err(|e| Error::Eigen(format!("svd: {e:?}")))?;
    let last = a.ncols().min(a.nrows()) - 1;
    Ok(svd.V().col(last).to_owned())
}

fn choose_shift(p: &CMat, q: &CMat) -> Result<c64> {
    let qn = q.norm_l2().max(f64::MIN_POSITIVE);
    let scale = (p.norm_l2() / qn).max(1e-3);
    let mut best = (f64::NEG_INFINITY, c64::new(0.0, 0.0));
    for k in 0..8 {
        let radius = scale * (0.137 + 0.091 * k as f64);
        let angle = 0.713 + 1.31 * k as f64;
        let tau = c64::from_polar(radius, angle);
        let (smax, smin) = sigma_extremes(&mat_axpy(p, -tau, q))?;
        let rc = if smax > 0.0 { smin / smax } else { 0.0 };
        if rc >= 1e-6 {
            return Ok(tau);
        }
        if rc > best.0 {
            best = (rc, tau);
        }
    }
    Ok(best.1)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> c64 {
        c64::new(re, im)
    }

    #[test]
    fn kron_block_layout() {
        let x = Mat::from_fn(2, 2, |i, j| c((1 + i * 2 + j) as f64, 0.0));
        let y = Mat::from_fn(2, 2, |i, j| c(0.0, (1 + i * 2 + j) as f64));
        let k = kron(&x, &y);
        for bi in 0..2 {
            for bj in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(k[(bi * 2 + i, bj * 2 + j)], x[(bi, bj)] * y[(i, j)]);
                    }
                }
            }
        }
    }

    #[test]
    fn pencil_with_singular_q_reports_infinite_eigenvalue() {
        // P = [[mu0, 0], [0, 1]], Q = diag(1, 0): one finite eigenvalue mu0.
        let p = Mat::from_fn(2, 2, |i, j| {
            if i == j {
                if i == 0 {
                    c(2.5, -1.0)
                } else {
                    one()
                }
            } else {
                zero()
            }
        });
        let q = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 0 { one() } else { zero() });
        let eigs = pencil_eigen(&p, &q, true).unwrap();
        let finite: Vec<_> = eigs.iter().filter_map(|e| e.value).collect();
        assert_eq!(finite.len(), 1);
        assert!((finite[0] - c(2.5, -1.0)).norm() < 1e-12);
        assert_eq!(eigs.iter().filter(|e| e.value.is_none()).count(), 1);
    }

    #[test]
    fn pencil_left_and_right_vectors() {
        let mut rng = seeded_rng(3);
        let p = Mat::from_fn(4, 4, |_, _| random_complex_col(1, &mut rng)[0]);
        let q = Mat::from_fn(4, 4, |_, _| random_complex_col(1, &mut rng)[0]);
        for e in pencil_eigen(&p, &q, true).unwrap() {
            let th = e.value.unwrap();
            let r: CCol = &mat_axpy(&p, -th, &q) * &e.right;
            assert!(r.norm_l2() < 1e-10 * (p.norm_l2() + th.norm() * q.norm_l2()));
            let w = e.left.unwrap();
            assert!(
                left_residual(&p, &q, th, &w) < 1e-10 * (p.norm_l2() + th.norm() * q.norm_l2())
            );
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(6, 0), 1.0);
        assert_eq!(binomial(6, 6), 1.0);
    }
}
