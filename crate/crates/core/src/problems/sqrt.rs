use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::c64;
use crate::error::Result;
use crate::linalg::CMat;
use crate::problem::TwoParProblem;
use crate::sparse::AMatrix;

/// B side `[[a, b], [c, d]] + lambda [[0, e], [f, 0]] + mu I`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqrtParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl SqrtParams {
    /// The parameter set used for the branch plots.
    pub fn figure() -> Self {
        SqrtParams {
            a: 3.0,
            b: 2.0,
            c: -1.0,
            d: -2.0,
            e: 2.0,
            f: 1.0,
        }
    }

    /// `a = d = 0`, `p(lambda) = (2 + 2 lambda)(-1 + lambda)`.
    pub fn pure_sqrt() -> Self {
        SqrtParams {
            a: 0.0,
            b: 2.0,
            c: -1.0,
            d: 0.0,
            e: 2.0,
            f: 1.0,
        }
    }

    /// `p(lambda) = (b + lambda e)(c + lambda f)`
    pub fn p(&self, lambda: c64) -> c64 {
        (self.b + lambda * self.e) * (self.c + lambda * self.f)
    }

    /// `(a + d)^2 / 4 - a d + p(lambda)`
    pub fn discriminant(&self, lambda: c64) -> c64 {
        let s = self.a + self.d;
        c64::new(s * s / 4.0 - self.a * self.d, 0.0) + self.p(lambda)
    }

    /// `[g_+, g_-]` with the principal square root.
    pub fn branches(&self, lambda: c64) -> [c64; 2] {
        let mid = c64::new(-(self.a + self.d) / 2.0, 0.0);
        let r = self.discriminant(lambda).sqrt();
        [mid + r, mid - r]
    }

    /// Roots of the discriminant, where the two branches coalesce. Empty
    /// when the discriminant does not depend on `lambda`.
    pub fn branch_points(&self) -> Vec<c64> {
        let s = self.a + self.d;
        let qa = self.e * self.f;
        let qb = self.b * self.f + self.c * self.e;
        let qc = self.b * self.c + s * s / 4.0 - self.a * self.d;
        if qa == 0.0 {
            if qb == 0.0 {
                return Vec::new();
            }
            return vec![c64::new(-qc / qb, 0.0)];
        }
        let disc = c64::new(qb * qb - 4.0 * qa * qc, 0.0).sqrt();
        vec![(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
    }

    fn b_matrices(&self) -> [CMat; 3] {
        let m = |r: [[f64; 2]; 2]| Mat::from_fn(2, 2, |i, j| c64::new(r[i][j], 0.0));
        [
            m([[self.a, self.b], [self.c, self.d]]),
            m([[0.0, self.e], [self.f, 0.0]]),
            m([[1.0, 0.0], [0.0, 1.0]]),
        ]
    }
}

/// `(A1 + lambda A2 + g(lambda) A3) x = 0` with `g` one of the two
/// algebraic branches of `params`.
pub fn gen_sqrt_nep(
    a1: AMatrix,
    a2: AMatrix,
    a3: AMatrix,
    params: SqrtParams,
) -> Result<TwoParProblem> {
    Ok(
        TwoParProblem::with_default_c([a1, a2, a3], params.b_matrices())?
            .with_label("algebraic square root"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_branch_points() {
        let roots = SqrtParams::figure().branch_points();
        let expect = (17.0f64 / 8.0).sqrt();
        for r in &roots {
            assert!(r.re.abs() < 1e-14);
            assert!((r.im.abs() - expect).abs() < 1e-14);
            assert!(SqrtParams::figure().discriminant(*r).norm() < 1e-13);
        }
    }

    #[test]
    fn pure_sqrt_branches_are_plus_minus_sqrt_p() {
        let p = SqrtParams::pure_sqrt();
        let lambda = c64::new(2.0, 0.0);
        let [gp, gm] = p.branches(lambda);
        let s = p.p(lambda).re.sqrt();
        assert!((gp.re - s).abs() < 1e-14 && (gm.re + s).abs() < 1e-14);
    }
}
