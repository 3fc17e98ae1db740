//! `u'' + kappa(x)^2 u = lambda u` on `[x0, x2]`, `u(x0) = 0`, `u'(x2) = 0`,
//! split at `x1` with the Robin coupling `u'(x1) = mu u(x1)` on both sides.
//!
//! The left piece uses second-order finite differences on `n` uniform
//! points (sparse A side), the right piece Chebyshev collocation on `m`
//! Gauss-Lobatto points (dense B side).

use std::f64::consts::PI;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{CCol, CMat};
use crate::problem::{Quadruplet, TwoParProblem};
use crate::sparse::{AMatrix, CsrMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Wavenumber {
    /// Piecewise constant `2 + 0.8 (-1)^floor(2x)` left of `x1`, and
    /// `1 + 2 exp(-(x - x1)) sin(40 (x - x1))` right of it.
    Default,
    Constant(f64),
    /// `values[k]` on `[breaks[k-1], breaks[k])`, with `values.len() ==
    /// breaks.len() + 1`.
    Piecewise {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Wavenumber {
    pub fn eval(&self, x: f64, x1: f64) -> f64 {
        match self {
            Wavenumber::Default => {
                if x < x1 {
                    let sign = if (2.0 * x).floor() as i64 % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    2.0 + 0.8 * sign
                } else {
                    let t = x - x1;
                    1.0 + 2.0 * (-t).exp() * (40.0 * t).sin()
                }
            }
            Wavenumber::Constant(k) => *k,
            Wavenumber::Piecewise { breaks, values } => {
                let k = breaks.iter().take_while(|&&b| x >= b).count();
                values[k]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelmholtzConfig {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    /// Finite-difference points on `[x0, x1]`, both ends included.
    pub n: usize,
    /// Collocation points on `[x1, x2]`.
    pub m: usize,
    pub wavenumber: Wavenumber,
    /// Left diagonal scaling making `diag(A1 + A2 + A3)` and
    /// `diag(B1 + B2 + B3)` all ones.
    pub scaling: bool,
}

impl Default for HelmholtzConfig {
    fn default() -> Self {
        HelmholtzConfig {
            x0: 0.0,
            x1: 4.0,
            x2: 5.0,
            n: 2000,
            m: 30,
            wavenumber: Wavenumber::Default,
            scaling: true,
        }
    }
}

impl HelmholtzConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.x0 < self.x1 && self.x1 < self.x2) {
            return Err(Error::InvalidInput(format!(
                "need x0 < x1 < x2, got {}, {}, {}",
                self.x0, self.x1, self.x2
            )));
        }
        if self.n < 3 || self.m < 3 {
            return Err(Error::InvalidInput(format!(
                "need n, m >= 3, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if let Wavenumber::Piecewise { breaks, values } = &self.wavenumber {
            if values.len() != breaks.len() + 1 || breaks.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(
                    "piecewise wavenumber needs increasing breaks and one more value than breaks"
                        .into(),
                ));
            }
        }
        let all_finite = self
            .fd_grid()
            .iter()
            .chain(self.cheb_grid().iter())
            .all(|&x| self.wavenumber.eval(x, self.x1).is_finite());
        if !all_finite {
            return Err(Error::InvalidInput(
                "wavenumber is not finite on the grid".into(),
            ));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.x1 - self.x0) / (self.n - 1) as f64
    }

    pub fn fd_grid(&self) -> Vec<f64> {
        let h = self.h();
        (0..self.n).map(|k| self.x0 + k as f64 * h).collect()
    }

    /// Gauss-Lobatto points in ascending order, first one at `x1`.
    pub fn cheb_grid(&self) -> Vec<f64> {
        let len = self.x2 - self.x1;
        (0..self.m)
            .map(|j| {
                let xi = -(PI * j as f64 / (self.m - 1) as f64).cos();
                self.x1 + 0.5 * (xi + 1.0) * len
            })
            .collect()
    }
}

/// Collocation differentiation matrix on arbitrary distinct nodes via
/// barycentric weights; diagonal by the negative row sum.
pub fn differentiation_matrix(nodes: &[f64]) -> Vec<Vec<f64>> {
    let m = nodes.len();
    let w: Vec<f64> = (0..m)
        .map(|j| {
            let p: f64 = (0..m)
                .filter(|&k| k != j)
                .map(|k| nodes[j] - nodes[k])
                .product();
            1.0 / p
        })
        .collect();
    let mut d = vec![vec![0.0; m]; m];
    for i in 0..m {
        let mut sum = 0.0;
        for j in 0..m {
            if i != j {
                d[i][j] = (w[j] / w[i]) / (nodes[i] - nodes[j]);
                sum += d[i][j];
            }
        }
        d[i][i] = -sum;
    }
    d
}

#[derive(Clone, Debug)]
pub struct HelmholtzProblem {
    pub problem: TwoParProblem,
    pub config: HelmholtzConfig,
    pub fd_grid: Vec<f64>,
    pub cheb_grid: Vec<f64>,
    pub kappa_fd: Vec<f64>,
    pub kappa_cheb: Vec<f64>,
    /// Spectral differentiation matrix on `cheb_grid`.
    pub diff: Vec<Vec<f64>>,
}

/// Interface diagnostics for one solution.
#[derive(Clone, Copy, Debug)]
pub struct InterfaceCheck {
    /// `|u1(x1) - u2(x1)| / max |u|` after scaling `u2` so that the two
    /// one-sided derivatives at `x1` agree.
    pub value_mismatch: f64,
    /// `u1'(x1) / u1(x1)` from the first-order backward difference.
    pub mu_first_order: c64,
    /// Same ratio from the second-order one-sided stencil.
    pub mu_second_order: c64,
}

pub fn gen_helmholtz(config: &HelmholtzConfig) -> Result<HelmholtzProblem> {
    config.validate()?;
    let (n, m) = (config.n, config.m);
    let h = config.h();
    let fd_grid = config.fd_grid();
    let cheb_grid = config.cheb_grid();
    let kappa_fd: Vec<f64> = fd_grid
        .iter()
        .map(|&x| config.wavenumber.eval(x, config.x1))
        .collect();
    let kappa_cheb: Vec<f64> = cheb_grid
        .iter()
        .map(|&x| config.wavenumber.eval(x, config.x1))
        .collect();
    let r = |v: f64| c64::new(v, 0.0);

    let mut t1 = vec![(0usize, 0usize, r(1.0))];
    let mut t2 = Vec::new();
    let ih2 = 1.0 / (h * h);
    for j in 1..n - 1 {
        t1.push((j, j - 1, r(ih2)));
        t1.push((j, j, r(-2.0 * ih2 + kappa_fd[j] * kappa_fd[j])));
        t1.push((j, j + 1, r(ih2)));
        t2.push((j, j, r(-1.0)));
    }
    let last = n - 1;
    t1.push((last, last - 2, r(1.0 / (2.0 * h))));
    t1.push((last, last - 1, r(-4.0 / (2.0 * h))));
    t1.push((last, last, r(3.0 / (2.0 * h))));
    let t3 = vec![(last, last, r(-1.0))];
    let mut a = [
        AMatrix::Sparse(CsrMatrix::from_triplets(n, n, &t1)?),
        AMatrix::Sparse(CsrMatrix::from_triplets(n, n, &t2)?),
        AMatrix::Sparse(CsrMatrix::from_triplets(n, n, &t3)?),
    ];

    let diff = differentiation_matrix(&cheb_grid);
    let d2: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).map(|k| diff[i][k] * diff[k][j]).sum())
                .collect()
        })
        .collect();
    let mut b1 = Mat::<c64>::zeros(m, m);
    let mut b2 = Mat::<c64>::zeros(m, m);
    let mut b3 = Mat::<c64>::zeros(m, m);
    for j in 0..m {
        b1[(0, j)] = r(diff[0][j]);
        b1[(m - 1, j)] = r(diff[m - 1][j]);
    }
    b3[(0, 0)] = r(-1.0);
    for i in 1..m - 1 {
        for j in 0..m {
            b1[(i, j)] = r(d2[i][j]);
        }
        b1[(i, i)] += r(kappa_cheb[i] * kappa_cheb[i]);
        b2[(i, i)] = r(-1.0);
    }
    let mut b = [b1, b2, b3];

    if config.scaling {
        let da = inverse_diagonal(
            &crate::sparse::combine(&[&a[0], &a[1], &a[2]], &[r(1.0); 3]).diagonal(),
        );
        a = std::array::from_fn(|k| a[k].scale_rows(&da));
        let bsum: CMat = &(&b[0] + &b[1]) + &b[2];
        let db = inverse_diagonal(&(0..m).map(|i| bsum[(i, i)]).collect::<Vec<_>>());
        b = std::array::from_fn(|k| Mat::from_fn(m, m, |i, j| db[i] * b[k][(i, j)]));
    }

    // c^T y = u2(x1), which vanishes only where mu = u'(x1)/u(x1) has a pole.
    let c = CCol::from_fn(m, |i| if i == 0 { r(1.0) } else { r(0.0) });
    let problem = TwoParProblem::new(a, b, c)?.with_label(format!("helmholtz n={n} m={m}"));
    Ok(HelmholtzProblem {
        problem,
        config: config.clone(),
        fd_grid,
        cheb_grid,
        kappa_fd,
        kappa_cheb,
        diff,
    })
}

fn inverse_diagonal(d: &[c64]) -> Vec<c64> {
    d.iter()
        .map(|&v| {
            if v.norm() > 0.0 {
                v.inv()
            } else {
                c64::new(1.0, 0.0)
            }
        })
        .collect()
}

impl HelmholtzProblem {
    /// `lambda_k = kappa0^2 - ((k - 1/2) pi / (x2 - x0))^2` for constant
    /// `kappa0`, `k = 1, 2, ...`; `None` for other profiles.
    pub fn analytic_eigenvalues(&self, count: usize) -> Option<Vec<f64>> {
        let Wavenumber::Constant(k0) = self.config.wavenumber else {
            return None;
        };
        let len = self.config.x2 - self.config.x0;
        Some(
            (1..=count)
                .map(|k| k0 * k0 - ((k as f64 - 0.5) * PI / len).powi(2))
                .collect(),
        )
    }

    /// Eigenfunction samples `(x, u(x))` over both pieces, with `u2` scaled
    /// to continue `u1` across `x1`.
    pub fn reconstruct(&self, q: &Quadruplet) -> Vec<(f64, c64)> {
        let (s, _) = self.right_scale(q);
        let mut out: Vec<(f64, c64)> = self
            .fd_grid
            .iter()
            .zip(q.x.iter())
            .map(|(&x, &u)| (x, u))
            .collect();
        out.extend(
            self.cheb_grid
                .iter()
                .zip(q.y.iter())
                .skip(1)
                .map(|(&x, &u)| (x, s * u)),
        );
        out
    }

    /// Scale for `y` making its spectral derivative at `x1` equal the
    /// one-sided finite-difference derivative of `x`.
    fn right_scale(&self, q: &Quadruplet) -> (c64, c64) {
        let n = self.config.n;
        let h = self.config.h();
        let x = &q.x;
        let du1 = (x[n - 1] * 3.0 - x[n - 2] * 4.0 + x[n - 3]) / (2.0 * h);
        let du2: c64 = (0..self.config.m).map(|j| q.y[j] * self.diff[0][j]).sum();
        let s = if du2.norm() > 0.0 {
            du1 / du2
        } else {
            x[n - 1] / q.y[0]
        };
        (s, du1)
    }

    pub fn interface_check(&self, q: &Quadruplet) -> InterfaceCheck {
        let n = self.config.n;
        let h = self.config.h();
        let (s, du1) = self.right_scale(q);
        let u1 = q.x[n - 1];
        let u2 = s * q.y[0];
        let peak =
            q.x.iter()
                .map(|v| v.norm())
                .chain(q.y.iter().map(|v| (s * v).norm()))
                .fold(0.0, f64::max);
        InterfaceCheck {
            value_mismatch: (u1 - u2).norm() / peak,
            mu_first_order: (q.x[n - 1] - q.x[n - 2]) / (h * u1),
            mu_second_order: du1 / u1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiation_matrix_is_exact_on_cubics() {
        let cfg = HelmholtzConfig {
            m: 8,
            ..HelmholtzConfig::default()
        };
        let nodes = cfg.cheb_grid();
        let d = differentiation_matrix(&nodes);
        for i in 0..nodes.len() {
            let du: f64 = (0..nodes.len()).map(|j| d[i][j] * nodes[j].powi(3)).sum();
            assert!((du - 3.0 * nodes[i].powi(2)).abs() < 1e-9 * (1.0 + nodes[i].powi(2)));
        }
        assert_eq!(nodes[0], 4.0);
        assert!((nodes[7] - 5.0).abs() < 1e-15);
    }

    #[test]
    fn default_profile_jumps_at_half_integers() {
        let w = Wavenumber::Default;
        assert_eq!(w.eval(0.25, 4.0), 2.8);
        assert_eq!(w.eval(0.75, 4.0), 1.2);
        assert_eq!(w.eval(3.75, 4.0), 1.2);
        assert!((w.eval(4.0, 4.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaled_diagonal_is_one() {
        let cfg = HelmholtzConfig {
            n: 50,
            m: 10,
            ..HelmholtzConfig::default()
        };
        let hp = gen_helmholtz(&cfg).unwrap();
        let p = &hp.problem;
        let one = c64::new(1.0, 0.0);
        let sum = crate::sparse::combine(&[p.a(0), p.a(1), p.a(2)], &[one; 3]);
        assert!(sum.diagonal().iter().all(|d| (d - one).norm() < 1e-14));
        for i in 0..10 {
            let d = p.b(0)[(i, i)] + p.b(1)[(i, i)] + p.b(2)[(i, i)];
            assert!((d - one).norm() < 1e-12);
        }
    }
}
