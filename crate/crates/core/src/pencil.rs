//! The lambda-parametrized pencil `-(B1 + lambda B2) y = mu B3 y`: its
//! finite eigenpairs (the branch values `g_i(lambda)`), continuation of a
//! single branch, the bordered Jacobian `J` and derivatives of `g_i`.

use faer::Mat;

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{
    binomial, dot_h, dot_t, is_finite, left_null_vector, mat_scale, normalized, pencil_eigen,
    random_complex_col, scale, seeded_rng, sigma_extremes, CCol, CMat, DenseLu,
};
use crate::problem::TwoParProblem;

/// Relative pencil residual accepted for a finite branch point.
pub const TOL_PENCIL: f64 = 1e-10;
/// `|c^T y| / ||y||` below which a branch is c-degenerate.
pub const TOL_C_DEGENERATE: f64 = 1e-10;
/// `sigma_min(J) / ||J||` at or below which `J` is treated as singular.
pub const TOL_SINGULAR_J: f64 = 1e-12;
/// Relative separation below which two candidates are indistinguishable.
pub const TOL_AMBIGUOUS: f64 = 1e-12;
/// Relative eigenvalue gap flagged by `convergence_radius_scan`.
pub const TOL_DOUBLE: f64 = 1e-6;

const MAX_HALVINGS: u32 = 8;
const CLEAR_MARGIN: f64 = 0.25;

/// One finite eigenpair of the pencil at `lambda`: `mu = g_i(lambda)`.
#[derive(Clone, Debug)]
pub struct BranchPoint {
    pub lambda: c64,
    pub mu: c64,
    /// Right eigenvector with `c^T y = 1` (unit norm when c-degenerate).
    pub y: CCol,
    /// Unit left eigenvector, `w^H (B1 + lambda B2 + mu B3) = 0`.
    pub w: CCol,
    pub branch_id: usize,
    pub c_degenerate: bool,
}

impl BranchPoint {
    pub fn residual(&self, problem: &TwoParProblem) -> f64 {
        crate::problem::residual_b(problem, self.lambda, self.mu, &self.y)
    }

    /// `g'(lambda) = -(w^H B2 y) / (w^H B3 y)`. `None` when the denominator
    /// vanishes relative to `||w|| ||B3|| ||y||`.
    pub fn g_prime_closed_form(&self, problem: &TwoParProblem) -> Option<c64> {
        let b2y: CCol = problem.b(1) * &self.y;
        let b3y: CCol = problem.b(2) * &self.y;
        let den = dot_h(&self.w, &b3y);
        let tol = 1e-12 * self.w.norm_l2() * problem.b_norms()[2] * self.y.norm_l2();
        if den.norm() <= tol {
            None
        } else {
            Some(-dot_h(&self.w, &b2y) / den)
        }
    }
}

/// Finite branch points sorted by `(|mu|, Re mu, Im mu)`, plus the right
/// eigenvectors belonging to infinite eigenvalues.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub points: Vec<BranchPoint>,
    pub infinite: Vec<CCol>,
}

fn mu_order(a: &c64, b: &c64) -> std::cmp::Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then(a.re.total_cmp(&b.re))
        .then(a.im.total_cmp(&b.im))
}

/// All eigenpairs of `-(B1 + lambda B2) y = mu B3 y`.
///
/// Every finite pair gets one or two Newton corrections on the bordered
/// system before its left vector is taken from `J^{-H} e_{m+1}`.
pub fn eigenpairs_at(problem: &TwoParProblem, lambda: c64) -> Result<Spectrum> {
    let p = mat_scale(
        c64::new(-1.0, 0.0),
        &(problem.b(0) + mat_scale(lambda, problem.b(1))),
    );
    let eigs = pencil_eigen(&p, problem.b(2), false)?;
    let mut points = Vec::new();
    let mut infinite = Vec::new();
    for e in eigs {
        match e.value {
            None => infinite.push(e.right),
            Some(mu) => points.push(finish_point(problem, lambda, mu, &e.right)?),
        }
    }
    points.sort_by(|a, b| mu_order(&a.mu, &b.mu));
    for (id, p) in points.iter_mut().enumerate() {
        p.branch_id = id;
    }
    Ok(Spectrum { points, infinite })
}

/// Finite eigenvalues only, unsorted, with the count of infinite ones.
pub fn mu_values_at(problem: &TwoParProblem, lambda: c64) -> Result<(Vec<c64>, usize)> {
    let p = mat_scale(
        c64::new(-1.0, 0.0),
        &(problem.b(0) + mat_scale(lambda, problem.b(1))),
    );
    let eigs = pencil_eigen(&p, problem.b(2), false)?;
    let finite: Vec<c64> = eigs.iter().filter_map(|e| e.value).collect();
    let inf = eigs.len() - finite.len();
    Ok((finite, inf))
}

fn finish_point(problem: &TwoParProblem, lambda: c64, mu0: c64, y0: &CCol) -> Result<BranchPoint> {
    let (y, normalized_ok) = problem.c_normalize(y0);
    let mut bp = BranchPoint {
        lambda,
        mu: mu0,
        y,
        w: CCol::zeros(problem.m()),
        branch_id: 0,
        c_degenerate: !normalized_ok,
    };
    if bp.c_degenerate {
        bp.w = left_null_vector(&problem.b_at(lambda, bp.mu))?;
        return Ok(bp);
    }
    let mut res = bp.residual(problem);
    for _ in 0..2 {
        if res <= 1e-15 {
            break;
        }
        let j = assemble_j(problem, lambda, bp.mu, &bp.y);
        let lu = DenseLu::new(&j);
        let m = problem.m();
        let by: CCol = &problem.b_at(lambda, bp.mu) * &bp.y;
        let rhs = CCol::from_fn(m + 1, |i| {
            if i < m {
                -by[i]
            } else {
                c64::new(1.0, 0.0) - dot_t(problem.c(), &bp.y)
            }
        });
        let step = lu.solve(&rhs);
        if !is_finite(&step) {
            break;
        }
        let y_new = CCol::from_fn(m, |i| bp.y[i] + step[i]);
        let mu_new = bp.mu + step[m];
        let res_new = crate::problem::residual_b(problem, lambda, mu_new, &y_new);
        if res_new < res && (mu_new - bp.mu).norm() <= 1e-6 * (1.0 + bp.mu.norm()) {
            bp.y = y_new;
            bp.mu = mu_new;
            res = res_new;
        } else {
            break;
        }
    }
    bp.w = left_vector_via_j(problem, &bp)?;
    Ok(bp)
}

/// `J^H [w; t] = [0; 1]` forces `t = 0` and `w^H B(lambda, mu) = 0` when
/// `c^T y = 1`; falls back to an SVD null vector if `J` is singular.
fn left_vector_via_j(problem: &TwoParProblem, bp: &BranchPoint) -> Result<CCol> {
    let jac = JacobianJ::new(problem, bp)?;
    if !jac.is_singular() {
        let m = problem.m();
        let e = CCol::from_fn(m + 1, |i| {
            if i == m {
                c64::new(1.0, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        let z = jac.lu.solve_adjoint(&e);
        let w = CCol::from_fn(m, |i| z[i]);
        if is_finite(&w) && w.norm_l2() > 0.0 {
            return Ok(normalized(&w));
        }
    }
    left_null_vector(&problem.b_at(bp.lambda, bp.mu))
}

fn assemble_j(problem: &TwoParProblem, lambda: c64, mu: c64, y: &CCol) -> CMat {
    let m = problem.m();
    let b = problem.b_at(lambda, mu);
    let b3y: CCol = problem.b(2) * y;
    Mat::from_fn(m + 1, m + 1, |i, j| match (i < m, j < m) {
        (true, true) => b[(i, j)],
        (true, false) => b3y[i],
        (false, true) => problem.c()[j],
        (false, false) => c64::new(0.0, 0.0),
    })
}

/// The bordered matrix `[[B(lambda, mu), B3 y], [c^T, 0]]` with its LU
/// factors and extreme singular values.
pub struct JacobianJ {
    pub matrix: CMat,
    lu: DenseLu,
    sigma_max: f64,
    sigma_min: f64,
}

impl JacobianJ {
    pub fn new(problem: &TwoParProblem, bp: &BranchPoint) -> Result<Self> {
        let matrix = assemble_j(problem, bp.lambda, bp.mu, &bp.y);
        let (sigma_max, sigma_min) = sigma_extremes(&matrix)?;
        Ok(JacobianJ {
            lu: DenseLu::new(&matrix),
            matrix,
            sigma_max,
            sigma_min,
        })
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    /// `sigma_min(J) / ||J||_2`
    pub fn singular_ratio(&self) -> f64 {
        if self.sigma_max == 0.0 {
            0.0
        } else {
            self.sigma_min / self.sigma_max
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular_ratio() <= TOL_SINGULAR_J
    }

    pub fn solve(&self, rhs: &CCol) -> CCol {
        self.lu.solve(rhs)
    }
}

pub fn jacobian(problem: &TwoParProblem, bp: &BranchPoint) -> Result<JacobianJ> {
    JacobianJ::new(problem, bp)
}

/// `g^{(1..=k)}` and `y^{(1..=k)}` at a branch point; index 0 holds the
/// first derivative.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub g: Vec<c64>,
    pub y: Vec<CCol>,
}

/// Derivatives of `g_i` and `y_i` from the bordered system
/// `J [y^(k); g^(k)] = [-b_k; 0]`, with one factorization of `J`.
///
/// `b_k = k B2 y^(k-1) + sum_{j=1}^{k-1} C(k, j) g^(k-j) B3 y^(j)`; the
/// factor `k` comes from `d^k (lambda y) = lambda y^(k) + k y^(k-1)`.
pub fn derivatives(problem: &TwoParProblem, bp: &BranchPoint, k: usize) -> Result<Derivatives> {
    let jac = JacobianJ::new(problem, bp)?;
    if jac.is_singular() {
        return Err(Error::SingularJacobian {
            lambda: bp.lambda,
            mu: bp.mu,
            ratio: jac.singular_ratio(),
        });
    }
    let m = problem.m();
    let b2 = problem.b(1);
    let b3 = problem.b(2);
    let mut ys: Vec<CCol> = vec![bp.y.clone()];
    let mut gs: Vec<c64> = vec![bp.mu];
    // B3 y^(j), cached across orders.
    let mut b3ys: Vec<CCol> = vec![b3 * &bp.y];
    for order in 1..=k {
        let mut b: CCol = scale(c64::new(order as f64, 0.0), &(b2 * &ys[order - 1]));
        for j in 1..order {
            b += scale(c64::new(binomial(order, j), 0.0) * gs[order - j], &b3ys[j]);
        }
        let rhs = CCol::from_fn(m + 1, |i| if i < m { -b[i] } else { c64::new(0.0, 0.0) });
        let sol = jac.solve(&rhs);
        let yk = CCol::from_fn(m, |i| sol[i]);
        b3ys.push(b3 * &yk);
        ys.push(yk);
        gs.push(sol[m]);
    }
    Ok(Derivatives {
        g: gs[1..].to_vec(),
        y: ys[1..].to_vec(),
    })
}

/// Branch table fixed at a reference point, plus the most recent point
/// reached on each branch.
#[derive(Clone, Debug)]
pub struct BranchState {
    reference_lambda: c64,
    table: Vec<BranchPoint>,
    last: Vec<BranchPoint>,
}

impl BranchState {
    pub fn new(problem: &TwoParProblem, reference_lambda: c64) -> Result<Self> {
        let spec = eigenpairs_at(problem, reference_lambda)?;
        if spec.points.is_empty() {
            return Err(Error::NoFiniteBranch {
                lambda: reference_lambda,
            });
        }
        Ok(BranchState {
            reference_lambda,
            last: spec.points.clone(),
            table: spec.points,
        })
    }

    pub fn reference_lambda(&self) -> c64 {
        self.reference_lambda
    }

    pub fn table(&self) -> &[BranchPoint] {
        &self.table
    }

    pub fn branch_count(&self) -> usize {
        self.table.len()
    }

    pub fn last_point(&self, branch_id: usize) -> Result<&BranchPoint> {
        self.last.get(branch_id).ok_or(Error::UnknownBranch {
            branch: branch_id,
            available: self.table.len(),
        })
    }

    /// Branch whose reference value is closest to `mu`, ties to smaller id.
    pub fn nearest_branch(&self, mu: c64) -> usize {
        self.table
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (a.mu - mu).norm().total_cmp(&(b.mu - mu).norm()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Resets every branch to its reference point.
    pub fn rewind(&mut self) {
        self.last = self.table.clone();
    }
}

/// Moves `branch_id` to `lambda_new` by first-order prediction. The step is
/// bisected (up to 8 levels) while the nearest candidate is not clearly
/// closer to the prediction than the runner-up.
pub fn continue_branch(
    problem: &TwoParProblem,
    state: &mut BranchState,
    branch_id: usize,
    lambda_new: c64,
) -> Result<BranchPoint> {
    let prev = state.last_point(branch_id)?.clone();
    if lambda_new == prev.lambda {
        return Ok(prev);
    }
    let mut next = track(problem, &prev, lambda_new, 0)?;
    next.branch_id = branch_id;
    state.last[branch_id] = next.clone();
    Ok(next)
}

fn track(problem: &TwoParProblem, from: &BranchPoint, to: c64, depth: u32) -> Result<BranchPoint> {
    let spec = eigenpairs_at(problem, to)?;
    if spec.points.is_empty() {
        return Err(Error::NoFiniteBranch { lambda: to });
    }
    let slope = from.g_prime_closed_form(problem).unwrap_or_default();
    let pred = from.mu + slope * (to - from.lambda);
    let mut cands: Vec<(f64, BranchPoint)> = spec
        .points
        .into_iter()
        .map(|p| ((p.mu - pred).norm(), p))
        .collect();
    cands.sort_by(|(da, a), (db, b)| da.total_cmp(db).then(mu_order(&a.mu, &b.mu)));
    if cands.len() >= 2 {
        let (d0, ref p0) = cands[0];
        let (d1, ref p1) = cands[1];
        if (p0.mu - p1.mu).norm() <= TOL_AMBIGUOUS * (1.0 + pred.norm()) {
            return Err(Error::AmbiguousBranch {
                branch: from.branch_id,
                lambda: to,
                first: p0.mu,
                second: p1.mu,
            });
        }
        if d0 > CLEAR_MARGIN * d1 && depth < MAX_HALVINGS {
            let mid = (from.lambda + to) * 0.5;
            let half = track(problem, from, mid, depth + 1)?;
            return track(problem, &half, to, depth + 1);
        }
    }
    let mut best = cands.swap_remove(0).1;
    best.branch_id = from.branch_id;
    Ok(best)
}

/// What `convergence_radius_scan` found near a sample.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum SingularityKind {
    /// Two finite eigenvalues coalesce.
    DoubleEigenvalue,
    /// A finite eigenvalue escapes to infinity.
    Pole,
}

#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct Singularity {
    pub lambda: c64,
    pub kind: SingularityKind,
    /// Relative gap (double eigenvalue) or `1/|mu|` (pole) at `lambda`.
    pub measure: f64,
}

#[derive(Clone, Debug)]
pub struct RadiusScan {
    /// Distance from the center to the nearest flagged point; infinite when
    /// nothing was flagged.
    pub radius: f64,
    pub flagged: Vec<Singularity>,
}

struct Sample {
    lambda: c64,
    gap: f64,
    big: f64,
}

fn closest_pair(mus: &[c64]) -> Option<(f64, c64, c64)> {
    let mut best: Option<(f64, c64, c64)> = None;
    for i in 0..mus.len() {
        for j in i + 1..mus.len() {
            let rel = (mus[i] - mus[j]).norm() / (1.0 + mus[i].norm() + mus[j].norm());
            if best.is_none_or(|(b, _, _)| rel < b) {
                best = Some((rel, mus[i], mus[j]));
            }
        }
    }
    best
}

fn mu_scale(problem: &TwoParProblem, lambda: c64) -> f64 {
    let [b1, b2, b3] = problem.b_norms();
    1.0 + (b1 + lambda.norm() * b2) / b3.max(f64::MIN_POSITIVE)
}

/// Flags points near `grid` where the pencil spectrum is singular: two
/// finite eigenvalues coalesce, or one escapes to infinity.
///
/// The grid is read as a polyline. Strict local minima of the relative
/// eigenvalue gap seed a secant iteration on `(mu_a - mu_b)^2`; strict local
/// maxima of the largest finite `|mu|` seed a secant iteration on `1/mu`.
/// Refined points whose gap falls below `TOL_DOUBLE`, or whose `|mu|`
/// exceeds `1e8` times the pencil's natural scale, are flagged. The flags
/// cover all branches, so `radius` bounds the convergence radius of every
/// branch through `center` from below.
pub fn convergence_radius_scan(
    problem: &TwoParProblem,
    center: c64,
    grid: &[c64],
) -> Result<RadiusScan> {
    let mut samples = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let (mus, _) = mu_values_at(problem, lambda)?;
        let gap = closest_pair(&mus).map_or(f64::INFINITY, |(g, _, _)| g);
        let big = mus.iter().map(|m| m.norm()).fold(0.0, f64::max) / mu_scale(problem, lambda);
        samples.push(Sample { lambda, gap, big });
    }
    let mut flagged: Vec<Singularity> = Vec::new();
    let push = |s: Singularity, flagged: &mut Vec<Singularity>| {
        let dup = flagged.iter().any(|f| {
            f.kind == s.kind && (f.lambda - s.lambda).norm() <= 1e-6 * (1.0 + s.lambda.norm())
        });
        if !dup {
            flagged.push(s);
        }
    };
    for i in 1..samples.len().saturating_sub(1) {
        let (a, s, b) = (&samples[i - 1], &samples[i], &samples[i + 1]);
        let h = 0.5 * ((s.lambda - a.lambda).norm() + (b.lambda - s.lambda).norm());
        if s.gap < a.gap && s.gap < b.gap {
            if let Some(f) = refine_double(problem, s.lambda, h)? {
                push(f, &mut flagged);
            }
        }
        if s.big > a.big && s.big > b.big {
            if let Some(f) = refine_pole(problem, s.lambda, h)? {
                push(f, &mut flagged);
            }
        }
    }
    flagged.sort_by(|a, b| {
        (a.lambda - center)
            .norm()
            .total_cmp(&(b.lambda - center).norm())
    });
    let radius = flagged
        .first()
        .map_or(f64::INFINITY, |f| (f.lambda - center).norm());
    Ok(RadiusScan { radius, flagged })
}

fn secant(mut f: impl FnMut(c64) -> Result<Option<c64>>, x0: c64, x1: c64) -> Result<Option<c64>> {
    let (mut xa, mut xb) = (x0, x1);
    let Some(mut fa) = f(xa)? else {
        return Ok(None);
    };
    let Some(mut fb) = f(xb)? else {
        return Ok(None);
    };
    for _ in 0..60 {
        if fb == c64::new(0.0, 0.0) {
            return Ok(Some(xb));
        }
        let den = fb - fa;
        if den == c64::new(0.0, 0.0) {
            break;
        }
        let xc = xb - fb * (xb - xa) / den;
        if !(xc.re.is_finite() && xc.im.is_finite()) {
            return Ok(None);
        }
        let Some(fc) = f(xc)? else { return Ok(None) };
        xa = xb;
        fa = fb;
        xb = xc;
        fb = fc;
        if (xb - xa).norm() <= 1e-14 * (1.0 + xb.norm()) {
            break;
        }
    }
    Ok(Some(xb))
}

fn refine_double(problem: &TwoParProblem, seed: c64, h: f64) -> Result<Option<Singularity>> {
    let disc = |l: c64| -> Result<Option<c64>> {
        let (mus, _) = mu_values_at(problem, l)?;
        Ok(closest_pair(&mus).map(|(_, a, b)| (a - b) * (a - b)))
    };
    let offset = c64::new(0.1 * h.max(1e-2), 0.1 * h.max(1e-2));
    let Some(root) = secant(disc, seed, seed + offset)? else {
        return Ok(None);
    };
    let (mus, _) = mu_values_at(problem, root)?;
    match closest_pair(&mus) {
        Some((gap, _, _)) if gap < TOL_DOUBLE => Ok(Some(Singularity {
            lambda: root,
            kind: SingularityKind::DoubleEigenvalue,
            measure: gap,
        })),
        _ => Ok(None),
    }
}

fn refine_pole(problem: &TwoParProblem, seed: c64, h: f64) -> Result<Option<Singularity>> {
    let (mus0, inf0) = mu_values_at(problem, seed)?;
    let count = mus0.len();
    let recip = |l: c64| -> Result<Option<c64>> {
        let (mus, inf) = mu_values_at(problem, l)?;
        if mus.len() < count || inf > inf0 {
            return Ok(Some(c64::new(0.0, 0.0)));
        }
        let big = mus
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()));
        Ok(big.map(|m| m.inv()))
    };
    let offset = c64::new(0.1 * h.max(1e-2), 0.1 * h.max(1e-2));
    let Some(root) = secant(recip, seed, seed + offset)? else {
        return Ok(None);
    };
    let (mus, inf) = mu_values_at(problem, root)?;
    let big = mus.iter().map(|m| m.norm()).fold(0.0, f64::max);
    let measure = if mus.len() < count || inf > inf0 {
        0.0
    } else {
        1.0 / big
    };
    if measure * mu_scale(problem, root) <= 1e-8 {
        Ok(Some(Singularity {
            lambda: root,
            kind: SingularityKind::Pole,
            measure,
        }))
    } else {
        Ok(None)
    }
}

/// Deterministic complex normalization vector, redrawn while some branch at
/// `lambda = 0` is c-degenerate.
pub fn default_c(problem: &TwoParProblem) -> Result<CCol> {
    let m = problem.m();
    let mut last = None;
    for seed in 0..16u64 {
        let mut rng = seeded_rng(0xc0ffee ^ seed);
        let c = random_complex_col(m, &mut rng);
        let trial = problem.clone().with_c(c.clone());
        let spec = eigenpairs_at(&trial, c64::new(0.0, 0.0))?;
        if spec.points.iter().all(|p| !p.c_degenerate) {
            return Ok(c);
        }
        last = Some(c);
    }
    Ok(last.expect("at least one draw"))
}
