//! The nonlinearized problem `M(lambda) = A1 + lambda A2 + g_i(lambda) A3`
//! for one tracked branch `g_i`.

use std::collections::VecDeque;
use std::rc::Rc;

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{is_finite, normalized, random_complex_col, scale, seeded_rng, CCol};
use crate::pencil::{continue_branch, derivatives, BranchPoint, BranchState};
use crate::problem::TwoParProblem;
use crate::sparse::{AMatrix, Factor};

/// Number of shifted factorizations kept per view.
pub const CACHE_SIZE: usize = 4;
/// Solve growth above which `M(sigma)` counts as singular.
pub const SHIFT_GROWTH_LIMIT: f64 = 1e12;
const LEFT_VECTOR_MAXIT: usize = 50;
const LEFT_VECTOR_TOL: f64 = 1e-8;

/// `M(lambda)` at a fixed point `(lambda, mu = g_i(lambda))`.
#[derive(Clone, Copy)]
pub struct NepOperator<'p> {
    problem: &'p TwoParProblem,
    pub lambda: c64,
    pub mu: c64,
}

impl<'p> NepOperator<'p> {
    pub fn new(problem: &'p TwoParProblem, lambda: c64, mu: c64) -> Self {
        NepOperator {
            problem,
            lambda,
            mu,
        }
    }

    pub fn apply(&self, x: &CCol) -> CCol {
        self.problem.apply_a(self.lambda, self.mu, x)
    }

    pub fn apply_adjoint(&self, x: &CCol) -> CCol {
        let p = self.problem;
        let mut out = p.a(0).apply_adjoint(x);
        out += scale(self.lambda.conj(), &p.a(1).apply_adjoint(x));
        out += scale(self.mu.conj(), &p.a(2).apply_adjoint(x));
        out
    }

    pub fn matrix(&self) -> AMatrix {
        self.problem.a_at(self.lambda, self.mu)
    }
}

struct CacheEntry {
    sigma: c64,
    mu: c64,
    factor: Rc<Factor>,
}

/// A branch of the nonlinearized problem with a small LRU cache of
/// factorizations of `M(sigma)`.
pub struct NepView<'p> {
    problem: &'p TwoParProblem,
    state: BranchState,
    branch_id: usize,
    cache: VecDeque<CacheEntry>,
    hits: usize,
    factorizations: usize,
}

impl<'p> NepView<'p> {
    pub fn new(problem: &'p TwoParProblem, state: BranchState, branch_id: usize) -> Result<Self> {
        state.last_point(branch_id)?;
        Ok(NepView {
            problem,
            state,
            branch_id,
            cache: VecDeque::new(),
            hits: 0,
            factorizations: 0,
        })
    }

    /// Branch table referenced at `lambda_ref`, tracking `branch_id`.
    pub fn at_reference(
        problem: &'p TwoParProblem,
        lambda_ref: c64,
        branch_id: usize,
    ) -> Result<Self> {
        Self::new(problem, BranchState::new(problem, lambda_ref)?, branch_id)
    }

    pub fn problem(&self) -> &'p TwoParProblem {
        self.problem
    }

    pub fn branch_id(&self) -> usize {
        self.branch_id
    }

    pub fn state(&self) -> &BranchState {
        &self.state
    }

    pub fn cache_hits(&self) -> usize {
        self.hits
    }

    pub fn factorizations(&self) -> usize {
        self.factorizations
    }

    /// `g_i(lambda)` with its eigenvectors, continued from the last point.
    pub fn branch_at(&mut self, lambda: c64) -> Result<BranchPoint> {
        continue_branch(self.problem, &mut self.state, self.branch_id, lambda)
    }

    pub fn eval_m(&mut self, lambda: c64) -> Result<NepOperator<'p>> {
        let bp = self.branch_at(lambda)?;
        Ok(NepOperator::new(self.problem, lambda, bp.mu))
    }

    fn factor(&mut self, sigma: c64) -> Result<Rc<Factor>> {
        if let Some(pos) = self.cache.iter().position(|e| e.sigma == sigma) {
            self.hits += 1;
            let entry = self.cache.remove(pos).expect("position is valid");
            let f = entry.factor.clone();
            self.cache.push_front(entry);
            return Ok(f);
        }
        let op = self.eval_m(sigma)?;
        let factor = Rc::new(Factor::new(&op.matrix())?);
        self.factorizations += 1;
        let growth = factor.growth();
        if !(growth <= SHIFT_GROWTH_LIMIT) {
            return Err(Error::ShiftIsEigenvalue { sigma, growth });
        }
        self.cache.push_front(CacheEntry {
            sigma,
            mu: op.mu,
            factor: factor.clone(),
        });
        self.cache.truncate(CACHE_SIZE);
        Ok(factor)
    }

    /// `g_i(sigma)` as stored with the cached factorization.
    pub fn cached_mu(&self, sigma: c64) -> Option<c64> {
        self.cache.iter().find(|e| e.sigma == sigma).map(|e| e.mu)
    }

    /// `M(sigma)^{-1} rhs`, factorizing `M(sigma)` on first use.
    pub fn solve_shifted(&mut self, sigma: c64, rhs: &CCol) -> Result<CCol> {
        let f = self.factor(sigma)?;
        let x = f.solve(rhs);
        if !is_finite(&x) {
            return Err(Error::ShiftIsEigenvalue {
                sigma,
                growth: f64::INFINITY,
            });
        }
        Ok(x)
    }

    /// `M(sigma)^{-H} rhs`
    pub fn solve_shifted_adjoint(&mut self, sigma: c64, rhs: &CCol) -> Result<CCol> {
        let f = self.factor(sigma)?;
        let x = f.solve_adjoint(rhs);
        if !is_finite(&x) {
            return Err(Error::ShiftIsEigenvalue {
                sigma,
                growth: f64::INFINITY,
            });
        }
        Ok(x)
    }

    /// `M(sigma)^{-1} (M'(sigma) x_1 + ... + M^(p)(sigma) x_p)` where
    /// `M^(j) = [j == 1] A2 + g^(j) A3`.
    pub fn derivative_sum_apply(&mut self, sigma: c64, xs: &[CCol]) -> Result<CCol> {
        let n = self.problem.n();
        if xs.is_empty() {
            return Ok(CCol::zeros(n));
        }
        let bp = self.branch_at(sigma)?;
        let d = derivatives(self.problem, &bp, xs.len())?;
        let mut a3_sum = CCol::zeros(n);
        for (gj, xj) in d.g.iter().zip(xs) {
            a3_sum += scale(*gj, xj);
        }
        let mut rhs = self.problem.a(1).apply(&xs[0]);
        rhs += self.problem.a(2).apply(&a3_sum);
        self.solve_shifted(sigma, &rhs)
    }

    /// Left eigenvector of `M(lambda)` on the tracked branch.
    pub fn left_vector(&mut self, lambda: c64) -> Result<CCol> {
        let bp = self.branch_at(lambda)?;
        left_vector(self.problem, lambda, bp.mu)
    }
}

/// `v` with `||M^H v|| <= 1e-8 ||M|| ||v||`, `M = A1 + lambda A2 + mu A3`,
/// by inverse iteration on `M^H` from a seeded start.
pub fn left_vector(problem: &TwoParProblem, lambda: c64, mu: c64) -> Result<CCol> {
    let op = NepOperator::new(problem, lambda, mu);
    let a = op.matrix();
    let norm = a.norm_fro();
    let mut factor = Factor::new(&a)?;
    let mut rng = seeded_rng(0x1ef7);
    let mut v = normalized(&random_complex_col(problem.n(), &mut rng));
    let mut probe = factor.solve_adjoint(&v);
    if !is_finite(&probe) {
        // Exactly singular: shift off the eigenvalue by a rounding-level amount.
        let shifted = NepOperator::new(problem, lambda + 1e-14 * (1.0 + lambda.norm()), mu);
        factor = Factor::new(&shifted.matrix())?;
        probe = factor.solve_adjoint(&v);
    }
    for _ in 0..LEFT_VECTOR_MAXIT {
        if !is_finite(&probe) {
            break;
        }
        v = normalized(&probe);
        if op.apply_adjoint(&v).norm_l2() <= LEFT_VECTOR_TOL * norm {
            return Ok(v);
        }
        probe = factor.solve_adjoint(&v);
    }
    Err(Error::NotConverged {
        what: format!("left eigenvector at lambda = {lambda}"),
        iterations: LEFT_VECTOR_MAXIT,
    })
}

/// Fills in `q.w` from the pencil eigenpair nearest `q.mu` and `q.v` by
/// `left_vector`.
pub fn attach_left_vectors(
    problem: &TwoParProblem,
    q: &mut crate::problem::Quadruplet,
) -> Result<()> {
    let spec = crate::pencil::eigenpairs_at(problem, q.lambda)?;
    let bp = spec
        .points
        .into_iter()
        .min_by(|a, b| (a.mu - q.mu).norm().total_cmp(&(b.mu - q.mu).norm()))
        .ok_or(Error::NoFiniteBranch { lambda: q.lambda })?;
    q.w = Some(bp.w);
    q.v = Some(left_vector(problem, q.lambda, q.mu)?);
    Ok(())
}
