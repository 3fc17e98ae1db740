//! Iterations on the nonlinearized problem and the projections they use.

mod newton;
mod projection;
mod resinv;

use serde::{Deserialize, Serialize};

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::CCol;
use crate::nep::NepView;
use crate::pencil::BranchState;
use crate::problem::TwoParProblem;

pub use newton::augmented_newton;
pub use projection::{project_2ep, rayleigh_gep, rayleigh_gep_all, RayleighCandidate};
pub use resinv::resinv;

/// How the branch `g_i` is picked at the starting point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BranchSelect {
    /// Position in the `|mu|`-ordered branch table.
    Index(usize),
    /// Branch whose value is closest to the given `mu`.
    NearestMu(c64),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Stopping tolerance on the relative A residual.
    pub tol: f64,
    pub maxit: usize,
    /// Newton normalization; defaults to `conj(x0) / ||x0||^2`.
    pub d: Option<CCol>,
    /// Residual inverse iteration left projection; defaults to
    /// `conj(M(sigma)^{-H} x0)`, normalized.
    pub w_proj: Option<CCol>,
    /// Residual inverse iteration shift; defaults to the branch reference point.
    pub sigma: Option<c64>,
    pub branch: BranchSelect,
    /// Attach the left eigenvector `v` of `M(lambda)` to the result.
    pub left_vectors: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            maxit: 100,
            d: None,
            w_proj: None,
            sigma: None,
            branch: BranchSelect::Index(0),
            left_vectors: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.maxit == 0 {
            return Err(Error::InvalidInput(format!(
                "solver needs tol > 0 and maxit >= 1 (got tol = {}, maxit = {})",
                self.tol, self.maxit
            )));
        }
        Ok(())
    }
}

/// A branch view whose table is referenced at `lambda0`, tracking the
/// branch chosen by `select` there.
pub fn branch_view<'p>(
    problem: &'p TwoParProblem,
    select: BranchSelect,
    lambda0: c64,
) -> Result<NepView<'p>> {
    let state = BranchState::new(problem, lambda0)?;
    let id = match select {
        BranchSelect::Index(i) => i,
        BranchSelect::NearestMu(mu) => state.nearest_branch(mu),
    };
    NepView::new(problem, state, id)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IterRecord {
    pub k: usize,
    pub lambda: c64,
    pub mu: c64,
    pub res_a: f64,
    pub res_b: f64,
    /// `d^T M(lambda_k)^{-1} M'(lambda_k) x_k` (Newton only).
    pub newton_denominator: Option<c64>,
    pub elapsed_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Converged,
    MaxIterations,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveTrace {
    pub solver: String,
    pub iterations: Vec<IterRecord>,
    pub termination: Termination,
}

impl SolveTrace {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn final_residual(&self) -> f64 {
        self.iterations.last().map_or(f64::INFINITY, |r| r.res_a)
    }

    /// Iterates whose B residual exceeds `tol`.
    pub fn b_violations(&self, tol: f64) -> Vec<usize> {
        self.iterations
            .iter()
            .filter(|r| !(r.res_b <= tol))
            .map(|r| r.k)
            .collect()
    }
}

/// Starting vector for the iterations when none is given: `steps` inverse
/// iterations with `M(lambda0)` on the view's branch from a seeded random
/// vector, normalized.
pub fn inverse_iteration_start(
    nep: &mut NepView<'_>,
    lambda0: c64,
    steps: usize,
    seed: u64,
) -> Result<CCol> {
    let n = nep.problem().n();
    let mut rng = crate::linalg::seeded_rng(seed);
    let mut x = crate::linalg::normalized(&crate::linalg::random_complex_col(n, &mut rng));
    for _ in 0..steps {
        x = crate::linalg::normalized(&nep.solve_shifted(lambda0, &x)?);
    }
    Ok(x)
}
