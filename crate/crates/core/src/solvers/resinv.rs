use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{conj, normalized, CCol};
use crate::nep::{left_vector, NepView};
use crate::problem::{residual_a, residual_b, Quadruplet};

use super::{rayleigh_gep, IterRecord, SolveTrace, SolverConfig, Termination};

/// Residual inverse iteration with a fixed shift `sigma`: `(lambda, mu)`
/// from the scalar projection with `v = x_k`, then
/// `x_{k+1} ~ x_k - M(sigma)^{-1} (A1 + lambda A2 + mu A3) x_k`.
///
/// `M(sigma)` is factorized once and served from the view's cache.
pub fn resinv(
    nep: &mut NepView<'_>,
    config: &SolverConfig,
    x0: &CCol,
) -> Result<(Quadruplet, SolveTrace)> {
    config.validate()?;
    let problem = nep.problem();
    if x0.nrows() != problem.n() || x0.norm_l2() == 0.0 {
        return Err(Error::InvalidInput(format!(
            "x0 must be a nonzero vector of length n = {}",
            problem.n()
        )));
    }
    let sigma = config.sigma.unwrap_or(nep.state().reference_lambda());
    let w = match &config.w_proj {
        Some(w) => w.clone(),
        None => normalized(&conj(&nep.solve_shifted_adjoint(sigma, x0)?)),
    };

    let start = Instant::now();
    let mut x = normalized(x0);
    let mut lambda = sigma;
    let mut records = Vec::new();
    let mut termination = Termination::MaxIterations;
    let mut last = None;
    for k in 0..=config.maxit {
        let cand = rayleigh_gep(problem, &x, &w, lambda).map_err(|e| match e {
            Error::DegenerateProjection { value, .. } => {
                Error::DegenerateProjection { value, iterate: k }
            }
            other => other,
        })?;
        lambda = cand.lambda;
        let res_a = residual_a(problem, cand.lambda, cand.mu, &x);
        records.push(IterRecord {
            k,
            lambda: cand.lambda,
            mu: cand.mu,
            res_a,
            res_b: residual_b(problem, cand.lambda, cand.mu, &cand.y),
            newton_denominator: None,
            elapsed_s: start.elapsed().as_secs_f64(),
        });
        if res_a <= config.tol {
            termination = Termination::Converged;
            last = Some(cand);
            break;
        }
        if k == config.maxit {
            last = Some(cand);
            break;
        }
        let z = problem.apply_a(cand.lambda, cand.mu, &x);
        let corr = nep.solve_shifted(sigma, &z)?;
        x = normalized(&(&x - &corr));
    }

    let cand = last.expect("loop runs at least once");
    let mut q = Quadruplet::new(problem, cand.lambda, cand.mu, x, cand.y)?;
    if config.left_vectors && termination == Termination::Converged {
        q.v = left_vector(problem, cand.lambda, cand.mu).ok();
        q.w = crate::pencil::eigenpairs_at(problem, cand.lambda)?
            .points
            .into_iter()
            .min_by(|a, b| (a.mu - cand.mu).norm().total_cmp(&(b.mu - cand.mu).norm()))
            .map(|bp| bp.w);
    }
    Ok((
        q,
        SolveTrace {
            solver: "resinv".into(),
            iterations: records,
            termination,
        },
    ))
}
