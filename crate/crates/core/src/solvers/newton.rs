use std::time::Instant;

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{conj, dot_t, is_finite, scale, CCol};
use crate::nep::{left_vector, NepOperator, NepView};
use crate::pencil::derivatives;
use crate::problem::{residual_a, Quadruplet};
use crate::sparse::Factor;

use super::{IterRecord, SolveTrace, SolverConfig, Termination};

/// Augmented Newton: `u = M(lambda_k)^{-1} M'(lambda_k) x_k`,
/// `alpha_k = 1 / (d^T u)`, `x_{k+1} = alpha_k u`,
/// `lambda_{k+1} = lambda_k - alpha_k`, with `g` continued along the
/// branch held by `nep`.
pub fn augmented_newton(
    nep: &mut NepView<'_>,
    config: &SolverConfig,
    lambda0: c64,
    x0: &CCol,
) -> Result<(Quadruplet, SolveTrace)> {
    config.validate()?;
    let problem = nep.problem();
    if x0.nrows() != problem.n() {
        return Err(Error::DimensionMismatch(format!(
            "x0 has length {}, problem has n = {}",
            x0.nrows(),
            problem.n()
        )));
    }
    let x0_norm2 = x0.norm_l2().powi(2);
    if x0_norm2 == 0.0 {
        return Err(Error::InvalidInput("x0 is zero".into()));
    }
    let d = config
        .d
        .clone()
        .unwrap_or_else(|| scale(c64::new(1.0 / x0_norm2, 0.0), &conj(x0)));
    if dot_t(&d, x0).norm() <= 1e-14 * d.norm_l2() * x0.norm_l2() {
        return Err(Error::InvalidInput(
            "normalization vector d is orthogonal to x0".into(),
        ));
    }

    let start = Instant::now();
    let mut x = x0.clone();
    let mut lambda = lambda0;
    let mut records = Vec::new();
    let mut termination = Termination::MaxIterations;
    let mut bp = nep.branch_at(lambda)?;
    for k in 0..=config.maxit {
        if k > 0 {
            bp = nep.branch_at(lambda)?;
        }
        let res_a = residual_a(problem, lambda, bp.mu, &x);
        let mut record = IterRecord {
            k,
            lambda,
            mu: bp.mu,
            res_a,
            res_b: bp.residual(problem),
            newton_denominator: None,
            elapsed_s: start.elapsed().as_secs_f64(),
        };
        if res_a <= config.tol {
            records.push(record);
            termination = Termination::Converged;
            break;
        }
        if k == config.maxit {
            records.push(record);
            break;
        }
        let g1 = match bp.g_prime_closed_form(problem) {
            Some(g1) => g1,
            None => derivatives(problem, &bp, 1)?.g[0],
        };
        let mut mpx = problem.a(1).apply(&x);
        mpx += scale(g1, &problem.a(2).apply(&x));
        let factor = Factor::new(&NepOperator::new(problem, lambda, bp.mu).matrix())?;
        let u = factor.solve(&mpx);
        if !is_finite(&u) {
            return Err(Error::SingularMatrix {
                context: format!("M(lambda_{k}) at lambda = {lambda}"),
            });
        }
        let den = dot_t(&d, &u);
        if den == c64::new(0.0, 0.0) {
            return Err(Error::SingularMatrix {
                context: format!("Newton denominator d^T u vanished at iteration {k}"),
            });
        }
        record.newton_denominator = Some(den);
        records.push(record);
        let alpha = den.inv();
        x = scale(alpha, &u);
        lambda -= alpha;
    }

    let mut q = Quadruplet::new(problem, lambda, bp.mu, x, bp.y.clone())?;
    q.w = Some(bp.w.clone());
    if config.left_vectors && termination == Termination::Converged {
        q.v = left_vector(problem, lambda, bp.mu).ok();
    }
    Ok((
        q,
        SolveTrace {
            solver: "newton".into(),
            iterations: records,
            termination,
        },
    ))
}
