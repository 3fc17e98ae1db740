// Residual inverse iteration: one factorization of `M(sigma)`, reused at
// every step, with `(lambda, mu)` taken from the scalar projection. The
// residual decays linearly at a rate set by `|sigma - lambda*|`.

use mepnl::c64;
use mepnl::problems::{gen_random, RandomScalings};
use mepnl::solvers::{branch_view, inverse_iteration_start, resinv, BranchSelect, SolverConfig};

pub fn run_example() -> anyhow::Result<()> {
    let problem = gen_random(200, 10, 3, RandomScalings::default())?;
    let lambda0 = c64::new(0.15, 0.1);
    let mut view = branch_view(&problem, BranchSelect::Index(0), lambda0)?;
    let x0 = inverse_iteration_start(&mut view, lambda0, 3, 1)?;
    let config = SolverConfig {
        maxit: 200,
        ..SolverConfig::default()
    };
    let (q, trace) = resinv(&mut view, &config, &x0)?;

    let res: Vec<f64> = trace.iterations.iter().map(|r| r.res_a).collect();
    for (k, w) in res.windows(2).enumerate().step_by(3) {
        println!(
            "{:>3} res A {:>10.2e}  ratio {:.3}",
            k + 1,
            w[1],
            w[1] / w[0]
        );
    }
    println!(
        "{:?} after {} steps: lambda = {:.12}; {} factorization(s), {} cache hits",
        trace.termination,
        res.len() - 1,
        q.lambda,
        view.factorizations(),
        view.cache_hits()
    );
    anyhow::ensure!(trace.converged(), "resinv did not converge");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
