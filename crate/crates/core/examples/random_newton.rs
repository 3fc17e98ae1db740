// Augmented Newton on a random dense problem with the scalings
// `A_i, B_i = (1, 1/500, 1/50) * V F U`. The B residual stays at rounding
// level along the whole iteration because `mu = g(lambda)` is recomputed
// from the pencil at every step.

use mepnl::c64;
use mepnl::problems::{gen_random, RandomScalings};
use mepnl::solvers::{
    augmented_newton, branch_view, inverse_iteration_start, BranchSelect, SolverConfig,
};

pub fn run_example() -> anyhow::Result<()> {
    let problem = gen_random(200, 10, 3, RandomScalings::default())?;
    let lambda0 = c64::new(0.15, 0.1);
    let mut view = branch_view(&problem, BranchSelect::Index(0), lambda0)?;
    let x0 = inverse_iteration_start(&mut view, lambda0, 3, 1)?;
    let (q, trace) = augmented_newton(&mut view, &SolverConfig::default(), lambda0, &x0)?;

    println!(
        "{:>3} {:>30} {:>10} {:>10}",
        "k", "lambda", "res A", "res B"
    );
    for r in &trace.iterations {
        println!(
            "{:>3} {:>30.14} {:>10.2e} {:>10.2e}",
            r.k, r.lambda, r.res_a, r.res_b
        );
    }
    println!(
        "{:?}: lambda = {:.14}, mu = {:.14}",
        trace.termination, q.lambda, q.mu
    );
    anyhow::ensure!(trace.converged(), "newton did not converge");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
