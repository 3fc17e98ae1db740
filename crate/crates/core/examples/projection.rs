// Projecting the A side onto a small search space turns a large problem
// into a small one that the dense oracle can solve. With the exact
// eigenvector in the space, the projected problem keeps the eigenvalue.

use mepnl::linalg::{random_complex_col, seeded_rng, CMat};
use mepnl::problems::{gen_random, RandomScalings};
use mepnl::solvers::{
    augmented_newton, branch_view, inverse_iteration_start, project_2ep, rayleigh_gep,
    BranchSelect, SolverConfig,
};
use mepnl::{c64, delta};

pub fn run_example() -> anyhow::Result<()> {
    let problem = gen_random(120, 6, 8, RandomScalings::default())?;
    let lambda0 = c64::new(0.2, 0.1);
    let mut view = branch_view(&problem, BranchSelect::Index(0), lambda0)?;
    let x0 = inverse_iteration_start(&mut view, lambda0, 3, 2)?;
    let (q, _) = augmented_newton(&mut view, &SolverConfig::default(), lambda0, &x0)?;

    // Search space: the eigenvector plus three random directions.
    let mut rng = seeded_rng(4);
    let extra: Vec<_> = (0..3)
        .map(|_| random_complex_col(problem.n(), &mut rng))
        .collect();
    let v = CMat::from_fn(problem.n(), 4, |i, j| {
        if j == 0 {
            q.x[i]
        } else {
            extra[j - 1][i]
        }
    });
    let w = CMat::from_fn(problem.n(), 4, |i, j| v[(i, j)].conj());
    let small = project_2ep(&problem, &v, &w)?;
    let found = delta::solve(&small)?
        .into_iter()
        .map(|p| p.lambda)
        .min_by(|a, b| (a - q.lambda).norm().total_cmp(&(b - q.lambda).norm()))
        .ok_or_else(|| anyhow::anyhow!("projected problem has no eigenvalues"))?;
    println!("full problem      lambda = {:.14}", q.lambda);
    println!("4-dim projection  lambda = {:.14}", found);

    // The one-dimensional projection is the scalar Rayleigh functional.
    let w1 = q.x.iter().map(|z| z.conj()).collect::<Vec<_>>();
    let w1 = mepnl::linalg::CCol::from_fn(problem.n(), |i| w1[i]);
    let r = rayleigh_gep(&problem, &q.x, &w1, q.lambda)?;
    println!("Rayleigh functional lambda = {:.14}", r.lambda);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
