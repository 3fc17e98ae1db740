// Condition numbers of an eigenvalue with respect to all six coefficient
// matrices, and a rank-one perturbation that attains the bound.

use mepnl::conditioning::{attaining_perturbation, c0_matrix, condition_numbers, det2, Weights};
use mepnl::nep::attach_left_vectors;
use mepnl::problems::{gen_random, RandomScalings};
use mepnl::{delta, AMatrix, TwoParProblem};

pub fn run_example() -> anyhow::Result<()> {
    let problem = gen_random(6, 3, 21, RandomScalings::default())?;
    let mut q = delta::solve(&problem)?.remove(0);
    attach_left_vectors(&problem, &mut q)?;

    let weights = Weights::relative(&problem);
    let report = condition_numbers(&problem, &q, &weights)?;
    println!("lambda = {:.12}", q.lambda);
    println!(
        "kappa_A = {:.4e}, kappa_g,B = {:.4e}, kappa_g,lambda = {:.4e}, kappa = {:.4e}",
        report.kappa_a, report.kappa_g_b, report.kappa_g_lambda, report.kappa_total
    );
    println!(
        "det C0 = {:.6e} (direct {:.6e})",
        report.det_c0,
        det2(&c0_matrix(&problem, &q)?)
    );

    let eps = 1e-7;
    let (da, db) = attaining_perturbation(&problem, &q, &weights, eps)?;
    let a = std::array::from_fn(|j| AMatrix::Dense(&problem.a(j).to_dense() + &da[j]));
    let b = std::array::from_fn(|j| problem.b(j) + &db[j]);
    let perturbed = TwoParProblem::new(a, b, problem.c().clone())?;
    let moved = delta::solve(&perturbed)?
        .into_iter()
        .map(|p| (p.lambda - q.lambda).norm())
        .fold(f64::INFINITY, f64::min);
    println!(
        "|d lambda| = {:.4e}, eps * kappa = {:.4e}, ratio {:.4}",
        moved,
        eps * report.kappa_total,
        moved / (eps * report.kappa_total)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
