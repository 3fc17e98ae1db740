// A quadratic eigenvalue problem `(A1 + lambda A2 + lambda^2 A3) x = 0`
// posed as a two-parameter problem. The operator-determinant pencil is
// then the familiar companion linearization, and Newton on the single
// finite branch `g(lambda) = lambda^2` recovers its eigenvalues.

use mepnl::linalg::{pencil_eigen, random_real_mat, seeded_rng, CMat};
use mepnl::problems::gen_qep;
use mepnl::solvers::{augmented_newton, branch_view, BranchSelect, SolverConfig};
use mepnl::{c64, delta, AMatrix};

pub fn run_example() -> anyhow::Result<()> {
    let n = 4;
    let mut rng = seeded_rng(11);
    let a: Vec<CMat> = (0..3).map(|_| random_real_mat(n, n, &mut rng)).collect();
    let problem = gen_qep(
        AMatrix::Dense(a[0].clone()),
        AMatrix::Dense(a[1].clone()),
        AMatrix::Dense(a[2].clone()),
    )?;

    // Companion form [[0, I], [-A1, -A2]] w = lambda [[I, 0], [0, A3]] w.
    let p = CMat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) if j - n == i => c64::new(1.0, 0.0),
        (false, true) => -a[0][(i - n, j)],
        (false, false) => -a[1][(i - n, j - n)],
        _ => c64::new(0.0, 0.0),
    });
    let q = CMat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) if i == j => c64::new(1.0, 0.0),
        (false, false) => a[2][(i - n, j - n)],
        _ => c64::new(0.0, 0.0),
    });
    let companion: Vec<c64> = pencil_eigen(&p, &q, false)?
        .into_iter()
        .filter_map(|e| e.value)
        .collect();

    let oracle = delta::solve(&problem)?;
    println!(
        "{:>28} {:>28} {:>10}",
        "operator determinants", "companion", "|g - l^2|"
    );
    for q in &oracle {
        let c = companion
            .iter()
            .min_by(|a, b| (*a - q.lambda).norm().total_cmp(&(*b - q.lambda).norm()))
            .copied()
            .unwrap_or_default();
        println!(
            "{:>28.12} {:>28.12} {:>10.2e}",
            q.lambda,
            c,
            (q.mu - q.lambda * q.lambda).norm()
        );
    }

    let target = &oracle[0];
    let lambda0 = target.lambda + c64::new(1e-2, 1e-2);
    let mut view = branch_view(&problem, BranchSelect::Index(0), lambda0)?;
    let (sol, trace) = augmented_newton(&mut view, &SolverConfig::default(), lambda0, &target.x)?;
    println!(
        "newton from {lambda0:.4}: lambda = {:.14} after {} steps",
        sol.lambda,
        trace.iterations.len() - 1
    );
    anyhow::ensure!(
        (sol.lambda - target.lambda).norm() < 1e-8,
        "newton disagrees with the oracle"
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
