// The operator-determinant solve of a small random problem: every
// eigenpair of `Delta1 z = lambda Delta0 z` with a rank-one `z` gives a
// quadruplet.

use mepnl::delta;
use mepnl::problems::{gen_random, RandomScalings};

pub fn run_example() -> anyhow::Result<()> {
    let problem = gen_random(5, 3, 2, RandomScalings::default())?;
    let sol = delta::solve_detailed(&problem)?;
    println!(
        "{:>32} {:>32} {:>9} {:>9}",
        "lambda", "mu", "res A", "res B"
    );
    for q in &sol.quadruplets {
        println!(
            "{:>32.12} {:>32.12} {:>9.1e} {:>9.1e}",
            q.lambda, q.mu, q.residuals.res_a, q.residuals.res_b
        );
    }
    for d in &sol.dropped {
        println!("dropped {:.6}: {}", d.lambda, d.reason);
    }
    anyhow::ensure!(sol.quadruplets.len() == 15, "expected n*m = 15 eigenvalues");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
