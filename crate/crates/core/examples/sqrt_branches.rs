// The 2x2 B pencil `[[a, b], [c, d]] + lambda [[0, e], [f, 0]] + mu I` has
// the branches `g = -(a + d)/2 ± sqrt(disc(lambda))`. Continuation along a
// real grid tracks one of them, the derivative recursion reproduces the
// closed form, and the radius scan finds the two branch points.

use mepnl::linalg::{random_real_mat, seeded_rng};
use mepnl::pencil::{continue_branch, convergence_radius_scan, derivatives, BranchState};
use mepnl::problems::{gen_sqrt_nep, tabulate_branches, SqrtParams};
use mepnl::{c64, AMatrix};

pub fn run_example() -> anyhow::Result<()> {
    let params = SqrtParams::figure();
    let mut rng = seeded_rng(5);
    let [a1, a2, a3] = std::array::from_fn(|_| AMatrix::Dense(random_real_mat(6, 6, &mut rng)));
    let problem = gen_sqrt_nep(a1, a2, a3, params)?;

    let grid: Vec<c64> = (0..=40)
        .map(|k| c64::new(-2.0 + 0.1 * k as f64, 0.0))
        .collect();
    let table = tabulate_branches(&problem, &grid, &[0, 1])?;
    println!("{:>6} {:>22} {:>22}", "lambda", "g0", "g1");
    for k in (0..grid.len()).step_by(8) {
        let show = |v: Option<c64>| v.map_or("-".to_string(), |g| format!("{g:.6}"));
        println!(
            "{:>6.2} {:>22} {:>22}",
            grid[k].re,
            show(table.values[0][k]),
            show(table.values[1][k])
        );
    }

    let lambda = c64::new(0.3, 0.0);
    let mut state = BranchState::new(&problem, c64::new(0.0, 0.0))?;
    let bp = continue_branch(&problem, &mut state, 0, lambda)?;
    let d = derivatives(&problem, &bp, 2)?;
    // Closed-form derivative of the branch through bp.mu.
    let mid = -(params.a + params.d) / 2.0;
    let dp = params.e * (params.c + lambda * params.f) + params.f * (params.b + lambda * params.e);
    println!(
        "g'(0.3) recursion {:.12}, closed form {:.12}",
        d.g[0],
        dp / (2.0 * (bp.mu - mid))
    );

    let axis: Vec<c64> = (0..=50)
        .map(|k| c64::new(0.0, -2.5 + 0.1 * k as f64))
        .collect();
    let scan = convergence_radius_scan(&problem, c64::new(0.0, 0.0), &axis)?;
    println!("branch points (exact ±{:.6}i):", (17.0f64 / 8.0).sqrt());
    for s in &scan.flagged {
        println!("  {:?} at {:.8}", s.kind, s.lambda);
    }
    println!("convergence radius around 0: {:.6}", scan.radius);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
