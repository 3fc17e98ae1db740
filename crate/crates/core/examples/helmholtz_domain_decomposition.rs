// `u'' + kappa^2 u = lambda u` on `[0, 5]` split at `x = 4`: finite
// differences on the left, Chebyshev collocation on the right, coupled by
// `u'(4) = mu u(4)`. For constant `kappa` the eigenvalues are known in
// closed form; the default profile shows the poles of `g` on the real
// axis.

use mepnl::c64;
use mepnl::pencil::convergence_radius_scan;
use mepnl::problems::{gen_helmholtz, HelmholtzConfig, Wavenumber};
use mepnl::solvers::{
    augmented_newton, branch_view, inverse_iteration_start, BranchSelect, SolverConfig,
};

pub fn run_example() -> anyhow::Result<()> {
    let config = HelmholtzConfig {
        n: 400,
        wavenumber: Wavenumber::Constant(3.0),
        ..HelmholtzConfig::default()
    };
    let hp = gen_helmholtz(&config)?;
    let solver = SolverConfig {
        tol: 1e-13,
        ..SolverConfig::default()
    };
    println!(
        "{:>3} {:>12} {:>14} {:>9} {:>9}",
        "k", "exact", "computed", "error", "jump"
    );
    for (k, exact) in hp
        .analytic_eigenvalues(6)
        .unwrap_or_default()
        .into_iter()
        .enumerate()
    {
        let lambda0 = c64::new(exact + 0.01, 0.0);
        let mut view = branch_view(&hp.problem, BranchSelect::Index(0), lambda0)?;
        let x0 = inverse_iteration_start(&mut view, lambda0, 2, 1)?;
        match augmented_newton(&mut view, &solver, lambda0, &x0) {
            Ok((q, _)) => {
                let jump = hp.interface_check(&q).value_mismatch;
                println!(
                    "{:>3} {:>12.6} {:>14.8} {:>9.2e} {:>9.1e}",
                    k + 1,
                    exact,
                    q.lambda.re,
                    (q.lambda.re - exact).abs(),
                    jump
                );
            }
            // u(4) = 0 for this mode, so mu = u'(4)/u(4) is a pole of g.
            Err(e) => println!("{:>3} {:>12.6}   {e}", k + 1, exact),
        }
    }

    let profile = gen_helmholtz(&HelmholtzConfig {
        n: 400,
        ..HelmholtzConfig::default()
    })?;
    let grid: Vec<c64> = (0..=220)
        .map(|k| c64::new(-10.0 + 0.5 * k as f64, 0.0))
        .collect();
    let scan = convergence_radius_scan(&profile.problem, c64::new(5.0, 0.0), &grid)?;
    for s in &scan.flagged {
        println!(
            "default profile: {:?} of g near lambda = {:.6}",
            s.kind, s.lambda.re
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
