// Writing a problem as seven Matrix Market files and reading it back.

use mepnl::io::{load_problem, problem_paths, save_problem};
use mepnl::problems::{gen_helmholtz, HelmholtzConfig};

pub fn run_example() -> anyhow::Result<()> {
    let hp = gen_helmholtz(&HelmholtzConfig {
        n: 50,
        m: 8,
        ..HelmholtzConfig::default()
    })?;
    let dir = tempfile::tempdir()?;
    save_problem(&hp.problem, dir.path())?;
    let (paths, c) = problem_paths(dir.path());
    let back = load_problem(&paths, Some(&c))?;

    for j in 0..3 {
        let diff = (&back.a(j).to_dense() - &hp.problem.a(j).to_dense()).norm_max();
        println!(
            "A{}: sparse = {}, max difference {diff:e}",
            j + 1,
            back.a(j).is_sparse()
        );
        anyhow::ensure!(diff == 0.0, "A{} changed in the round trip", j + 1);
        anyhow::ensure!(
            (back.b(j) - hp.problem.b(j)).norm_max() == 0.0,
            "B{} changed",
            j + 1
        );
    }
    println!(
        "{}",
        std::fs::read_to_string(&paths[2])?
            .lines()
            .take(3)
            .collect::<Vec<_>>()
            .join("\n")
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
