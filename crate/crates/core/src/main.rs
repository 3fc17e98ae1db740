use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mepnl::io::parse_complex;
use mepnl::run::{run, Command, Generator, ProblemSource, RunConfig, SolverKind};

#[derive(Parser)]
#[command(
    name = "mepnl",
    version,
    about = "Two-parameter eigenvalue problems via nonlinearization"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute an eigenvalue with the chosen solver.
    Solve(Common),
    /// Tabulate branches g_i over a real grid and flag singular points.
    Branches(Common),
    /// Solve, then report absolute-weight condition numbers.
    Cond(Common),
    /// Write the problem's matrices as Matrix Market files.
    Generate(Common),
    /// Compare Newton against the operator-determinant oracle.
    Check(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenArg {
    Random,
    Qep,
    Sqrt,
    Helmholtz,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Newton,
    Resinv,
    Delta,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, conflicts_with = "matrix_files")]
    gen: Option<GenArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "newton")]
    solver: SolverArg,
    /// Comma-separated branch ids.
    #[arg(long, value_delimiter = ',')]
    branch: Vec<usize>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    lambda0: Option<num_complex::Complex64>,
    #[arg(long)]
    x0_file: Option<PathBuf>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    sigma: Option<num_complex::Complex64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    maxit: Option<usize>,
    /// Real grid a:h:b.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// A1,A2,A3,B1,B2,B3
    #[arg(long, value_delimiter = ',')]
    matrix_files: Option<Vec<PathBuf>>,
    #[arg(long, requires = "matrix_files")]
    c_file: Option<PathBuf>,
}

fn complex(s: &str) -> Result<num_complex::Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn config(command: Command, a: Common) -> Result<RunConfig, String> {
    let source = match (a.gen, a.matrix_files) {
        (Some(g), None) => ProblemSource::Generated {
            generator: match g {
                GenArg::Random => Generator::Random,
                GenArg::Qep => Generator::Qep,
                GenArg::Sqrt => Generator::Sqrt,
                GenArg::Helmholtz => Generator::Helmholtz,
            },
            n: a.n,
            m: a.m,
        },
        (None, Some(files)) => ProblemSource::Files {
            matrices: files
                .try_into()
                .map_err(|_| "--matrix-files needs six paths")?,
            c: a.c_file,
        },
        _ => return Err("give exactly one of --gen and --matrix-files".into()),
    };
    let mut cfg = RunConfig::new(command, source, a.out);
    cfg.solver = match a.solver {
        SolverArg::Newton => SolverKind::Newton,
        SolverArg::Resinv => SolverKind::Resinv,
        SolverArg::Delta => SolverKind::Delta,
    };
    cfg.seed = a.seed;
    cfg.branch = a.branch;
    cfg.lambda0 = a.lambda0.unwrap_or(cfg.lambda0);
    cfg.sigma = a.sigma;
    cfg.x0_file = a.x0_file;
    cfg.tol = a.tol.unwrap_or(cfg.tol);
    cfg.maxit = a.maxit.unwrap_or(cfg.maxit);
    cfg.grid = a.grid;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Solve(a) => (Command::Solve, a),
        Cmd::Branches(a) => (Command::Branches, a),
        Cmd::Cond(a) => (Command::Cond, a),
        Cmd::Generate(a) => (Command::Generate, a),
        Cmd::Check(a) => (Command::Check, a),
    };
    let cfg = match config(command, args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let outcome = run(&cfg);
    for p in &outcome.written {
        println!("wrote {}", p.display());
    }
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(outcome.exit_code.clamp(0, 255) as u8)
}
