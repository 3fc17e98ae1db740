//! One command-line invocation: build the problem, run the requested
//! subcommand and write its artifacts.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::c64;
use crate::conditioning::{condition_numbers, Weights};
use crate::error::{Error, Result};
use crate::io::results::{
    write_trace_csv, BranchSummary, CheckSummary, ProblemSummary, QuadrupletRecord, Results,
    Timings, TraceSummary, SCHEMA_VERSION,
};
use crate::io::{load_problem, matrix_market, parse_grid, save_problem};
use crate::linalg::{random_real_mat, seeded_rng, CCol};
use crate::nep::attach_left_vectors;
use crate::pencil::{convergence_radius_scan, BranchState};
use crate::problem::{Quadruplet, TwoParProblem};
use crate::problems::{
    gen_helmholtz, gen_qep, gen_random, gen_sqrt_nep, tabulate_branches, HelmholtzConfig,
    RandomScalings, SqrtParams,
};
use crate::solvers::{
    augmented_newton, branch_view, inverse_iteration_start, resinv, BranchSelect, SolveTrace,
    SolverConfig,
};
use crate::sparse::AMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Branches,
    Cond,
    Generate,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Random,
    Qep,
    Sqrt,
    Helmholtz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Newton,
    Resinv,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemSource {
    /// Generator sizes default per family when absent.
    Generated {
        generator: Generator,
        n: Option<usize>,
        m: Option<usize>,
    },
    Files {
        matrices: [PathBuf; 6],
        c: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub source: ProblemSource,
    pub solver: SolverKind,
    pub tol: f64,
    pub maxit: usize,
    /// Branch ids; the first one is used by the iterative solvers, all of
    /// them by tabulation (all branches when empty).
    pub branch: Vec<usize>,
    pub lambda0: c64,
    pub sigma: Option<c64>,
    pub x0_file: Option<PathBuf>,
    /// Real tabulation grid `a:h:b`.
    pub grid: Option<String>,
    pub out: PathBuf,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command, source: ProblemSource, out: impl Into<PathBuf>) -> Self {
        let defaults = SolverConfig::default();
        RunConfig {
            command,
            source,
            solver: SolverKind::Newton,
            tol: defaults.tol,
            maxit: defaults.maxit,
            branch: Vec::new(),
            lambda0: c64::new(0.0, 0.0),
            sigma: None,
            x0_file: None,
            grid: None,
            out: out.into(),
            seed: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut files: Vec<&Path> = Vec::new();
        if let ProblemSource::Files { matrices, c } = &self.source {
            files.extend(matrices.iter().map(PathBuf::as_path));
            files.extend(c.as_deref());
        }
        files.extend(self.x0_file.as_deref());
        for f in files {
            if !f.is_file() {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("{} does not exist", f.display()),
                )));
            }
        }
        if self.command == Command::Branches && self.grid.is_none() {
            return Err(Error::InvalidInput("branches needs --grid a:h:b".into()));
        }
        if let Some(g) = &self.grid {
            parse_grid(g)?;
        }
        self.solver_config().validate()
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            maxit: self.maxit,
            sigma: self.sigma,
            branch: BranchSelect::Index(self.branch.first().copied().unwrap_or(0)),
            ..SolverConfig::default()
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub written: Vec<PathBuf>,
    pub error: Option<String>,
}

fn random_a(n: usize, seed: u64) -> [AMatrix; 3] {
    let mut rng = seeded_rng(seed);
    std::array::from_fn(|_| AMatrix::Dense(random_real_mat(n, n, &mut rng)))
}

/// The problem named by `source`; generators draw from `seed`.
pub fn build_problem(source: &ProblemSource, seed: u64) -> Result<TwoParProblem> {
    match source {
        ProblemSource::Files { matrices, c } => load_problem(matrices, c.as_deref()),
        ProblemSource::Generated { generator, n, m } => match generator {
            Generator::Random => gen_random(
                n.unwrap_or(100),
                m.unwrap_or(10),
                seed,
                RandomScalings::default(),
            ),
            Generator::Qep => {
                let [a1, a2, a3] = random_a(n.unwrap_or(10), seed);
                gen_qep(a1, a2, a3)
            }
            Generator::Sqrt => {
                let [a1, a2, a3] = random_a(n.unwrap_or(10), seed);
                gen_sqrt_nep(a1, a2, a3, SqrtParams::figure())
            }
            Generator::Helmholtz => {
                let mut cfg = HelmholtzConfig::default();
                cfg.n = n.unwrap_or(cfg.n);
                cfg.m = m.unwrap_or(cfg.m);
                Ok(gen_helmholtz(&cfg)?.problem)
            }
        },
    }
}

struct Artifacts {
    quadruplets: Vec<QuadrupletRecord>,
    trace: Option<SolveTrace>,
    branches: Option<BranchSummary>,
    check: Option<CheckSummary>,
    exit_code: i32,
}

impl Artifacts {
    fn empty() -> Self {
        Artifacts {
            quadruplets: Vec::new(),
            trace: None,
            branches: None,
            check: None,
            exit_code: 0,
        }
    }
}

fn record_with_condition(
    problem: &TwoParProblem,
    q: &Quadruplet,
    absolute: bool,
) -> QuadrupletRecord {
    let mut rec = QuadrupletRecord::new(q);
    let weights = if absolute {
        Weights::absolute()
    } else {
        Weights::relative(problem)
    };
    match condition_numbers(problem, q, &weights) {
        Ok(r) => rec.condition = Some(r),
        Err(e) => rec.condition_error = Some(e.to_string()),
    }
    rec
}

fn iterate(problem: &TwoParProblem, config: &RunConfig) -> Result<(Quadruplet, SolveTrace)> {
    let sc = config.solver_config();
    let mut view = branch_view(problem, sc.branch, config.lambda0)?;
    let x0: CCol = match &config.x0_file {
        Some(p) => matrix_market::read_vector(p)?,
        None => inverse_iteration_start(&mut view, config.lambda0, 3, config.seed)?,
    };
    match config.solver {
        SolverKind::Newton => augmented_newton(&mut view, &sc, config.lambda0, &x0),
        SolverKind::Resinv => resinv(&mut view, &sc, &x0),
        SolverKind::Delta => unreachable!("delta is not iterative"),
    }
}

fn delta_quadruplets(problem: &TwoParProblem) -> Result<Vec<Quadruplet>> {
    let mut qs = crate::delta::solve(problem)?;
    for q in &mut qs {
        // Left vectors only feed the condition report; a failure there is
        // reported per quadruplet.
        let _ = attach_left_vectors(problem, q);
    }
    Ok(qs)
}

fn check_size(problem: &TwoParProblem) -> Result<()> {
    let size = problem.n() * problem.m();
    let cap = crate::delta::size_cap();
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    Ok(())
}

fn solve_like(problem: &TwoParProblem, config: &RunConfig, art: &mut Artifacts) -> Result<()> {
    let absolute = config.command == Command::Cond;
    if config.solver == SolverKind::Delta {
        for q in delta_quadruplets(problem)? {
            art.quadruplets
                .push(record_with_condition(problem, &q, absolute));
        }
        return Ok(());
    }
    let (q, trace) = iterate(problem, config)?;
    if !trace.converged() {
        art.exit_code = 2;
    }
    let rec = if trace.converged() {
        record_with_condition(problem, &q, absolute)
    } else {
        QuadrupletRecord::new(&q)
    };
    if absolute && rec.condition.is_none() && trace.converged() {
        art.exit_code = 3;
    }
    art.quadruplets.push(rec);
    art.trace = Some(trace);
    Ok(())
}

fn branches(
    problem: &TwoParProblem,
    config: &RunConfig,
    art: &mut Artifacts,
) -> Result<crate::problems::BranchTable> {
    let grid: Vec<c64> = parse_grid(config.grid.as_deref().unwrap_or_default())?
        .into_iter()
        .map(|x| c64::new(x, 0.0))
        .collect();
    let ids = if config.branch.is_empty() {
        (0..BranchState::new(problem, c64::new(0.0, 0.0))?.branch_count()).collect()
    } else {
        config.branch.clone()
    };
    let table = tabulate_branches(problem, &grid, &ids)?;
    let scan = convergence_radius_scan(problem, config.lambda0, &grid)?;
    art.branches = Some(BranchSummary {
        branch_ids: ids.clone(),
        gaps: (0..ids.len())
            .map(|b| table.gap_indices(b).into_iter().map(|k| grid[k]).collect())
            .collect(),
        singularities: scan.flagged,
    });
    Ok(table)
}

/// Newton from a perturbation of every oracle quadruplet, compared with it.
fn check(problem: &TwoParProblem, config: &RunConfig, art: &mut Artifacts) -> Result<()> {
    let oracle = delta_quadruplets(problem)?;
    let sc = SolverConfig {
        tol: config.tol,
        maxit: config.maxit,
        left_vectors: false,
        ..SolverConfig::default()
    };
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    let mut rng = seeded_rng(config.seed);
    for q in &oracle {
        let shift = 1e-3 * (1.0 + q.lambda.norm());
        let lambda0 = q.lambda + c64::new(shift, shift);
        let noise = crate::linalg::random_complex_col(problem.n(), &mut rng);
        let x0 = &q.x + crate::linalg::scale(c64::new(1e-3 / noise.norm_l2(), 0.0), &noise);
        let mut view = branch_view(problem, BranchSelect::NearestMu(q.mu), lambda0)?;
        let err = match augmented_newton(&mut view, &sc, lambda0, &x0) {
            Ok((r, trace)) if trace.converged() => (r.lambda - q.lambda).norm(),
            _ => f64::INFINITY,
        };
        worst = worst.max(err / q.lambda.norm().max(1.0));
        compared += 1;
    }
    let agreed = worst <= 1e-8;
    if !agreed {
        art.exit_code = 2;
    }
    art.check = Some(CheckSummary {
        max_lambda_error: worst,
        compared,
        agreed,
    });
    art.quadruplets = oracle.iter().map(QuadrupletRecord::new).collect();
    Ok(())
}

/// Runs `config`. Artifacts go to `config.out`; on a size-cap violation
/// nothing is written.
pub fn run(config: &RunConfig) -> RunOutcome {
    faer::set_global_parallelism(faer::Par::Seq);
    let start = Instant::now();
    let fail = |e: Error| RunOutcome {
        exit_code: e.exit_code(),
        written: Vec::new(),
        error: Some(e.to_string()),
    };
    if let Err(e) = config.validate() {
        return fail(e);
    }
    let problem = match build_problem(&config.source, config.seed) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let uses_delta = config.command == Command::Check
        || (matches!(config.command, Command::Solve | Command::Cond)
            && config.solver == SolverKind::Delta);
    if uses_delta {
        if let Err(e) = check_size(&problem) {
            return fail(e);
        }
    }
    if let Err(e) = std::fs::create_dir_all(&config.out) {
        return fail(e.into());
    }

    let mut written = Vec::new();
    let mut art = Artifacts::empty();
    let body = (|| -> Result<()> {
        match config.command {
            Command::Solve | Command::Cond => solve_like(&problem, config, &mut art),
            Command::Check => check(&problem, config, &mut art),
            Command::Generate => {
                save_problem(&problem, &config.out)?;
                let (paths, c) = crate::io::problem_paths(&config.out);
                written.extend(paths);
                written.push(c);
                Ok(())
            }
            Command::Branches => {
                let table = branches(&problem, config, &mut art)?;
                let path = config.out.join("branches.csv");
                table.write_csv(std::io::BufWriter::new(std::fs::File::create(&path)?))?;
                written.push(path);
                Ok(())
            }
        }
    })();
    let error = body.as_ref().err().map(|e| e.to_string());
    if let Err(e) = &body {
        art.exit_code = e.exit_code();
    }
    if let Some(trace) = &art.trace {
        let path = config.out.join("trace.csv");
        let res = std::fs::File::create(&path)
            .map_err(Error::from)
            .and_then(|f| write_trace_csv(trace, std::io::BufWriter::new(f)).map_err(Error::from));
        if let Err(e) = res {
            return fail(e);
        }
        written.push(path);
    }
    let results = Results {
        version: SCHEMA_VERSION,
        config: config.clone(),
        exit_code: art.exit_code,
        partial: body.is_err(),
        error: error.clone(),
        problem: Some(ProblemSummary {
            label: problem.label().to_string(),
            n: problem.n(),
            m: problem.m(),
        }),
        quadruplets: art.quadruplets,
        trace: art.trace.as_ref().map(TraceSummary::new),
        branches: art.branches,
        check: art.check,
        timings: Timings {
            total_s: start.elapsed().as_secs_f64(),
            iterations_s: art
                .trace
                .as_ref()
                .map(|t| t.iterations.iter().map(|r| r.elapsed_s).collect())
                .unwrap_or_default(),
        },
    };
    let path = config.out.join("results.json");
    if let Err(e) = results.write(&path) {
        return fail(e);
    }
    written.push(path);
    RunOutcome {
        exit_code: art.exit_code,
        written,
        error,
    }
}
