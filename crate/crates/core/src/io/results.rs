//! `results.json`, `trace.csv` and `branches.csv`.
//!
//! Everything in `results.json` except the `timings` object is a function
//! of the run configuration alone.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::c64;
use crate::conditioning::ConditionReport;
use crate::error::Result;
use crate::pencil::Singularity;
use crate::problem::{Quadruplet, ResidualRecord};
use crate::solvers::{SolveTrace, Termination};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadrupletRecord {
    pub lambda: c64,
    pub mu: c64,
    pub residuals: ResidualRecord,
    pub c_normalized: bool,
    pub x: Vec<c64>,
    pub y: Vec<c64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionReport>,
    /// Why no condition report is attached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_error: Option<String>,
}

impl QuadrupletRecord {
    pub fn new(q: &Quadruplet) -> Self {
        QuadrupletRecord {
            lambda: q.lambda,
            mu: q.mu,
            residuals: q.residuals,
            c_normalized: q.c_normalized,
            x: q.x.iter().copied().collect(),
            y: q.y.iter().copied().collect(),
            condition: None,
            condition_error: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    pub lambda: c64,
    pub mu: c64,
    pub res_a: f64,
    pub res_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_denominator: Option<c64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceSummary {
    pub solver: String,
    pub converged: bool,
    pub termination: Termination,
    pub iterations: Vec<TraceRecord>,
}

impl TraceSummary {
    pub fn new(trace: &SolveTrace) -> Self {
        TraceSummary {
            solver: trace.solver.clone(),
            converged: trace.converged(),
            termination: trace.termination,
            iterations: trace
                .iterations
                .iter()
                .map(|r| TraceRecord {
                    k: r.k,
                    lambda: r.lambda,
                    mu: r.mu,
                    res_a: r.res_a,
                    res_b: r.res_b,
                    newton_denominator: r.newton_denominator,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchSummary {
    pub branch_ids: Vec<usize>,
    /// Grid points marked as gaps, per branch.
    pub gaps: Vec<Vec<c64>>,
    pub singularities: Vec<Singularity>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckSummary {
    /// Largest `|lambda_solver - lambda_oracle|` over the compared pairs.
    pub max_lambda_error: f64,
    pub compared: usize,
    pub agreed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub label: String,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub total_s: f64,
    /// Wall-clock seconds at each recorded iterate.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub iterations_s: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Results<C> {
    pub version: u32,
    pub config: C,
    pub exit_code: i32,
    /// Set when the run stopped on an error and the artifacts are incomplete.
    pub partial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSummary>,
    pub quadruplets: Vec<QuadrupletRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<BranchSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckSummary>,
    pub timings: Timings,
}

impl<C: Serialize> Results<C> {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// `k,lambda_re,lambda_im,mu_re,mu_im,res_a,res_b`
pub fn write_trace_csv<W: Write>(trace: &SolveTrace, mut out: W) -> std::io::Result<()> {
    writeln!(out, "k,lambda_re,lambda_im,mu_re,mu_im,res_a,res_b")?;
    for r in &trace.iterations {
        writeln!(
            out,
            "{},{},{},{},{},{:e},{:e}",
            r.k, r.lambda.re, r.lambda.im, r.mu.re, r.mu.im, r.res_a, r.res_b
        )?;
    }
    Ok(())
}
