use std::io::Write;

use crate::c64;
use crate::error::{Error, Result};
use crate::pencil::{continue_branch, derivatives, BranchPoint, BranchState};
use crate::problem::TwoParProblem;

/// Continued branch values on a grid. `values[b][k]` is `g_{ids[b]}` at
/// `lambdas[k]`, `None` where continuation failed; `gaps[b][k]` marks a
/// suspected singularity between `lambdas[k-1]` and `lambdas[k]` (or a
/// failure at `k`).
#[derive(Clone, Debug)]
pub struct BranchTable {
    pub lambdas: Vec<c64>,
    pub branch_ids: Vec<usize>,
    pub values: Vec<Vec<Option<c64>>>,
    pub gaps: Vec<Vec<bool>>,
}

impl BranchTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "lambda_re,lambda_im")?;
        for id in &self.branch_ids {
            write!(out, ",g{id}_re,g{id}_im,g{id}_gap")?;
        }
        writeln!(out)?;
        for (k, l) in self.lambdas.iter().enumerate() {
            write!(out, "{},{}", l.re, l.im)?;
            for b in 0..self.branch_ids.len() {
                match self.values[b][k] {
                    Some(g) => write!(out, ",{},{}", g.re, g.im)?,
                    None => write!(out, ",,")?,
                }
                write!(out, ",{}", u8::from(self.gaps[b][k]))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Grid indices where branch `b` (position in `branch_ids`) has a gap.
    pub fn gap_indices(&self, b: usize) -> Vec<usize> {
        (0..self.lambdas.len())
            .filter(|&k| self.gaps[b][k])
            .collect()
    }
}

/// Distance to the nearest singularity of `g` suggested by the ratio of
/// consecutive Taylor coefficients `c_k = g^(k) / k!`, using the highest
/// pair available among orders 2..=5. Infinite when `g` looks polynomial
/// or `J` is singular.
pub fn taylor_radius(problem: &TwoParProblem, bp: &BranchPoint) -> f64 {
    let Ok(d) = derivatives(problem, bp, 5) else {
        return 0.0;
    };
    let mut fact = 1.0;
    let coeffs: Vec<f64> =
        d.g.iter()
            .enumerate()
            .map(|(i, g)| {
                fact *= (i + 1) as f64;
                g.norm() / fact
            })
            .collect();
    let scale = coeffs
        .iter()
        .cloned()
        .fold(0.0, f64::max)
        .max(bp.mu.norm())
        .max(1.0);
    for k in (1..4).rev() {
        let (a, b) = (coeffs[k], coeffs[k + 1]);
        if a > 1e-13 * scale && b > 1e-13 * scale {
            return a / b;
        }
    }
    f64::INFINITY
}

/// Tracks `branch_ids` (referenced at `lambda = 0`) across a sorted grid.
///
/// Each branch is walked from the reference point to `grid[0]` in steps no
/// longer than the first grid spacing, then along the grid. Failures to
/// continue (ambiguous or vanished branch) and intervals whose endpoints both
/// see a Taylor radius shorter than the interval are marked as gaps.
pub fn tabulate_branches(
    problem: &TwoParProblem,
    grid: &[c64],
    branch_ids: &[usize],
) -> Result<BranchTable> {
    let base = BranchState::new(problem, c64::new(0.0, 0.0))?;
    for &id in branch_ids {
        base.last_point(id)?;
    }
    let spacing = if grid.len() >= 2 {
        (grid[1] - grid[0]).norm()
    } else {
        1.0
    };
    let mut values = Vec::new();
    let mut gaps = Vec::new();
    for &id in branch_ids {
        let mut state = base.clone();
        let mut vals = vec![None; grid.len()];
        let mut gap = vec![false; grid.len()];
        if let Some(&first) = grid.first() {
            let dist = first.norm();
            let steps = (dist / spacing.max(f64::MIN_POSITIVE)).ceil().max(1.0) as usize;
            for s in 1..steps {
                let l = first * (s as f64 / steps as f64);
                // A failure on the approach leaves the branch where it was.
                let _ = continue_branch(problem, &mut state, id, l);
            }
        }
        let mut prev_radius: Option<f64> = None;
        for (k, &l) in grid.iter().enumerate() {
            match continue_branch(problem, &mut state, id, l) {
                Ok(bp) => {
                    vals[k] = Some(bp.mu);
                    let r = taylor_radius(problem, &bp);
                    if k > 0 {
                        let h = (l - grid[k - 1]).norm();
                        if let Some(pr) = prev_radius {
                            if pr <= h && r <= h {
                                gap[k] = true;
                            }
                        }
                    }
                    prev_radius = Some(r);
                }
                Err(Error::AmbiguousBranch { .. } | Error::NoFiniteBranch { .. }) => {
                    gap[k] = true;
                    prev_radius = None;
                }
                Err(e) => return Err(e),
            }
        }
        values.push(vals);
        gaps.push(gap);
    }
    Ok(BranchTable {
        lambdas: grid.to_vec(),
        branch_ids: branch_ids.to_vec(),
        values,
        gaps,
    })
}
