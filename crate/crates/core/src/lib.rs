//! Solvers for linear two-parameter eigenvalue problems
//!
//! ```text
//! (A1 + lambda A2 + mu A3) x = 0,   A_j of order n (large, possibly sparse)
//! (B1 + lambda B2 + mu B3) y = 0,   B_j of order m (small, dense)
//! ```
//!
//! The small equation is eliminated: each finite eigenvalue `mu = g_i(lambda)`
//! of the pencil `-(B1 + lambda B2) y = mu B3 y` defines a nonlinear
//! eigenvalue problem `M(lambda) = A1 + lambda A2 + g_i(lambda) A3` in
//! `lambda` alone, which is then solved with augmented Newton or residual
//! inverse iteration. The Kronecker operator determinants in [`delta`]
//! provide a dense reference for small problems.

pub use num_complex::Complex64 as c64;

pub mod conditioning;
pub mod delta;
pub mod error;
pub mod io;
pub mod linalg;
pub mod nep;
pub mod pencil;
pub mod problem;
pub mod problems;
pub mod run;
pub mod solvers;
pub mod sparse;

pub use error::{Error, Result};
pub use problem::{residuals, Quadruplet, ResidualRecord, TwoParProblem};
pub use sparse::{AMatrix, CsrMatrix};
