//! Problem families with known structure, used by the examples, the CLI
//! and the tests.

pub mod helmholtz;
pub mod qep;
pub mod random;
pub mod sqrt;
pub mod tabulate;

pub use helmholtz::{gen_helmholtz, HelmholtzConfig, HelmholtzProblem, Wavenumber};
pub use qep::gen_qep;
pub use random::{gen_random, RandomScalings};
pub use sqrt::{gen_sqrt_nep, SqrtParams};
pub use tabulate::{tabulate_branches, BranchTable};
