use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::{random_real_mat, seeded_rng, CMat};
use crate::problem::TwoParProblem;
use crate::sparse::AMatrix;
use rand_distr::{Distribution, StandardNormal};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomScalings {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
}

impl Default for RandomScalings {
    fn default() -> Self {
        RandomScalings {
            alpha: [1.0, 1.0 / 500.0, 1.0 / 50.0],
            beta: [1.0, 1.0 / 500.0, 1.0 / 50.0],
        }
    }
}

fn factor_product(dim: usize, s: f64, rng: &mut rand_chacha::ChaCha8Rng) -> CMat {
    let v = random_real_mat(dim, dim, rng);
    let f: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    let u = random_real_mat(dim, dim, rng);
    let vf = Mat::from_fn(dim, dim, |i, j| v[(i, j)] * f[j]);
    let mut out = &vf * &u;
    for j in 0..dim {
        for i in 0..dim {
            out[(i, j)] *= c64::new(s, 0.0);
        }
    }
    out
}

/// `A_i = alpha_i V_i F_i U_i`, `B_i = beta_i V_i G_i U_i` with standard
/// normal `V`, `U` and diagonal `F`, `G`. The draw order is fixed, so a
/// seed determines the problem bit for bit.
pub fn gen_random(
    n: usize,
    m: usize,
    seed: u64,
    scalings: RandomScalings,
) -> Result<TwoParProblem> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("random problem needs n, m >= 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let a: [AMatrix; 3] =
        std::array::from_fn(|i| AMatrix::Dense(factor_product(n, scalings.alpha[i], &mut rng)));
    let b: [CMat; 3] = std::array::from_fn(|i| factor_product(m, scalings.beta[i], &mut rng));
    Ok(TwoParProblem::with_default_c(a, b)?.with_label(format!("random n={n} m={m} seed={seed}")))
}
