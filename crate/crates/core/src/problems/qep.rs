use faer::Mat;

use crate::c64;
use crate::error::Result;
use crate::linalg::{CCol, CMat};
use crate::problem::TwoParProblem;
use crate::sparse::AMatrix;

fn small(rows: [[f64; 2]; 2]) -> CMat {
    Mat::from_fn(2, 2, |i, j| c64::new(rows[i][j], 0.0))
}

/// Quadratic problem `(A1 + lambda A2 + lambda^2 A3) x = 0` as a
/// two-parameter problem with `m = 2`: the B equation forces
/// `y = [1, lambda]` and `mu = lambda^2`. `c = e_1`, so `c^T y = y_1`.
pub fn gen_qep(a1: AMatrix, a2: AMatrix, a3: AMatrix) -> Result<TwoParProblem> {
    let b1 = small([[0.0, 0.0], [0.0, -1.0]]);
    let b2 = small([[0.0, 1.0], [1.0, 0.0]]);
    let b3 = small([[-1.0, 0.0], [0.0, 0.0]]);
    let c = CCol::from_fn(2, |i| {
        if i == 0 {
            c64::new(1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Ok(TwoParProblem::new([a1, a2, a3], [b1, b2, b3], c)?.with_label("quadratic"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::eigenpairs_at;

    #[test]
    fn one_finite_branch_equal_to_lambda_squared() {
        let eye = AMatrix::Dense(Mat::from_fn(3, 3, |i, j| {
            if i == j {
                c64::new(1.0, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        }));
        let p = gen_qep(eye.clone(), eye.clone(), eye).unwrap();
        let lambda = c64::new(3.0, 0.0);
        let spec = eigenpairs_at(&p, lambda).unwrap();
        assert_eq!(spec.points.len(), 1);
        assert_eq!(spec.infinite.len(), 1);
        assert!((spec.points[0].mu - c64::new(9.0, 0.0)).norm() <= 1e-12);
        assert!((spec.points[0].y[1] - lambda).norm() <= 1e-12);
    }
}
