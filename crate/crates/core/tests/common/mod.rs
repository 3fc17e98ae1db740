#![allow(dead_code)]

use faer::Mat;
use mepnl::linalg::{random_complex_col, random_real_mat, seeded_rng, CCol, CMat};
use mepnl::{c64, AMatrix, TwoParProblem};

pub fn dense(a: CMat) -> AMatrix {
    AMatrix::Dense(a)
}

pub fn random_a(n: usize, seed: u64) -> [CMat; 3] {
    let mut rng = seeded_rng(seed);
    std::array::from_fn(|_| random_real_mat(n, n, &mut rng))
}

pub fn random_complex_problem(n: usize, m: usize, seed: u64) -> TwoParProblem {
    let mut rng = seeded_rng(seed);
    let mut cm = |k: usize| {
        let re = random_real_mat(k, k, &mut rng);
        let im = random_real_mat(k, k, &mut rng);
        Mat::from_fn(k, k, |i, j| re[(i, j)] + c64::new(0.0, 1.0) * im[(i, j)])
    };
    let a: [AMatrix; 3] = std::array::from_fn(|_| AMatrix::Dense(cm(n)));
    let b: [CMat; 3] = std::array::from_fn(|_| cm(m));
    TwoParProblem::with_default_c(a, b).expect("valid problem")
}

pub fn scalar(v: f64) -> CMat {
    Mat::from_fn(1, 1, |_, _| c64::new(v, 0.0))
}

pub fn eye(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            c64::new(1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    })
}

pub fn zeros(n: usize) -> CMat {
    Mat::zeros(n, n)
}

pub fn random_vec(n: usize, seed: u64) -> CCol {
    random_complex_col(n, &mut seeded_rng(seed))
}

pub fn close(a: c64, b: c64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

/// Richardson-extrapolated central differences of order `k` (1..=5) of `f`
/// at `x`, from steps `h, h/2, h/4, h/8`.
pub fn fd_derivative(f: &dyn Fn(f64) -> c64, x: f64, k: usize, h: f64) -> c64 {
    let central = |h: f64| -> c64 {
        // Coefficients of the second-order central stencil of order k on
        // points x + j h, j = -3..=3.
        let coeffs: &[f64] = match k {
            1 => &[0.0, 0.0, -0.5, 0.0, 0.5, 0.0, 0.0],
            2 => &[0.0, 0.0, 1.0, -2.0, 1.0, 0.0, 0.0],
            3 => &[0.0, -0.5, 1.0, 0.0, -1.0, 0.5, 0.0],
            4 => &[0.0, 1.0, -4.0, 6.0, -4.0, 1.0, 0.0],
            5 => &[-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5],
            _ => panic!("order {k} not tabulated"),
        };
        let mut s = c64::new(0.0, 0.0);
        for (j, c) in coeffs.iter().enumerate() {
            if *c != 0.0 {
                s += *c * f(x + (j as f64 - 3.0) * h);
            }
        }
        s / h.powi(k as i32)
    };
    // Each level removes the next even power of h.

    let mut row: Vec<c64> = (0..4).map(|l| central(h / f64::powi(2.0, l))).collect();
    let mut factor = 4.0;
    while row.len() > 1 {
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 4.0;
    }
    row[0]
}
