mod common;

use common::*;
use faer::Mat;
use mepnl::delta::{assemble, assemble_with_cap, solve, solve_detailed};
use mepnl::linalg::{dot_t, pencil_eigen, CMat};
use mepnl::problems::{gen_qep, gen_random, gen_sqrt_nep, RandomScalings, SqrtParams};
use mepnl::{c64, Error, TwoParProblem};

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

/// 2x2 block matrix from n x n blocks.
fn blocks(b: [[&CMat; 2]; 2]) -> CMat {
    let n = b[0][0].nrows();
    Mat::from_fn(2 * n, 2 * n, |i, j| b[i / n][j / n][(i % n, j % n)])
}

#[test]
fn qep_delta_is_the_companion_block_form() {
    let n = 5;
    let [a1, a2, a3] = random_a(n, 201);
    let p = gen_qep(dense(a1.clone()), dense(a2.clone()), dense(a3.clone())).unwrap();
    let d = assemble(&p).unwrap();
    let z = zeros(n);
    let (m1, m2) = (-&a1, -&a2);
    assert_eq!(d.delta0, blocks([[&a2, &a3], [&a3, &z]]));
    assert_eq!(d.delta1, blocks([[&m1, &z], [&z, &a3]]));
    assert_eq!(d.delta2, blocks([[&z, &m1], [&m1, &m2]]));
}

#[test]
fn qep_delta_eigenvalues_match_an_independent_companion() {
    let n = 5;
    let [a1, a2, a3] = random_a(n, 202);
    let p = gen_qep(dense(a1.clone()), dense(a2.clone()), dense(a3.clone())).unwrap();
    // First companion form: [[0, I], [-A1, -A2]] v = lambda [[I, 0], [0, A3]] v.
    let (i, z) = (eye(n), zeros(n));
    let lhs = blocks([[&z, &i], [&-&a1, &-&a2]]);
    let rhs = blocks([[&i, &z], [&z, &a3]]);
    let companion: Vec<c64> = pencil_eigen(&lhs, &rhs, false)
        .unwrap()
        .into_iter()
        .filter_map(|e| e.value)
        .collect();
    assert_eq!(companion.len(), 2 * n);
    let qs = solve(&p).unwrap();
    assert_eq!(qs.len(), 2 * n);
    for q in &qs {
        let d = companion
            .iter()
            .map(|l| (l - q.lambda).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(
            d <= 1e-8 * (1.0 + q.lambda.norm()),
            "{} off by {d:e}",
            q.lambda
        );
        assert!((q.mu - q.lambda * q.lambda).norm() <= 1e-8 * (1.0 + q.mu.norm()));
    }
}

#[test]
fn zero_b_gives_zero_deltas() {
    let a = random_a(3, 203);
    let p = TwoParProblem::new(
        a.map(dense),
        [zeros(2), zeros(2), zeros(2)],
        random_vec(2, 1),
    )
    .unwrap();
    let d = assemble(&p).unwrap();
    for m in [&d.delta0, &d.delta1, &d.delta2] {
        assert_eq!(m.norm_l2(), 0.0);
    }
    assert!(matches!(solve(&p), Err(Error::SingularProblem { .. })));
}

#[test]
fn pure_sqrt_delta_has_the_two_by_two_block_form() {
    let params = SqrtParams::pure_sqrt();
    let [a1, a2, a3] = random_a(4, 204);
    let p = gen_sqrt_nep(
        dense(a1.clone()),
        dense(a2.clone()),
        dense(a3.clone()),
        params,
    )
    .unwrap();
    let d = assemble(&p).unwrap();
    let s = |v: f64, m: &CMat| mepnl::linalg::mat_scale(re(v), m);
    let (ba3, ca3, ea3, fa3) = (
        s(-params.b, &a3),
        s(-params.c, &a3),
        s(params.e, &a3),
        s(params.f, &a3),
    );
    let m2 = -&a2;
    assert_eq!(d.delta1, blocks([[&a1, &ba3], [&ca3, &a1]]));
    assert_eq!(d.delta0, blocks([[&m2, &ea3], [&fa3, &m2]]));
}

#[test]
fn scalar_problem_matches_cramers_rule() {
    let (a1, a2, a3) = (0.7, -1.9, 0.4);
    let (b1, b2, b3) = (2.3, 0.6, -1.1);
    let p = TwoParProblem::with_default_c(
        [dense(scalar(a1)), dense(scalar(a2)), dense(scalar(a3))],
        [scalar(b1), scalar(b2), scalar(b3)],
    )
    .unwrap();
    // lambda a2 + mu a3 = -a1, lambda b2 + mu b3 = -b1
    let det = a2 * b3 - a3 * b2;
    let lambda = (-a1 * b3 + a3 * b1) / det;
    let mu = (-a2 * b1 + a1 * b2) / det;
    let qs = solve(&p).unwrap();
    assert_eq!(qs.len(), 1);
    assert!((qs[0].lambda - re(lambda)).norm() <= 1e-14 * lambda.abs().max(1.0));
    assert!((qs[0].mu - re(mu)).norm() <= 1e-14 * mu.abs().max(1.0));
}

#[test]
fn pure_sqrt_solutions_solve_the_algebraic_nep() {
    let params = SqrtParams::pure_sqrt();
    let [a1, a2, a3] = random_a(6, 205);
    let p = gen_sqrt_nep(
        dense(a1.clone()),
        dense(a2.clone()),
        dense(a3.clone()),
        params,
    )
    .unwrap();
    let qs = solve(&p).unwrap();
    assert!(!qs.is_empty());
    for q in &qs {
        let root = params.p(q.lambda).sqrt();
        let best = [root, -root]
            .iter()
            .map(|&s| {
                let r = &a1 * &q.x
                    + mepnl::linalg::scale(q.lambda, &(&a2 * &q.x))
                    + mepnl::linalg::scale(s, &(&a3 * &q.x));
                let scale =
                    (a1.norm_l2() + q.lambda.norm() * a2.norm_l2() + s.norm() * a3.norm_l2())
                        * q.x.norm_l2();
                r.norm_l2() / scale
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 1e-8, "lambda {}: {best:e}", q.lambda);
    }
}

#[test]
fn returned_quadruplets_are_filtered_sorted_and_normalized() {
    for seed in 206..210 {
        let p = gen_random(7, 3, seed, RandomScalings::default()).unwrap();
        let qs = solve(&p).unwrap();
        assert!(!qs.is_empty());
        for q in &qs {
            assert!(q.residuals.res_a <= 1e-8 && q.residuals.res_b <= 1e-8);
            if q.c_normalized {
                assert!((dot_t(p.c(), &q.y) - re(1.0)).norm() <= 1e-12);
            }
        }
        for w in qs.windows(2) {
            assert!(w[0].lambda.norm() <= w[1].lambda.norm());
        }
    }
}

#[test]
fn delta2_rayleigh_quotient_matches_mu() {
    let p = gen_random(6, 4, 211, RandomScalings::default()).unwrap();
    let pencil = assemble(&p).unwrap();
    let sol = solve_detailed(&p).unwrap();
    assert_eq!(sol.quadruplets.len(), sol.z.len());
    for (q, z) in sol.quadruplets.iter().zip(&sol.z) {
        let mu = pencil.mu_rayleigh(z);
        assert!(
            (mu - q.mu).norm() <= 1e-6 * (1.0 + q.mu.norm()),
            "{mu} vs {}",
            q.mu
        );
    }
}

#[test]
fn size_cap_is_enforced_with_its_value_in_the_message() {
    let p = gen_random(4, 3, 212, RandomScalings::default()).unwrap();
    let err = assemble_with_cap(&p, 11).unwrap_err();
    assert!(matches!(err, Error::TooLarge { size: 12, cap: 11 }));
    assert!(err.to_string().contains("11"));
    assert!(assemble_with_cap(&p, 12).is_ok());
}
