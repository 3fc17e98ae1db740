mod common;

use common::*;
use faer::Mat;
use mepnl::linalg::{dot_t, pencil_eigen, scale, CCol, CMat};
use mepnl::problems::{gen_qep, gen_random, RandomScalings};
use mepnl::solvers::{
    augmented_newton, branch_view, project_2ep, rayleigh_gep, rayleigh_gep_all, resinv,
    BranchSelect, SolverConfig,
};
use mepnl::{c64, delta, residuals, Error, Quadruplet, TwoParProblem};

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

fn oracle(n: usize, m: usize, seed: u64) -> (TwoParProblem, Vec<Quadruplet>) {
    let p = gen_random(n, m, seed, RandomScalings::default()).unwrap();
    let qs = delta::solve(&p).unwrap();
    (p, qs)
}

/// `x` scaled so its largest entry is 1, plus entrywise noise below `amp`.
fn nearby(x: &CCol, amp: f64, seed: u64) -> CCol {
    let big = x
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    let noise = random_vec(x.nrows(), seed);
    let cap = noise.iter().map(|z| z.norm()).fold(0.0, f64::max);
    CCol::from_fn(x.nrows(), |i| x[i] / big + noise[i] * (amp / cap))
}

fn orthonormal(cols: &[CCol]) -> CMat {
    let n = cols[0].nrows();
    let mut basis: Vec<CCol> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        for b in &basis {
            let h = mepnl::linalg::dot_h(b, &v);
            v -= scale(h, b);
        }
        basis.push(mepnl::linalg::normalized(&v));
    }
    Mat::from_fn(n, basis.len(), |i, j| basis[j][i])
}

#[test]
fn newton_started_at_a_solution_stops_at_once() {
    let (p, qs) = oracle(8, 3, 70);
    for q in qs.iter().take(4) {
        let mut view = branch_view(&p, BranchSelect::NearestMu(q.mu), q.lambda).unwrap();
        let (sol, trace) =
            augmented_newton(&mut view, &SolverConfig::default(), q.lambda, &q.x).unwrap();
        assert!(trace.converged());
        assert!(trace.iterations.len() <= 2);
        assert!(sol.residuals.res_a <= 1e-10);
    }
}

#[test]
fn newton_on_qep_matches_the_companion_pencil() {
    let n = 5;
    let a = random_a(n, 71);
    let p = gen_qep(
        dense(a[0].clone()),
        dense(a[1].clone()),
        dense(a[2].clone()),
    )
    .unwrap();
    // [[-A1, 0], [0, A3]] z = lambda [[A2, A3], [A3, 0]] z
    let lhs = Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => -a[0][(i, j)],
        (false, false) => a[2][(i - n, j - n)],
        _ => re(0.0),
    });
    let rhs = Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => a[1][(i, j)],
        (true, false) => a[2][(i, j - n)],
        (false, true) => a[2][(i - n, j)],
        _ => re(0.0),
    });
    let companion: Vec<(c64, CCol)> = pencil_eigen(&lhs, &rhs, false)
        .unwrap()
        .into_iter()
        .filter_map(|e| e.value.map(|v| (v, CCol::from_fn(n, |i| e.right[i]))))
        .collect();
    assert_eq!(companion.len(), 2 * n);
    for (target, z) in companion.iter().take(3) {
        let lambda0 = target + c64::new(1e-3, -1e-3);
        let mut view = branch_view(&p, BranchSelect::Index(0), lambda0).unwrap();
        let (sol, trace) = augmented_newton(
            &mut view,
            &SolverConfig::default(),
            lambda0,
            &nearby(z, 1e-3, 72),
        )
        .unwrap();
        assert!(trace.converged());
        let l = sol.lambda;
        let r: CCol =
            &a[0] * &sol.x + scale(l, &(&a[1] * &sol.x)) + scale(l * l, &(&a[2] * &sol.x));
        assert!(r.norm_l2() <= 1e-9 * sol.x.norm_l2());
        let nearest = companion
            .iter()
            .map(|(c, _)| (c - l).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(
            nearest <= 1e-8 * (1.0 + l.norm()),
            "{l} off the companion spectrum by {nearest:e}"
        );
    }
}

#[test]
fn newton_from_a_perturbed_start_converges_quadratically() {
    let (p, qs) = oracle(20, 4, 73);
    let target = qs
        .iter()
        .min_by(|a, b| {
            (a.lambda - c64::new(0.15, 0.1))
                .norm()
                .total_cmp(&(b.lambda - c64::new(0.15, 0.1)).norm())
        })
        .unwrap();
    let lambda0 = target.lambda + c64::new(0.01, -0.01);
    let mut view = branch_view(&p, BranchSelect::NearestMu(target.mu), lambda0).unwrap();
    let (sol, trace) = augmented_newton(
        &mut view,
        &SolverConfig {
            tol: 1e-14,
            ..SolverConfig::default()
        },
        lambda0,
        &nearby(&target.x, 0.05, 74),
    )
    .unwrap();
    assert!(trace.converged());
    assert!(trace.iterations.len() - 1 <= 15);
    let nearest = qs
        .iter()
        .min_by(|a, b| {
            (a.lambda - sol.lambda)
                .norm()
                .total_cmp(&(b.lambda - sol.lambda).norm())
        })
        .unwrap();
    assert_eq!(nearest.lambda, target.lambda);
    assert!((sol.lambda - target.lambda).norm() <= 1e-10 * (1.0 + target.lambda.norm()));
    let res = residuals(&p, &sol).unwrap();
    assert!(res.res_a <= 1e-14 && res.res_b <= 1e-10);
    assert!(trace.b_violations(1e-10).is_empty());
    let digits: Vec<f64> = trace.iterations.iter().map(|r| -r.res_a.log10()).collect();
    let gains: Vec<f64> = digits.windows(2).map(|w| w[1] - w[0]).collect();
    // The last step is in the quadratic regime: it at least gains half again
    // as many digits as the one before.
    let [.., prev, last] = gains[..] else {
        panic!("too few steps: {gains:?}")
    };
    assert!(last >= 1.5 * prev, "gains {gains:?}");
}

#[test]
fn newton_trace_satisfies_the_update_identity() {
    let (p, qs) = oracle(10, 3, 75);
    let target = &qs[2];
    let lambda0 = target.lambda + c64::new(0.02, 0.0);
    let mut view = branch_view(&p, BranchSelect::NearestMu(target.mu), lambda0).unwrap();
    let (_, trace) = augmented_newton(
        &mut view,
        &SolverConfig::default(),
        lambda0,
        &nearby(&target.x, 0.02, 76),
    )
    .unwrap();
    assert!(trace.converged());
    for w in trace.iterations.windows(2) {
        let den = w[0].newton_denominator.unwrap();
        assert_eq!(w[1].lambda, w[0].lambda - den.inv());
    }
    assert!(trace
        .iterations
        .last()
        .unwrap()
        .newton_denominator
        .is_none());
}

#[test]
fn newton_reports_non_convergence() {
    let (p, qs) = oracle(10, 3, 77);
    let mut view = branch_view(&p, BranchSelect::Index(0), re(0.0)).unwrap();
    let config = SolverConfig {
        maxit: 1,
        ..SolverConfig::default()
    };
    let (_, trace) = augmented_newton(&mut view, &config, re(0.0), &random_vec(10, 78)).unwrap();
    assert!(!trace.converged());
    assert_eq!(trace.iterations.len(), 2);
    assert!(qs.len() == 30);
}

#[test]
fn solvers_are_deterministic() {
    let (p, qs) = oracle(12, 3, 79);
    let target = &qs[1];
    let run = || {
        let lambda0 = target.lambda + c64::new(0.01, 0.01);
        let mut view = branch_view(&p, BranchSelect::NearestMu(target.mu), lambda0).unwrap();
        augmented_newton(
            &mut view,
            &SolverConfig::default(),
            lambda0,
            &nearby(&target.x, 0.02, 80),
        )
        .unwrap()
    };
    let ((a, ta), (b, tb)) = (run(), run());
    assert_eq!(a.lambda, b.lambda);
    assert_eq!(a.x, b.x);
    let lam =
        |t: &mepnl::solvers::SolveTrace| t.iterations.iter().map(|r| r.lambda).collect::<Vec<_>>();
    assert_eq!(lam(&ta), lam(&tb));
}

#[test]
fn rayleigh_at_an_eigenvector_recovers_the_pair() {
    let (p, qs) = oracle(6, 3, 81);
    for q in qs.iter().take(5) {
        let cands = rayleigh_gep_all(&p, &q.x, &q.x).unwrap();
        let hit = cands
            .iter()
            .min_by(|a, b| {
                (a.lambda - q.lambda)
                    .norm()
                    .total_cmp(&(b.lambda - q.lambda).norm())
            })
            .unwrap();
        assert!((hit.lambda - q.lambda).norm() <= 1e-10 * (1.0 + q.lambda.norm()));
        assert!((hit.mu - q.mu).norm() <= 1e-10 * (1.0 + q.mu.norm()));
        let sel = rayleigh_gep(&p, &q.x, &q.x, q.lambda + 1e-6).unwrap();
        assert_eq!(sel.lambda, hit.lambda);
    }
}

#[test]
fn rayleigh_with_scalar_b_is_a_single_closed_form() {
    let a = random_a(4, 82);
    let (b1, b2, b3) = (0.7, -1.3, 2.1);
    let p = TwoParProblem::with_default_c(
        [
            dense(a[0].clone()),
            dense(a[1].clone()),
            dense(a[2].clone()),
        ],
        [scalar(b1), scalar(b2), scalar(b3)],
    )
    .unwrap();
    let (v, w) = (random_vec(4, 83), random_vec(4, 84));
    let s: Vec<c64> = (0..3).map(|j| dot_t(&w, &(&a[j] * &v))).collect();
    let lambda = -(s[0] * b3 - s[2] * b1) / (s[1] * b3 - s[2] * b2);
    let cands = rayleigh_gep_all(&p, &v, &w).unwrap();
    assert_eq!(cands.len(), 1);
    assert!((cands[0].lambda - lambda).norm() <= 1e-12 * (1.0 + lambda.norm()));
    let mu = -(s[0] + lambda * s[1]) / s[2];
    assert!((cands[0].mu - mu).norm() <= 1e-12 * (1.0 + mu.norm()));
}

#[test]
fn rayleigh_candidates_satisfy_both_projected_equations() {
    let p = gen_random(7, 4, 85, RandomScalings::default()).unwrap();
    let (v, w) = (random_vec(7, 86), random_vec(7, 87));
    let cands = rayleigh_gep_all(&p, &v, &w).unwrap();
    assert_eq!(cands.len(), 4);
    for c in cands {
        let av = p.apply_a(c.lambda, c.mu, &v);
        let scale_a = w.norm_l2() * v.norm_l2() * p.a_scale(c.lambda, c.mu);
        assert!(dot_t(&w, &av).norm() <= 1e-10 * scale_a);
        let r: CCol = &p.b_at(c.lambda, c.mu) * &c.y;
        assert!(r.norm_l2() <= 1e-10 * p.b_scale(c.lambda, c.mu) * c.y.norm_l2());
    }
}

#[test]
fn rayleigh_rejects_a_degenerate_projection() {
    let a = random_a(3, 88);
    let p = TwoParProblem::with_default_c(
        [dense(a[0].clone()), dense(a[1].clone()), dense(zeros(3))],
        [eye(2), eye(2), eye(2)],
    )
    .unwrap();
    let v = random_vec(3, 89);
    assert!(matches!(
        rayleigh_gep_all(&p, &v, &v),
        Err(Error::DegenerateProjection { .. })
    ));
}

#[test]
fn resinv_from_the_exact_vector_converges_immediately() {
    let (p, qs) = oracle(10, 3, 90);
    let q = &qs[3];
    let sigma = q.lambda + c64::new(0.05, 0.05);
    let mut view = branch_view(&p, BranchSelect::NearestMu(q.mu), sigma).unwrap();
    let config = SolverConfig {
        sigma: Some(sigma),
        ..SolverConfig::default()
    };
    let (sol, trace) = resinv(&mut view, &config, &q.x).unwrap();
    assert!(trace.converged());
    assert!(trace.iterations.len() - 1 <= 2);
    assert!((sol.lambda - q.lambda).norm() <= 1e-8);
}

#[test]
fn resinv_converges_linearly_with_one_factorization() {
    let (p, qs) = oracle(60, 6, 91);
    let target = qs
        .iter()
        .min_by(|a, b| {
            (a.lambda - c64::new(0.15, 0.1))
                .norm()
                .total_cmp(&(b.lambda - c64::new(0.15, 0.1)).norm())
        })
        .unwrap();
    let sigma = target.lambda + c64::new(0.2, 0.2);
    let mut view = branch_view(&p, BranchSelect::NearestMu(target.mu), sigma).unwrap();
    let config = SolverConfig {
        sigma: Some(sigma),
        maxit: 300,
        ..SolverConfig::default()
    };
    let x0 = CCol::from_fn(60, |_| re(1.0));
    let (sol, trace) = resinv(&mut view, &config, &x0).unwrap();
    assert!(trace.converged());
    assert!((sol.lambda - target.lambda).norm() <= 1e-8 * (1.0 + target.lambda.norm()));
    let res: Vec<f64> = trace.iterations.iter().map(|r| r.res_a).collect();
    assert!(res.len() >= 6, "{res:?}");
    let ratios: Vec<f64> = res.windows(2).map(|w| w[1] / w[0]).collect();
    // The ratios wobble around a fixed rate (a complex pair of error modes
    // competes); a quadratic tail would instead shrink them by decades.
    let tail = &ratios[ratios.len() - 5..];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(*r), h.max(*r)));
    assert!(hi < 1.0 && hi <= 10.0 * lo, "ratios {tail:?}");
    assert_eq!(view.factorizations(), 1);
    assert_eq!(view.cache_hits(), trace.iterations.len() - 1);
    assert!(trace.b_violations(1e-10).is_empty());
}

#[test]
fn resinv_far_shift_stops_without_converging() {
    let (p, _) = oracle(10, 3, 92);
    let sigma = re(1e6);
    let mut view = branch_view(&p, BranchSelect::Index(0), sigma).unwrap();
    let config = SolverConfig {
        sigma: Some(sigma),
        maxit: 20,
        ..SolverConfig::default()
    };
    let (_, trace) = resinv(&mut view, &config, &random_vec(10, 93)).unwrap();
    assert!(!trace.converged());
    assert_eq!(trace.iterations.len(), 21);
}

#[test]
fn identity_projection_changes_nothing() {
    let p = gen_random(5, 3, 94, RandomScalings::default()).unwrap();
    let pp = project_2ep(&p, &eye(5), &eye(5)).unwrap();
    for j in 0..3 {
        assert!((&pp.a(j).to_dense() - &p.a(j).to_dense()).norm_l2() <= 1e-15 * p.a(j).norm_fro());
        assert_eq!(pp.b(j), p.b(j));
    }
    assert_eq!(pp.c(), p.c());
}

#[test]
fn one_dimensional_projection_agrees_with_rayleigh() {
    let p = gen_random(6, 3, 95, RandomScalings::default()).unwrap();
    let (v, w) = (random_vec(6, 96), random_vec(6, 97));
    let pp = project_2ep(
        &p,
        &Mat::from_fn(6, 1, |i, _| v[i]),
        &Mat::from_fn(6, 1, |i, _| w[i]),
    )
    .unwrap();
    let mut from_delta: Vec<c64> = delta::solve(&pp)
        .unwrap()
        .iter()
        .map(|q| q.lambda)
        .collect();
    let mut from_rayleigh: Vec<c64> = rayleigh_gep_all(&p, &v, &w)
        .unwrap()
        .iter()
        .map(|c| c.lambda)
        .collect();
    assert_eq!(from_delta.len(), from_rayleigh.len());
    let key = |a: &c64, b: &c64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
    from_delta.sort_by(key);
    from_rayleigh.sort_by(key);
    for (a, b) in from_delta.iter().zip(&from_rayleigh) {
        assert!((a - b).norm() <= 1e-8 * (1.0 + b.norm()), "{a} vs {b}");
    }
}

#[test]
fn projection_onto_an_eigenvector_keeps_the_eigenvalue() {
    let (p, qs) = oracle(8, 3, 98);
    let q = &qs[0];
    let v = orthonormal(&[q.x.clone(), random_vec(8, 99), random_vec(8, 100)]);
    let w = orthonormal(&[random_vec(8, 101), random_vec(8, 102), random_vec(8, 103)]);
    let pp = project_2ep(&p, &v, &w).unwrap();
    let found = delta::solve(&pp)
        .unwrap()
        .iter()
        .map(|s| (s.lambda - q.lambda).norm() + (s.mu - q.mu).norm())
        .fold(f64::INFINITY, f64::min);
    assert!(
        found <= 1e-10 * (1.0 + q.lambda.norm() + q.mu.norm()),
        "{found:e}"
    );
}

#[test]
fn projection_checks_dimensions() {
    let p = gen_random(5, 2, 104, RandomScalings::default()).unwrap();
    assert!(matches!(
        project_2ep(&p, &eye(4), &eye(4)),
        Err(Error::DimensionMismatch(_))
    ));
}
