mod quadratic_companion {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/quadratic_companion.rs"
    ));
}

#[test]
fn quadratic_companion_runs() {
    quadratic_companion::run_example().expect("quadratic_companion example should run");
}

mod sqrt_branches {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/sqrt_branches.rs"
    ));
}

#[test]
fn sqrt_branches_runs() {
    sqrt_branches::run_example().expect("sqrt_branches example should run");
}

mod random_newton {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/random_newton.rs"
    ));
}

#[test]
fn random_newton_runs() {
    random_newton::run_example().expect("random_newton example should run");
}

mod residual_inverse_iteration {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/residual_inverse_iteration.rs"
    ));
}

#[test]
fn residual_inverse_iteration_runs() {
    residual_inverse_iteration::run_example()
        .expect("residual_inverse_iteration example should run");
}

mod conditioning {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/conditioning.rs"
    ));
}

#[test]
fn conditioning_runs() {
    conditioning::run_example().expect("conditioning example should run");
}

mod helmholtz_domain_decomposition {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/helmholtz_domain_decomposition.rs"
    ));
}

#[test]
fn helmholtz_domain_decomposition_runs() {
    helmholtz_domain_decomposition::run_example()
        .expect("helmholtz_domain_decomposition example should run");
}

mod projection {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/projection.rs"
    ));
}

#[test]
fn projection_runs() {
    projection::run_example().expect("projection example should run");
}

mod delta_oracle {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/delta_oracle.rs"
    ));
}

#[test]
fn delta_oracle_runs() {
    delta_oracle::run_example().expect("delta_oracle example should run");
}

mod matrix_market_roundtrip {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/matrix_market_roundtrip.rs"
    ));
}

#[test]
fn matrix_market_roundtrip_runs() {
    matrix_market_roundtrip::run_example().expect("matrix_market_roundtrip example should run");
}
