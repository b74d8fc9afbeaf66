use std::sync::OnceLock;

use ladderlab::functionals::{
    fermat_rational, AlgebraMode, FermatTriple, FunctionalKind, Functionals,
};
use ladderlab::ladder::{Ladder, LadderConfig, ReverseMethod};
use ladderlab::{Error, ONE_MINUS_GAMMA};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f() -> &'static Functionals {
    static F: OnceLock<Functionals> = OnceLock::new();
    F.get_or_init(|| Functionals::new().unwrap())
}

#[test]
fn f1_recovers_x() {
    for (x, tol) in [(0.5, 0.04), (1.0, 0.02), (2.0, 0.04)] {
        let v = f().f1_estimate(x, 1e4).unwrap();
        assert!((v - x).abs() <= tol, "x = {x}: {v}");
    }
}

#[test]
fn f1_with_increment_solve_is_exact_by_construction() {
    let ladder = Ladder::new(LadderConfig::with_t0(100.0)).unwrap();
    let tol = ladder.config().tol;
    let g = Functionals::with_ladder(ladder, ReverseMethod::IncrementSolve).unwrap();
    for x in [0.3, 1.0, 2.7] {
        let v = g.f1_estimate(x, 2e3).unwrap();
        assert!((v / x - 1.0).abs() <= 10.0 * tol, "x = {x}: {v}");
    }
}

#[test]
fn f1_ray_parameters() {
    // the ray xτ/(1−c) has slope x/(1−c) in (0, ∞), i.e. angle in (0, π/2)
    for x in [0.1, 1.0, 10.0] {
        let angle = (x / ONE_MINUS_GAMMA).atan();
        assert!(angle > 0.0 && angle < std::f64::consts::FRAC_PI_2);
        assert!((angle.tan() * ONE_MINUS_GAMMA - x).abs() < 1e-12 * x);
    }
}

#[test]
fn f1_limit_reports_trend() {
    let est = f().f1_limit(1.0, &[1e3, 1e4, 3e4]).unwrap();
    assert_eq!(est.raw.len(), 3);
    assert_eq!(est.corrected, est.raw);
    assert!(est.final_residual <= 0.05);
    let decreasing = est.residuals[0] > est.residuals[1] && est.residuals[1] > est.residuals[2];
    assert_eq!(
        est.converged,
        decreasing && est.final_residual <= est.tol_conv
    );
    let short = f().f1_limit(1.0, &[1e4]).unwrap();
    assert!(!short.converged);
}

#[test]
fn grids_are_validated() {
    assert!(matches!(f().f1_limit(1.0, &[]), Err(Error::Config { .. })));
    assert!(f().f1_limit(1.0, &[1e4, 1e3]).is_err());
    assert!(matches!(
        f().f1_limit(1.0, &[10.0, 1e4]),
        Err(Error::Admissibility { .. })
    ));
}

#[test]
fn algebra_checks() {
    let sum = f()
        .f1_algebra_check(&[1.0, 1.0], AlgebraMode::Sum, 1e4)
        .unwrap();
    assert!(sum.pass && sum.residual.abs() <= 0.05, "{sum:?}");
    let add = f()
        .f1_algebra_check(&[0.7, 1.3], AlgebraMode::Sum, 1e4)
        .unwrap();
    assert!(add.pass, "{add:?}");
    let prod = f()
        .f1_algebra_check(&[2.0, 3.0], AlgebraMode::Product, 1e4)
        .unwrap();
    assert!(prod.pass && prod.residual.abs() <= 0.05, "{prod:?}");
    let quo = f()
        .f1_algebra_check(&[2.0, 2.0], AlgebraMode::Quotient, 1e4)
        .unwrap();
    assert_eq!(quo.rhs, 1.0);
    assert!((quo.lhs - 1.0).abs() <= 0.02, "{quo:?}");
    assert!(f()
        .f1_algebra_check(&[1.0, 2.0, 3.0], AlgebraMode::Quotient, 1e4)
        .is_err());
    assert!(f().f1_algebra_check(&[1.0], AlgebraMode::Sum, 1e4).is_err());
}

#[test]
fn algebra_checks_on_random_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..10 {
        let xs = [rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0)];
        let mode = [
            AlgebraMode::Sum,
            AlgebraMode::Product,
            AlgebraMode::Quotient,
        ][i % 3];
        let r = f().f1_algebra_check(&xs, mode, 3e3).unwrap();
        assert!(r.pass, "{xs:?} {mode:?}: {r:?}");
    }
}

#[test]
fn f2_corrections() {
    let x = 1.3;
    for tau in [25.0, 30.0, 35.0] {
        let (raw, corrected) = f().f2_estimate(x, tau).unwrap();
        assert!((corrected - 1.0).abs() <= 0.02, "tau = {tau}: {corrected}");
        let predicted = ONE_MINUS_GAMMA.powf(1.0 / tau);
        assert!(
            (raw / x / predicted - 1.0).abs() <= 0.01,
            "tau = {tau}: {raw}"
        );
    }
    let est = f()
        .limit(FunctionalKind::F2, x, &[25.0, 30.0, 35.0])
        .unwrap();
    assert!(est
        .raw
        .windows(2)
        .all(|w| (w[1] - x).abs() < (w[0] - x).abs()));
    match f().f2_estimate(1.3, 80.0) {
        Err(Error::RangeCap { max_tau, .. }) => assert!(max_tau > 50.0 && max_tau < 53.0),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        f().f2_estimate(1.3, 20.0),
        Err(Error::Admissibility { .. })
    ));
}

#[test]
fn f3_corrections_and_ordering() {
    let (raw, corrected) = f().f3_estimate(2.0, 200.0).unwrap();
    let predicted = ONE_MINUS_GAMMA.ln() / 200f64.ln();
    assert!(((raw - 2.0) / predicted - 1.0).abs() <= 0.25, "{raw}");
    let (_, at300) = f().f3_estimate(2.0, 300.0).unwrap();
    assert!((at300 - 2.0).abs() <= 0.05);
    assert!((corrected - 2.0).abs() <= 0.05);
    let (_, lo) = f().f3_estimate(1.5, 120.0).unwrap();
    let (_, hi) = f().f3_estimate(2.5, 120.0).unwrap();
    assert!(hi - lo >= 0.7, "{lo} {hi}");
    assert!(matches!(
        f().f3_estimate(3.0, 120.0),
        Err(Error::RangeCap { .. })
    ));
}

#[test]
fn fermat_rationals_are_exact() {
    let r = |x, y, z, n| fermat_rational(FermatTriple::new(x, y, z, n).unwrap());
    assert_eq!(r(3, 4, 5, 2), 1.0);
    assert_eq!(r(1, 1, 1, 3), 2.0);
    assert_eq!(r(2, 3, 4, 3), 0.546875);
    assert_eq!(r(5, 12, 13, 2), 1.0);
}

#[test]
fn fermat_discriminator_variants() {
    let t = FermatTriple::new(1, 1, 1, 3).unwrap();
    let v1 = f().fermat_zeta_test(t, 1, &[1e4]).unwrap();
    assert!(v1.pass && v1.details["distance"] >= 0.9, "{v1:?}");
    let v2 = f().fermat_zeta_test(t, 2, &[1e3]).unwrap();
    assert!(
        v2.pass && (v2.details["estimate"] - 2.0).abs() < 0.1,
        "{v2:?}"
    );
    for v in [3, 4] {
        let r = f().fermat_zeta_test(t, v, &[300.0]).unwrap();
        assert!(r.pass && r.details["distance"] >= 0.9, "variant {v}: {r:?}");
    }
    let pythagoras = FermatTriple::new(3, 4, 5, 2).unwrap();
    let p = f().fermat_zeta_test(pythagoras, 1, &[1e4]).unwrap();
    assert!(p.pass && p.details["distance"] <= 0.03, "{p:?}");
    assert!(f().fermat_zeta_test(t, 5, &[1e4]).is_err());
    let big = FermatTriple::new(1, 1, 1, 3).unwrap();
    assert!(matches!(
        f().fermat_zeta_test(big, 4, &[2000.0]),
        Err(Error::RangeCap { .. })
    ));
}

#[test]
fn fermat_discriminator_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 10 {
        let t = FermatTriple::new(
            rng.gen_range(1..=6),
            rng.gen_range(1..=6),
            rng.gen_range(1..=6),
            rng.gen_range(1..=4),
        )
        .unwrap();
        let q = fermat_rational(t);
        if !(0.3..=3.0).contains(&q) {
            continue;
        }
        let r = f().fermat_zeta_test(t, 1, &[1e4]).unwrap();
        assert!(r.pass, "{t:?}: {r:?}");
        done += 1;
    }
}
