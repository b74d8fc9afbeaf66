mod common;

use common::{oracle_f64, oracles};
use ladderlab::quadrature::{hl_integral, integrate, s1_moment, HlIntegrator, HL_TOL};
use ladderlab::zeta::build_phase_track;
use ladderlab::{EULER_GAMMA, LN_2PI};
use proptest::prelude::*;

fn ingham(t: f64) -> f64 {
    t * (t.ln() - LN_2PI) + (2.0 * EULER_GAMMA - 1.0) * t
}

#[test]
fn closed_forms() {
    assert_eq!(integrate(|_| 1.0, 0.0, 10.0, 1e-12).unwrap().value, 10.0);
    let r = integrate(|t| 1.0 / t, 1.0, 100.0, 1e-9).unwrap();
    assert!((r.value - 100f64.ln()).abs() <= 1e-9);
}

#[test]
fn hl_against_brute_force_oracle() {
    let o = oracles();
    let engine = HlIntegrator::new(HL_TOL);
    let low = oracle_f64(&o, &["hl_integral_low", "value"]);
    let got = engine.j(300.0).unwrap().value;
    assert!(
        (got - low).abs() <= 1e-8 * low,
        "J(300) = {got}, oracle {low}"
    );
    for key in ["1000", "10000", "20000"] {
        let t: f64 = key.parse().unwrap();
        let expected = oracle_f64(&o, &["hl_integral", key]);
        let got = engine.j(t).unwrap().value;
        assert!(
            (got - expected).abs() <= 1e-6 * expected,
            "J({t}) = {got}, oracle {expected}"
        );
    }
}

#[test]
fn hl_mean_value_and_growth() {
    let j1 = hl_integral(0.0, 1.0e4, HL_TOL).unwrap();
    let j2 = hl_integral(0.0, 2.0e4, HL_TOL).unwrap();
    let step = hl_integral(1.0e4, 2.0e4, HL_TOL).unwrap();
    assert!((j2.value - j1.value - step.value).abs() <= 1e-9 * j2.value);
    assert!(step.value > 1.0e4 * 1.0e4f64.ln() * 0.9);
    let mean = step.value / 1.0e4;
    assert!((mean / 1.0e4f64.ln() - 1.0).abs() <= 0.1, "mean {mean}");
    let residual = j1.value - ingham(1.0e4);
    assert!(
        residual.abs() <= 5.0 * 1.0e4f64.sqrt(),
        "residual {residual}"
    );
    assert_eq!(hl_integral(1.0e3, 1.0e3, HL_TOL).unwrap().value, 0.0);
}

#[test]
fn moment_properties() {
    let track = build_phase_track(10.0, 2.0e3, 1e-8).unwrap();
    assert_eq!(s1_moment(&track, 500.0, 500.0, 1, 1e-6).unwrap().value, 0.0);
    let m1 = s1_moment(&track, 1000.0, 1500.0, 1, 1e-8).unwrap();
    let m2 = s1_moment(&track, 1000.0, 1500.0, 2, 1e-8).unwrap();
    assert!(m1.value > 0.0 && m1.converged);
    let max_abs = track
        .s1_values()
        .iter()
        .filter(|_| true)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if max_abs <= 1.0 {
        assert!(m2.value < m1.value);
    }
    assert!(s1_moment(&track, 5.0, 100.0, 1, 1e-6).is_err());
    assert!(s1_moment(&track, 100.0, 2100.0, 1, 1e-6).is_err());
}

#[test]
fn moment_density_is_stable_under_doubling() {
    let track = build_phase_track(10.0, 2.5e4, 1e-7).unwrap();
    let per_length = |t: f64| {
        let h = t.powf(0.6);
        s1_moment(&track, t, t + h, 1, 1e-6).unwrap().value / h
    };
    let a = per_length(1.0e4);
    let b = per_length(2.0e4);
    assert!(a > 0.0 && b > 0.0);
    assert!((b / a - 1.0).abs() <= 0.25, "{a} vs {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hl_is_additive(a in 0.0f64..3000.0, f1 in 0.0f64..1.0, f2 in 0.0f64..1.0) {
        let b = a + 500.0 * f1;
        let c = b + 500.0 * f2;
        let ab = hl_integral(a, b, HL_TOL).unwrap().value;
        let bc = hl_integral(b, c, HL_TOL).unwrap().value;
        let ac = hl_integral(a, c, HL_TOL).unwrap().value;
        prop_assert!((ab + bc - ac).abs() <= 2.0 * HL_TOL * ac.max(1.0));
    }

    #[test]
    fn integrate_is_additive(a in -5.0f64..5.0, w1 in 0.0f64..4.0, w2 in 0.0f64..4.0) {
        let f = |t: f64| (3.0 * t).sin() + t * t;
        let tol = 1e-10;
        let b = a + w1;
        let c = b + w2;
        let ab = integrate(f, a, b, tol).unwrap().value;
        let bc = integrate(f, b, c, tol).unwrap().value;
        let ac = integrate(f, a, c, tol).unwrap().value;
        prop_assert!((ab + bc - ac).abs() <= 2.0 * tol * ac.abs().max(1.0));
    }
}
