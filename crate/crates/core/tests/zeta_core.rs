mod common;

use common::{hardy_points, oracle_f64, oracles};
use ladderlab::zeta::{
    build_phase_track, euler_maclaurin_z, hardy_z, riemann_siegel_z, s1_head, s_of_t, theta,
    zeta_mod_sq,
};
use ladderlab::Error;

#[test]
fn theta_against_oracle() {
    let o = oracles();
    let table = o["theta"].as_object().unwrap();
    for (key, value) in table {
        let t: f64 = key.parse().unwrap();
        let expected = value.as_f64().unwrap();
        let got = theta(t).unwrap();
        assert!(
            (got - expected).abs() <= 1e-10,
            "theta({t}) = {got}, oracle {expected}"
        );
    }
    assert!(matches!(theta(0.99), Err(Error::Domain { .. })));
}

#[test]
fn hardy_z_against_oracle_points() {
    let mut worst: f64 = 0.0;
    for (t, z) in hardy_points() {
        worst = worst.max((hardy_z(t).unwrap() - z).abs());
    }
    assert!(worst <= 1e-8, "worst deviation {worst}");
}

#[test]
fn low_heights_against_oracle() {
    let o = oracles();
    for (key, value) in o["z_low"].as_object().unwrap() {
        let t: f64 = key.parse().unwrap();
        let got = hardy_z(t).unwrap();
        let expected = value.as_f64().unwrap();
        let tol = if t < ladderlab::zeta::LOW_BRANCH_BELOW {
            1e-10
        } else {
            1e-8
        };
        assert!(
            (got - expected).abs() <= tol,
            "Z({t}) = {got}, oracle {expected}"
        );
    }
}

#[test]
fn first_zero_and_zeta_half() {
    let o = oracles();
    let gamma = oracle_f64(&o, &["first_zero"]);
    assert!(hardy_z(14.134_725_141_7).unwrap().abs() < 1e-6);
    assert!(zeta_mod_sq(gamma).unwrap() < 1e-12);
    let half = oracle_f64(&o, &["zeta_half"]);
    assert!((hardy_z(0.0).unwrap() - half).abs() < 1e-12);
    assert!((zeta_mod_sq(0.0).unwrap() - half * half).abs() < 1e-12);
    assert!(hardy_z(-0.5).is_err());
}

#[test]
fn branches_agree_on_overlap() {
    let mut worst: f64 = 0.0;
    for i in 0..=800 {
        let t = 10.0 + 0.05 * i as f64;
        let d = (riemann_siegel_z(t).unwrap() - euler_maclaurin_z(t).unwrap()).abs();
        worst = worst.max(d);
    }
    assert!(worst <= 1e-6, "worst {worst}");
}

#[test]
fn zero_counts_from_track() {
    let o = oracles();
    let track = build_phase_track(10.0, 1.0e4, 1e-6).unwrap();
    for (key, value) in o["zero_counts"].as_object().unwrap() {
        let t: f64 = key.parse().unwrap();
        let n = theta(t).unwrap() / std::f64::consts::PI + 1.0 + s_of_t(&track, t).unwrap();
        let expected = value.as_u64().unwrap() as f64;
        assert!(
            (n - expected).abs() < 1e-6,
            "N({t}) = {n}, oracle {expected}"
        );
    }
    for (i, &g) in track.grid().iter().enumerate() {
        let n = theta(g).unwrap() / std::f64::consts::PI + 1.0 + track.s_values()[i];
        assert!((n - n.round()).abs() < 1e-6);
        assert_eq!(n.round() as u64, track.zero_counts()[i]);
    }
    assert!(track.zero_counts().windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn s_has_small_mean() {
    let track = build_phase_track(1.0e3, 1.0e4, 1e-6).unwrap();
    let s1_a = ladderlab::zeta::s1_of_t(&track, 1.0e3).unwrap();
    let s1_b = ladderlab::zeta::s1_of_t(&track, 1.0e4).unwrap();
    let mean = (s1_b - s1_a) / 9.0e3;
    assert!(mean.abs() <= 0.05, "mean S = {mean}");
}

#[test]
fn s1_head_against_oracle() {
    let o = oracles();
    let expected = oracle_f64(&o, &["s1_at_10"]);
    assert!((s1_head(10.0).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn grid_count_does_not_grow_with_tol() {
    let fine = build_phase_track(100.0, 400.0, 1e-9).unwrap();
    let coarse = build_phase_track(100.0, 400.0, 2e-9).unwrap();
    assert!(coarse.grid().len() <= fine.grid().len());
    assert!(coarse.evals() <= fine.evals());
}
