use std::sync::OnceLock;

use ladderlab::ladder::{Ladder, LadderConfig};
use ladderlab::ortho::{
    gram_matrix, gram_matrix_with, legendre, GenerationSpec, Generator, IdentityLadder,
};

const T: f64 = 1.0e4;

fn ladder() -> &'static Ladder {
    static L: OnceLock<Ladder> = OnceLock::new();
    L.get_or_init(|| Ladder::new(LadderConfig::default()).unwrap())
}

fn grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn affine_map_hits_the_window() {
    let g = Generator::new(ladder(), T, &[1, 2]).unwrap();
    for p in [1, 2] {
        let lo = g.affine_to_iterated(-1.0, p).unwrap();
        let hi = g.affine_to_iterated(1.0, p).unwrap();
        let mid = g.affine_to_iterated(0.0, p).unwrap();
        assert!(lo > T && hi > lo);
        assert!((mid - 0.5 * (lo + hi)).abs() <= 1e-9 * hi);
    }
    assert!(g.affine_to_iterated(0.0, 3).is_err());
}

#[test]
fn automorphisms_fix_the_ends_and_increase() {
    let g = Generator::new(ladder(), T, &[1, 2]).unwrap();
    let tol = 10.0 * ladder().config().tol * T;
    for p in [1, 2] {
        assert!((g.u_p(-1.0, p).unwrap() + 1.0).abs() <= tol);
        assert!((g.u_p(1.0, p).unwrap() - 1.0).abs() <= tol);
        let values: Vec<f64> = grid(50).iter().map(|&t| g.u_p(t, p).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }
    let mid = g.u_p(0.0, 1).unwrap();
    assert!(mid > -1.0 && mid < 1.0);
}

#[test]
fn intermediate_maps_stay_in_their_windows() {
    let g = Generator::new(ladder(), T, &[2]).unwrap();
    for r in 0..2 {
        let mut prev = f64::NEG_INFINITY;
        for t in grid(50) {
            let v = g.v_p_r(t, 2, r).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }
    // one more forward step from r = p − 1 lands in [T, T+2]
    let v = g.v_p_r(0.3, 2, 1).unwrap();
    let w = ladder().phi1(v).unwrap();
    assert!((T..=T + 2.0).contains(&w));
    assert!(g.v_p_r(0.0, 2, 2).is_err());
}

#[test]
fn members_are_finite_and_not_odd() {
    let g = Generator::new(ladder(), T, &[1]).unwrap();
    for n in 0..=5 {
        for t in grid(100) {
            assert!(g.generated_member(n, &[1], t).unwrap().is_finite());
        }
    }
    let (u, w) = g.argument_and_weight(0.4, &[1]).unwrap();
    let m0 = g.generated_member(0, &[1], 0.4).unwrap();
    assert_eq!(m0, w.sqrt());
    assert_eq!(
        g.generated_member(3, &[1], 0.4).unwrap(),
        legendre(3, u) * w.sqrt()
    );
    let a = g.generated_member(1, &[1], 0.5).unwrap();
    let b = g.generated_member(1, &[1], -0.5).unwrap();
    assert!((a + b).abs() > 1e-6);
}

#[test]
fn identity_double_gives_classical_legendre() {
    let spec = GenerationSpec::new(T, vec![1], 5);
    let r = gram_matrix_with(&IdentityLadder, &spec).unwrap();
    for n in 0..=5 {
        assert!((r.matrix[n][n] - 2.0 / (2 * n + 1) as f64).abs() <= 1e-13);
    }
    assert!(r.max_offdiag_rel <= 1e-13);
    assert!((r.diag_scale - 1.0).abs() <= 1e-13);
}

#[test]
fn generated_system_is_orthogonal() {
    let r = gram_matrix(&GenerationSpec::new(T, vec![1], 4)).unwrap();
    assert!(r.max_offdiag_rel <= 1e-3, "{r:?}");
    assert!(r.diag_spread <= 0.01, "{r:?}");
    assert!((r.diag_scale / r.expected_scale - 1.0).abs() <= 1e-3);
    assert!(r.max_asymmetry <= 1e-12);
}

#[test]
fn compounded_generations_degrade_gracefully() {
    for p_list in [vec![1, 1], vec![2, 1, 1]] {
        let r = gram_matrix(&GenerationSpec::new(T, p_list.clone(), 4)).unwrap();
        assert!(r.max_offdiag_rel <= 1e-2, "{p_list:?}: {r:?}");
    }
}

#[test]
fn spec_validation() {
    assert!(GenerationSpec::new(T, vec![], 4).validate().is_err());
    assert!(GenerationSpec::new(T, vec![1, 1, 1, 1], 4)
        .validate()
        .is_err());
    assert!(GenerationSpec::new(T, vec![9], 4).validate().is_err());
    assert!(GenerationSpec::new(50.0, vec![1], 4).validate().is_err());
}
