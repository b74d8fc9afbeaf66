//! The Riemann–Siegel phase θ(t) and the complex log-gamma it rests on.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::LN_2PI;

/// Below this height θ is taken from log-gamma directly.
pub(crate) const ASYMPTOTIC_FROM: f64 = 10.0;

const LN_PI: f64 = 1.144_729_885_849_400_174_14;

// B_{2k} / (2k (2k - 1)) for the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln Γ(z) for Re z > 0, continuous in z (not reduced to the principal
/// branch), so that Im ln Γ(1/4 + it/2) is a smooth function of t.
pub fn log_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 || w.re < 8.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * LN_2PI + series - shift
}

/// θ(t) from log-gamma; valid for every t ≥ 0.
pub(crate) fn theta_log_gamma(t: f64) -> f64 {
    log_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * LN_PI
}

/// θ(t) from its asymptotic expansion; accurate to ~1e-12 for t ≥ 10.
pub(crate) fn theta_asymptotic(t: f64) -> f64 {
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    let tail = inv
        * (1.0 / 48.0
            + inv2
                * (7.0 / 5760.0
                    + inv2
                        * (31.0 / 80_640.0
                            + inv2 * (127.0 / 430_080.0 + inv2 * (511.0 / 1_216_512.0)))));
    0.5 * t * ((t / (2.0 * PI)).ln() - 1.0) - PI / 8.0 + tail
}

/// θ(t) for t ≥ 0 without domain checks.
#[inline]
pub(crate) fn theta_unchecked(t: f64) -> f64 {
    if t >= ASYMPTOTIC_FROM {
        theta_asymptotic(t)
    } else {
        theta_log_gamma(t)
    }
}

/// θ'(t) to leading orders for t ≥ 10; used for step control.
#[inline]
pub(crate) fn theta_prime(t: f64) -> f64 {
    (0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t * t)).max(0.05)
}

// Gauss–Legendre nodes and weights on [-1, 1], 8 points.
pub(crate) const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
pub(crate) const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// ∫ₐᵇ θ(t) dt by composite 8-point Gauss–Legendre on pieces of length ≤ 1,
/// shortened to 1/8 below t = 10 because log Γ(1/4 + it/2) has a pole at
/// t = i/2.
pub(crate) fn theta_integral(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let per_unit = if a < ASYMPTOTIC_FROM { 8.0 } else { 1.0 };
    let pieces = (((b - a) * per_unit).ceil() as usize).max(1);
    let h = (b - a) / pieces as f64;
    let mut total = 0.0;
    for i in 0..pieces {
        let lo = a + h * i as f64;
        let mid = lo + 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
            acc += w * theta_unchecked(mid + 0.5 * h * x);
        }
        total += 0.5 * h * acc;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_matches_real_values() {
        // Γ(1/2) = √π, Γ(5) = 24
        let half = log_gamma(Complex64::new(0.5, 0.0));
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
        let five = log_gamma(Complex64::new(5.0, 0.0));
        assert!((five.re - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn branches_agree_at_switch() {
        for t in [10.0, 12.0, 20.0, 50.0] {
            let d = theta_log_gamma(t) - theta_asymptotic(t);
            assert!(d.abs() < 1e-11, "t = {t}: {d}");
        }
    }

    #[test]
    fn theta_is_continuous_through_small_t() {
        let mut prev = theta_unchecked(0.0);
        assert!(prev.abs() < 1e-15);
        for i in 1..2000 {
            let t = i as f64 * 0.01;
            let cur = theta_unchecked(t);
            assert!((cur - prev).abs() < 0.05, "jump at {t}");
            prev = cur;
        }
    }

    #[test]
    fn theta_integral_of_smooth_stretch() {
        // compare against a fine trapezoid rule
        let (a, b) = (100.0, 103.5);
        let n = 200_000;
        let h = (b - a) / n as f64;
        let mut trap = 0.5 * (theta_unchecked(a) + theta_unchecked(b));
        for i in 1..n {
            trap += theta_unchecked(a + h * i as f64);
        }
        trap *= h;
        assert!((theta_integral(a, b) - trap).abs() < 1e-7);
    }
}
