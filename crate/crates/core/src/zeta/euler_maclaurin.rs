//! Euler–Maclaurin summation for ζ(s), used on the low part of the critical
//! line where the Riemann–Siegel expansion is too coarse.

use num_complex::Complex64;

use super::theta::theta_unchecked;

// B_{2k} / (2k)!
const BERNOULLI_OVER_FACTORIAL: [f64; 14] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    77_683.0 / 14_101_100_039_391_805_440_000.0,
    -236_364_091.0 / 1_693_824_136_731_743_669_452_800_000.0,
    657_931.0 / 186_134_520_519_971_831_808_000_000.0,
    -3_392_780_147.0 / 37_893_265_687_455_865_519_472_640_000_000.0,
];

/// ζ(s) for Re s = 1/2 (or nearby), Im s ≥ 0 of moderate size.
pub fn zeta(s: Complex64) -> Complex64 {
    let height = s.im.abs();
    let n = 15 + (height / 3.0).ceil() as usize;
    let nf = n as f64;

    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * nf.ln()).exp();
    sum += n_pow * nf / (s - 1.0);
    sum += 0.5 * n_pow;

    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1}
    let inv_n = 1.0 / nf;
    let mut rising = s;
    let mut power = n_pow * inv_n;
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += rising * power * *b;
        let m = 2.0 * k as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power *= inv_n * inv_n;
    }
    sum
}

/// Z(t) = Re(e^{iθ(t)} ζ(1/2 + it)).
pub(crate) fn z(t: f64) -> f64 {
    let value = zeta(Complex64::new(0.5, t));
    let phase = Complex64::from_polar(1.0, theta_unchecked(t));
    (phase * value).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_real_values() {
        let z2 = zeta(Complex64::new(2.0, 0.0));
        assert!((z2.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        let half = zeta(Complex64::new(0.5, 0.0));
        assert!((half.re + 1.460_354_508_809_586_8).abs() < 1e-14);
    }

    #[test]
    fn rotated_value_is_real() {
        for t in [1.0, 7.0, 14.0, 25.0, 40.0] {
            let value = zeta(Complex64::new(0.5, t));
            let rotated = Complex64::from_polar(1.0, theta_unchecked(t)) * value;
            assert!(rotated.im.abs() < 1e-12, "t = {t}: {}", rotated.im);
        }
    }
}
