//! Riemann–Siegel evaluation of Z(t): the main sum plus remainder terms
//! C₀ … C₇ expanded around p = 1/2.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::theta::theta_unchecked;

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
mod coeffs {
    include!("rs_coeffs.rs");
}

const TABLE_LEN: usize = 1024;

struct MainSumTable {
    ln_n: Vec<f64>,
    inv_sqrt_n: Vec<f64>,
}

fn table() -> &'static MainSumTable {
    static TABLE: OnceLock<MainSumTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let ln_n = (0..=TABLE_LEN).map(|n| (n.max(1) as f64).ln()).collect();
        let inv_sqrt_n = (0..=TABLE_LEN)
            .map(|n| 1.0 / (n.max(1) as f64).sqrt())
            .collect();
        MainSumTable { ln_n, inv_sqrt_n }
    })
}

#[inline]
fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Number of remainder terms used by default.
pub const DEFAULT_TERMS: usize = 8;

/// Riemann–Siegel Z(t) with `terms` remainder corrections (1..=8).
/// Requires t ≥ 2π so that the main sum is nonempty.
pub(crate) fn z_with_terms(t: f64, terms: usize) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let n_terms = a.floor() as usize;
    let p = a - n_terms as f64;
    let theta = theta_unchecked(t);

    let mut main = 0.0;
    if n_terms <= TABLE_LEN {
        let tab = table();
        for n in 1..=n_terms {
            main += tab.inv_sqrt_n[n] * (theta - t * tab.ln_n[n]).cos();
        }
    } else {
        for n in 1..=n_terms {
            let nf = n as f64;
            main += (theta - t * nf.ln()).cos() / nf.sqrt();
        }
    }
    main *= 2.0;

    let x = p - 0.5;
    let w = (2.0 * PI / t).sqrt();
    let mut rem = 0.0;
    let mut wk = 1.0;
    for c in coeffs::REMAINDER_TERMS
        .iter()
        .take(terms.clamp(1, DEFAULT_TERMS))
    {
        rem += horner(c, x) * wk;
        wk *= w;
    }
    let sign = if n_terms % 2 == 1 { 1.0 } else { -1.0 };
    main + sign * w.sqrt() * rem
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c0_at_half_is_cos_three_pi_over_8() {
        let c0 = horner(coeffs::REMAINDER_TERMS[0], 0.0);
        assert!((c0 - (3.0 * PI / 8.0).cos()).abs() < 1e-15);
        assert!((c0 - 0.382_683_432_365_089_77).abs() < 1e-15);
    }

    #[test]
    fn remainder_tables_have_alternating_parity() {
        // C_k has the parity of k in x = p - 1/2
        for (k, c) in coeffs::REMAINDER_TERMS.iter().enumerate() {
            for (j, v) in c.iter().enumerate() {
                if (j + k) % 2 == 1 {
                    assert_eq!(*v, 0.0, "C{k} coefficient {j}");
                }
            }
        }
    }

    #[test]
    fn more_terms_help_at_moderate_height() {
        let t = 100.0;
        let z8 = z_with_terms(t, 8);
        let z5 = z_with_terms(t, 5);
        let z1 = z_with_terms(t, 1);
        assert!((z8 - z5).abs() < (z8 - z1).abs());
    }
}
