//! The ζ-functionals F₁, F₂, F₃ and the Fermat-rational discriminators built
//! on them.
//!
//! Each functional feeds one increment integral
//! I(T) = ∫_T^{T¹} |ζ(1/2+it)|² dt, T¹ the reverse ladder step of T, with a
//! parametrised left end:
//!
//! | kind | T          | estimate            | limit |
//! |------|------------|---------------------|-------|
//! | F1   | xτ/(1−c)   | I/τ                 | x     |
//! | F2   | x^τ        | I^{1/τ}             | x     |
//! | F3   | τ^x        | ln I / ln τ         | x     |
//!
//! I = (1−c)T + O(T^a), so F2 and F3 carry the slowly vanishing factors
//! (1−c)^{1/τ} and ln(1−c)/ln τ. The corrected series divide/subtract them;
//! corrected F2 therefore tends to 1 and corrected F3 to x.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::ladder::{Ladder, LadderConfig, ReverseMethod};
use crate::report::{CheckId, TheoremReport};
use crate::{Error, Result, ONE_MINUS_GAMMA};

/// Default T₀ of the functional ladder.
pub const FUNCTIONAL_T0: f64 = 100.0;

/// Default convergence tolerance.
pub const DEFAULT_TOL_CONV: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionalKind {
    F1,
    F2,
    F3,
}

impl std::str::FromStr for FunctionalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "F1" => Ok(FunctionalKind::F1),
            "F2" => Ok(FunctionalKind::F2),
            "F3" => Ok(FunctionalKind::F3),
            _ => Err(Error::config("kind", format!("unknown functional `{s}`"))),
        }
    }
}

impl std::fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FunctionalKind::F1 => "F1",
            FunctionalKind::F2 => "F2",
            FunctionalKind::F3 => "F3",
        })
    }
}

/// A τ-grid of estimates of one functional with a trend verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEstimate {
    pub kind: FunctionalKind,
    pub x: f64,
    pub tau_grid: Vec<f64>,
    pub raw: Vec<f64>,
    pub corrected: Vec<f64>,
    /// The value the corrected series should approach.
    pub target: f64,
    /// |corrected − target| per grid point.
    pub residuals: Vec<f64>,
    pub tol_conv: f64,
    /// Final residual within `tol_conv` and residuals strictly decreasing
    /// over the last three grid points (grids shorter than three never
    /// converge).
    pub converged: bool,
    pub final_residual: f64,
}

/// Fermat rational (xⁿ + yⁿ)/zⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FermatTriple {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub n: u32,
}

impl FermatTriple {
    pub fn new(x: u64, y: u64, z: u64, n: u32) -> Result<Self> {
        if x == 0 || y == 0 || z == 0 || n == 0 {
            return Err(Error::config("triple", "x, y, z and n must be positive"));
        }
        Ok(Self { x, y, z, n })
    }

    /// (xⁿ + yⁿ, zⁿ) as big integers.
    pub fn exact(&self) -> BigRational {
        let p = |b: u64| num_traits::pow(BigInt::from(b), self.n as usize);
        BigRational::new(p(self.x) + p(self.y), p(self.z))
    }

    fn machine_parts(&self) -> Option<(u128, u128)> {
        let n = self.n;
        let num = (self.x as u128)
            .checked_pow(n)?
            .checked_add((self.y as u128).checked_pow(n)?)?;
        Some((num, (self.z as u128).checked_pow(n)?))
    }

    /// xⁿ + yⁿ and zⁿ as reals (for exponents of τ).
    fn parts_f64(&self) -> (f64, f64) {
        match self.machine_parts() {
            Some((a, b)) => (a as f64, b as f64),
            None => {
                let r = self.exact();
                (
                    r.numer().to_f64().unwrap_or(f64::INFINITY),
                    r.denom().to_f64().unwrap_or(f64::INFINITY),
                )
            }
        }
    }
}

/// (xⁿ + yⁿ)/zⁿ, exact integer arithmetic before the single division.
pub fn fermat_rational(triple: FermatTriple) -> f64 {
    match triple.machine_parts() {
        Some((a, b)) if a < (1u128 << 53) && b < (1u128 << 53) => a as f64 / b as f64,
        _ => triple
            .exact()
            .to_f64()
            .expect("a positive rational has a real value"),
    }
}

/// Largest left endpoint T whose reverse step stays under `cap`.
fn endpoint_limit(cap: f64) -> f64 {
    cap / (1.0 + 2.0 * ONE_MINUS_GAMMA / cap.ln())
}

/// Functional evaluator over one ladder.
#[derive(Debug, Clone)]
pub struct Functionals {
    ladder: Ladder,
    method: ReverseMethod,
    tol_conv: f64,
}

impl Functionals {
    /// Mainterm-invert steps on a ladder with T₀ = 100.
    pub fn new() -> Result<Self> {
        Self::with_ladder(
            Ladder::new(LadderConfig::with_t0(FUNCTIONAL_T0))?,
            ReverseMethod::MaintermInvert,
        )
    }

    pub fn with_ladder(ladder: Ladder, method: ReverseMethod) -> Result<Self> {
        Ok(Self {
            ladder,
            method,
            tol_conv: DEFAULT_TOL_CONV,
        })
    }

    pub fn with_tol_conv(mut self, tol_conv: f64) -> Result<Self> {
        if !(tol_conv > 0.0) {
            return Err(Error::config("tol_conv", "must be positive"));
        }
        self.tol_conv = tol_conv;
        Ok(self)
    }

    pub fn ladder(&self) -> &Ladder {
        &self.ladder
    }

    pub fn method(&self) -> ReverseMethod {
        self.method
    }

    pub fn tol_conv(&self) -> f64 {
        self.tol_conv
    }

    fn t0(&self) -> f64 {
        self.ladder.config().t0
    }

    fn cap(&self) -> f64 {
        endpoint_limit(self.ladder.config().t_cap)
    }

    /// τ₁(x) = max(((1−c)/x)², (1−c)T₀/x): the smallest τ putting xτ/(1−c)
    /// above T₀.
    pub fn tau1(&self, x: f64) -> f64 {
        let r = ONE_MINUS_GAMMA / x;
        (r * r).max(ONE_MINUS_GAMMA * self.t0() / x)
    }

    /// τ₂(x) = max(1/ln²x, ln²T₀).
    pub fn tau2(&self, x: f64) -> f64 {
        let lx = x.ln();
        let l0 = self.t0().ln();
        (1.0 / (lx * lx)).max(l0 * l0)
    }

    /// τ₃(x) = max(T₀^{1/x}, T₀).
    pub fn tau3(&self, x: f64) -> f64 {
        self.t0().powf(1.0 / x).max(self.t0())
    }

    pub fn threshold(&self, kind: FunctionalKind, x: f64) -> f64 {
        match kind {
            FunctionalKind::F1 => self.tau1(x),
            FunctionalKind::F2 => self.tau2(x),
            FunctionalKind::F3 => self.tau3(x),
        }
    }

    fn admit(&self, kind: FunctionalKind, x: f64, tau: f64) -> Result<()> {
        let lower = match kind {
            FunctionalKind::F2 => 1.0,
            _ => 0.0,
        };
        if !(x > lower) || !x.is_finite() {
            return Err(Error::domain(
                "functional argument",
                x,
                if lower > 0.0 { "x > 1" } else { "x > 0" },
            ));
        }
        let threshold = self.threshold(kind, x);
        if !(tau > threshold) || !tau.is_finite() {
            return Err(Error::Admissibility { x, tau, threshold });
        }
        Ok(())
    }

    /// ∫_T^{T¹}|ζ|² with T¹ the reverse step of T.
    pub fn increment(&self, t: f64) -> Result<f64> {
        let t1 = self.ladder.reverse_step(t, self.method)?;
        Ok(self.ladder.engine().integral(t, t1)?.value)
    }

    /// I at T = xτ/(1−c).
    fn f1_increment(&self, x: f64, tau: f64) -> Result<f64> {
        self.admit(FunctionalKind::F1, x, tau)?;
        let t = x * tau / ONE_MINUS_GAMMA;
        let cap = self.cap();
        if t > cap {
            return Err(Error::RangeCap {
                t,
                cap,
                max_tau: cap * ONE_MINUS_GAMMA / x,
            });
        }
        self.increment(t)
    }

    /// F₁(x, τ) = (1/τ)∫_{xτ/(1−c)}^{[xτ/(1−c)]¹}|ζ|².
    pub fn f1_estimate(&self, x: f64, tau: f64) -> Result<f64> {
        Ok(self.f1_increment(x, tau)? / tau)
    }

    /// (raw, corrected) F₂ at (x, τ).
    pub fn f2_estimate(&self, x: f64, tau: f64) -> Result<(f64, f64)> {
        self.admit(FunctionalKind::F2, x, tau)?;
        let ln_t = tau * x.ln();
        let cap = self.cap();
        if ln_t > cap.ln() {
            return Err(Error::RangeCap {
                t: ln_t.exp(),
                cap,
                max_tau: cap.ln() / x.ln(),
            });
        }
        let ln_i = self.increment(ln_t.exp())?.ln();
        let raw = (ln_i / tau).exp();
        let corrected = ((ln_i - ONE_MINUS_GAMMA.ln() - ln_t) / tau).exp();
        Ok((raw, corrected))
    }

    /// (raw, corrected) F₃ at (x, τ).
    pub fn f3_estimate(&self, x: f64, tau: f64) -> Result<(f64, f64)> {
        self.admit(FunctionalKind::F3, x, tau)?;
        let cap = self.cap();
        let ln_tau = tau.ln();
        if x * ln_tau > cap.ln() {
            return Err(Error::RangeCap {
                t: tau.powf(x),
                cap,
                max_tau: cap.powf(1.0 / x),
            });
        }
        let ln_i = self.increment(tau.powf(x))?.ln();
        Ok((ln_i / ln_tau, (ln_i - ONE_MINUS_GAMMA.ln()) / ln_tau))
    }

    fn estimate(&self, kind: FunctionalKind, x: f64, tau: f64) -> Result<(f64, f64)> {
        match kind {
            FunctionalKind::F1 => self.f1_estimate(x, tau).map(|v| (v, v)),
            FunctionalKind::F2 => self.f2_estimate(x, tau),
            FunctionalKind::F3 => self.f3_estimate(x, tau),
        }
    }

    /// Estimates over a strictly increasing τ-grid with a trend verdict.
    pub fn limit(&self, kind: FunctionalKind, x: f64, grid: &[f64]) -> Result<FunctionalEstimate> {
        if grid.is_empty() {
            return Err(Error::config("tau_grid", "must not be empty"));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config("tau_grid", "must be strictly increasing"));
        }
        for &tau in grid {
            self.admit(kind, x, tau)?;
        }
        let target = if kind == FunctionalKind::F2 { 1.0 } else { x };
        let mut raw = Vec::with_capacity(grid.len());
        let mut corrected = Vec::with_capacity(grid.len());
        for &tau in grid {
            let (r, c) = self.estimate(kind, x, tau)?;
            raw.push(r);
            corrected.push(c);
        }
        let residuals: Vec<f64> = corrected.iter().map(|c| (c - target).abs()).collect();
        let final_residual = *residuals.last().expect("non-empty grid");
        let n = residuals.len();
        let trend =
            n >= 3 && residuals[n - 3] > residuals[n - 2] && residuals[n - 2] > residuals[n - 1];
        Ok(FunctionalEstimate {
            kind,
            x,
            tau_grid: grid.to_vec(),
            raw,
            corrected,
            target,
            residuals,
            tol_conv: self.tol_conv,
            converged: trend && final_residual <= self.tol_conv,
            final_residual,
        })
    }

    pub fn f1_limit(&self, x: f64, grid: &[f64]) -> Result<FunctionalEstimate> {
        self.limit(FunctionalKind::F1, x, grid)
    }

    /// F₁ of the combined argument against the combination of per-xᵢ values
    /// at one τ. Sum and product envelopes add the per-term tolerances; the
    /// quotient compares F₁(x₁/x₂) with the ratio of increment integrals,
    /// in which τ cancels.
    pub fn f1_algebra_check(
        &self,
        xs: &[f64],
        mode: AlgebraMode,
        tau: f64,
    ) -> Result<TheoremReport> {
        if xs.is_empty() || xs.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::config("xs", "need positive finite values"));
        }
        let tol = self.tol_conv;
        let report = match mode {
            AlgebraMode::Sum => {
                if xs.len() < 2 {
                    return Err(Error::config("xs", "sum needs at least two values"));
                }
                let lhs = self.f1_estimate(xs.iter().sum(), tau)?;
                let mut rhs = 0.0;
                for &x in xs {
                    rhs += self.f1_estimate(x, tau)?;
                }
                TheoremReport::new(CheckId::F1Sum, lhs, rhs, tol * xs.len() as f64)
            }
            AlgebraMode::Product => {
                if xs.len() < 2 {
                    return Err(Error::config("xs", "product needs at least two values"));
                }
                let lhs = self.f1_estimate(xs.iter().product(), tau)?;
                let mut rhs = 1.0;
                let mut relative = 0.0;
                for &x in xs {
                    let v = self.f1_estimate(x, tau)?;
                    rhs *= v;
                    relative += tol / x;
                }
                // first-order propagation of the per-factor tolerances
                let envelope = tol + rhs.abs() * relative;
                TheoremReport::new(CheckId::F1Product, lhs, rhs, envelope)
            }
            AlgebraMode::Quotient => {
                if xs.len() != 2 {
                    return Err(Error::config("xs", "quotient takes exactly two values"));
                }
                let (a, b) = (xs[0], xs[1]);
                let ia = self.f1_increment(a, tau)?;
                let ib = self.f1_increment(b, tau)?;
                let q = a / b;
                // F₁(x₁/x₂) needs its own τ admissibility
                let lhs_tau = tau.max(self.tau1(q) * 1.0001);
                let lhs = self.f1_estimate(q, lhs_tau)?;
                TheoremReport::new(CheckId::F1Quotient, lhs, ia / ib, tol * (1.0 + q))
                    .with("tau_lhs", lhs_tau)
            }
        };
        Ok(report.with("tau", tau).with("n_terms", xs.len() as f64))
    }

    /// Estimate of a Fermat rational through discriminator `variant`
    /// (1, 2 on F₁; 3, 4 on F₃), evaluated over `tau_grid` and reported at
    /// its largest τ. The check compares the estimate's distance from 1 with
    /// |rational − 1|; the envelope is `tol_conv · max(1, rational)`.
    pub fn fermat_zeta_test(
        &self,
        triple: FermatTriple,
        variant: u8,
        tau_grid: &[f64],
    ) -> Result<TheoremReport> {
        if tau_grid.is_empty() {
            return Err(Error::config("tau_grid", "must not be empty"));
        }
        if tau_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config("tau_grid", "must be strictly increasing"));
        }
        let rational = fermat_rational(triple);
        let (a, b) = triple.parts_f64();
        let mut estimates = Vec::with_capacity(tau_grid.len());
        for &tau in tau_grid {
            let est = match variant {
                1 => self.f1_estimate(rational, tau)?,
                2 => {
                    let ia = self.f1_increment(a, tau)?;
                    let ib = self.f1_increment(b, tau)?;
                    ia / ib
                }
                3 => self.f3_estimate(rational, tau)?.1,
                4 => {
                    let ln_a = self.f3_log_increment(a, tau)?;
                    let ln_b = self.f3_log_increment(b, tau)?;
                    let shift = ONE_MINUS_GAMMA.ln();
                    (ln_a - shift) / (ln_b - shift)
                }
                _ => return Err(Error::config("variant", "must be 1, 2, 3 or 4")),
            };
            estimates.push(est);
        }
        let estimate = *estimates.last().expect("non-empty grid");
        let distance = (estimate - 1.0).abs();
        let expected = (rational - 1.0).abs();
        let mut report = TheoremReport::new(
            CheckId::Fermat,
            distance,
            expected,
            self.tol_conv * rational.max(1.0),
        )
        .with("variant", variant as f64)
        .with("rational", rational)
        .with("estimate", estimate)
        .with("distance", distance)
        .with("tau", *tau_grid.last().expect("non-empty grid"));
        for (tau, est) in tau_grid.iter().zip(&estimates) {
            report = report.with(&format!("estimate_at_tau_{tau}"), *est);
        }
        Ok(report)
    }

    /// ln ∫_{τ^e}^{[τ^e]¹}|ζ|² with the F₃ admissibility of exponent e.
    fn f3_log_increment(&self, e: f64, tau: f64) -> Result<f64> {
        self.admit(FunctionalKind::F3, e, tau)?;
        let cap = self.cap();
        if e * tau.ln() > cap.ln() {
            return Err(Error::RangeCap {
                t: tau.powf(e),
                cap,
                max_tau: cap.powf(1.0 / e),
            });
        }
        Ok(self.increment(tau.powf(e))?.ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraMode {
    Sum,
    Product,
    Quotient,
}

impl std::str::FromStr for AlgebraMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(AlgebraMode::Sum),
            "product" => Ok(AlgebraMode::Product),
            "quotient" => Ok(AlgebraMode::Quotient),
            _ => Err(Error::config("mode", format!("unknown algebra mode `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let r = |x, y, z, n| fermat_rational(FermatTriple::new(x, y, z, n).unwrap());
        assert_eq!(r(3, 4, 5, 2), 1.0);
        assert_eq!(r(1, 1, 1, 3), 2.0);
        assert_eq!(r(2, 3, 4, 3), 0.546875);
        assert!(FermatTriple::new(0, 1, 1, 1).is_err());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let t = FermatTriple::new(u64::MAX, u64::MAX, u64::MAX, 5).unwrap();
        assert!(t.machine_parts().is_none());
        assert_eq!(fermat_rational(t), 2.0);
        let t = FermatTriple::new(3, 4, 5, 100).unwrap();
        let expect = (0.6f64.powi(100)) + (0.8f64.powi(100));
        assert!((fermat_rational(t) / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thresholds() {
        let f = Functionals::new().unwrap();
        assert!((f.tau2(1.3) - 100f64.ln().powi(2)).abs() < 1e-12);
        assert_eq!(f.tau3(2.0), 100.0);
        assert!((f.tau3(0.5) - 1e4).abs() < 1e-8);
        assert!(matches!(
            f.f1_estimate(1.0, 10.0),
            Err(Error::Admissibility { .. })
        ));
        assert!(matches!(
            f.f2_estimate(1.3, 60.0),
            Err(Error::RangeCap { .. })
        ));
        assert!(f.f2_estimate(0.9, 60.0).is_err());
    }
}
