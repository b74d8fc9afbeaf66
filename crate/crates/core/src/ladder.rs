//! The operational Jacob's ladder.
//!
//! φ₁(T) is the root y of g(y) = J(T) − c₀ with
//! g(y) = y ln y + (c − ln 2π) y, the Hardy–Littlewood–Ingham main term.
//! Differentiating through g gives
//! φ₁'(t) = |ζ(1/2+it)|² / ω(t), ω(t) = ln φ₁(t) + 1 + c − ln 2π.
//!
//! Reverse iterations come in two flavours:
//!
//! * increment-solve: X > T with ∫_T^X |ζ|² = (1 − c) T;
//! * mainterm-invert: X with φ₁(X) = T, i.e. J(X) = g(T) + c₀.
//!
//! The two differ only by the Ingham error term of J.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::quadrature::{shared_engine, HlIntegrator, IntegralResult, HL_TOL};
use crate::roots::{solve_increasing, Tolerance};
use crate::{Error, Result, DEFAULT_T_CAP, EULER_GAMMA, LN_2PI, ONE_MINUS_GAMMA};

/// How a reverse iteration T ↦ T¹ is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReverseMethod {
    IncrementSolve,
    MaintermInvert,
}

impl fmt::Display for ReverseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReverseMethod::IncrementSolve => "increment-solve",
            ReverseMethod::MaintermInvert => "mainterm-invert",
        })
    }
}

impl FromStr for ReverseMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "increment-solve" => Ok(ReverseMethod::IncrementSolve),
            "mainterm-invert" => Ok(ReverseMethod::MaintermInvert),
            other => Err(Error::config(
                "method",
                format!("unknown reverse method `{other}`"),
            )),
        }
    }
}

/// Parameters of the operational ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    /// Lower cutoff T₀.
    pub t0: f64,
    /// Calibration constant subtracted from J before inverting g.
    pub c0: f64,
    pub k_max: usize,
    /// Relative root-finding tolerance.
    pub tol: f64,
    /// Error-term exponent used for reporting only.
    pub a: f64,
    pub delta: f64,
    /// Relative tolerance of the Hardy–Littlewood quadrature.
    pub quad_tol: f64,
    /// Upper limit for integration endpoints.
    pub t_cap: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self {
            t0: 1.0e3,
            c0: 0.0,
            k_max: 8,
            tol: 1e-10,
            a: 1.0 / 3.0,
            delta: 0.01,
            quad_tol: HL_TOL,
            t_cap: DEFAULT_T_CAP,
        }
    }
}

impl LadderConfig {
    pub fn with_t0(t0: f64) -> Self {
        Self {
            t0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0 >= 100.0) || !self.t0.is_finite() {
            return Err(Error::config("t0", "must be at least 100"));
        }
        if self.k_max < 1 {
            return Err(Error::config("k_max", "must be at least 1"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::config("tol", "must be positive"));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::config("quad_tol", "must be positive"));
        }
        if !self.c0.is_finite() {
            return Err(Error::config("c0", "must be finite"));
        }
        if !(self.t_cap > self.t0) {
            return Err(Error::config("t_cap", "must exceed t0"));
        }
        Ok(())
    }
}

/// g(y) = y ln y + (c − ln 2π) y.
#[inline]
pub fn main_term(y: f64) -> f64 {
    y * (y.ln() + EULER_GAMMA - LN_2PI)
}

/// g'(y) = ln y + 1 + c − ln 2π.
#[inline]
pub fn main_term_slope(y: f64) -> f64 {
    y.ln() + 1.0 + EULER_GAMMA - LN_2PI
}

/// The y where g is smallest; g is increasing to its right.
fn main_term_turning_point() -> f64 {
    (LN_2PI - 1.0 - EULER_GAMMA).exp()
}

/// Solve g(y) = v on the increasing branch. Newton from the right of the
/// root converges monotonically because g is convex.
pub fn main_term_inverse(v: f64) -> Result<f64> {
    let y_min = main_term_turning_point();
    if !(v > main_term(y_min)) || !v.is_finite() {
        return Err(Error::Bracket {
            lo: y_min,
            hi: f64::INFINITY,
            context: format!("inverting the main term at value {v}"),
        });
    }
    let mut y = v.max(10.0);
    while main_term(y) < v {
        y *= 2.0;
    }
    for _ in 0..100 {
        let step = (main_term(y) - v) / main_term_slope(y);
        let next = y - step;
        if !(next < y) || step.abs() <= 2.0 * f64::EPSILON * y {
            return Ok(next.min(y));
        }
        y = next.max(y_min);
    }
    Ok(y)
}

/// A base point with its reverse iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderChain {
    pub base: f64,
    pub points: Vec<f64>,
    pub gaps: Vec<f64>,
    pub increments: Vec<IntegralResult>,
    pub method: ReverseMethod,
}

impl LadderChain {
    pub fn k(&self) -> usize {
        self.points.len()
    }

    /// Tʳ, with T⁰ the base.
    pub fn point(&self, r: usize) -> f64 {
        if r == 0 {
            self.base
        } else {
            self.points[r - 1]
        }
    }

    /// increment_r / ((1 − c) Tʳ⁻¹) for r = 1..k.
    pub fn scaled_increments(&self) -> Vec<f64> {
        self.increments
            .iter()
            .enumerate()
            .map(|(i, inc)| inc.value / (ONE_MINUS_GAMMA * self.point(i)))
            .collect()
    }
}

/// The ladder bound to a Hardy–Littlewood engine.
#[derive(Debug, Clone)]
pub struct Ladder {
    cfg: LadderConfig,
    engine: Arc<HlIntegrator>,
}

impl Ladder {
    /// A ladder on the shared engine for `cfg.quad_tol` (or a private one if
    /// the T cap differs from the default).
    pub fn new(cfg: LadderConfig) -> Result<Self> {
        cfg.validate()?;
        let engine = if cfg.t_cap == DEFAULT_T_CAP {
            shared_engine(cfg.quad_tol)
        } else {
            Arc::new(HlIntegrator::with_options(cfg.quad_tol, cfg.t_cap, None))
        };
        Ok(Self { cfg, engine })
    }

    pub fn with_engine(cfg: LadderConfig, engine: Arc<HlIntegrator>) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, engine })
    }

    pub fn config(&self) -> &LadderConfig {
        &self.cfg
    }

    pub fn engine(&self) -> &Arc<HlIntegrator> {
        &self.engine
    }

    fn check_base(&self, what: &'static str, t: f64) -> Result<()> {
        if !(t >= self.cfg.t0) || !t.is_finite() {
            return Err(Error::domain(what, t, "T >= T0"));
        }
        Ok(())
    }

    /// J(T).
    pub fn j(&self, t: f64) -> Result<f64> {
        Ok(self.engine.j(t)?.value)
    }

    /// φ₁(T) without the T ≥ T₀ check; defined wherever J(T) − c₀ lies on
    /// the increasing branch of g.
    pub(crate) fn phi1_raw(&self, t: f64) -> Result<f64> {
        main_term_inverse(self.j(t)? - self.cfg.c0)
    }

    /// φ₁(T) for T ≥ T₀.
    pub fn phi1(&self, t: f64) -> Result<f64> {
        self.check_base("phi1", t)?;
        self.phi1_raw(t)
    }

    /// φ₁ᵏ(T); every argument handed to φ₁ must stay at or above T₀.
    pub fn phi1_iter(&self, t: f64, k: usize) -> Result<f64> {
        let mut x = t;
        for step in 1..=k {
            if !(x >= self.cfg.t0) {
                return Err(Error::IterationDepth {
                    step,
                    depth: k,
                    value: x,
                    floor: self.cfg.t0,
                });
            }
            x = self.phi1_raw(x)?;
        }
        Ok(x)
    }

    /// ω(t) = ln φ₁(t) + 1 + c − ln 2π.
    pub fn omega(&self, t: f64) -> Result<f64> {
        self.check_base("omega", t)?;
        Ok(main_term_slope(self.phi1_raw(t)?))
    }

    /// Z̃²(t) = |ζ(1/2+it)|²/ω(t) = φ₁'(t).
    pub fn tilde_z_sq(&self, t: f64) -> Result<f64> {
        self.check_base("tilde_z_sq", t)?;
        self.tilde_z_sq_raw(t)
    }

    pub(crate) fn tilde_z_sq_raw(&self, t: f64) -> Result<f64> {
        let z = crate::zeta::cache::z_via(self.engine.cache().map(|c| c.as_ref()), t);
        Ok(z * z / main_term_slope(self.phi1_raw(t)?))
    }

    /// T¹ from T.
    pub fn reverse_step(&self, t: f64, method: ReverseMethod) -> Result<f64> {
        self.check_base("reverse_step", t)?;
        self.reverse_step_raw(t, method)
    }

    pub(crate) fn reverse_step_raw(&self, t: f64, method: ReverseMethod) -> Result<f64> {
        let cap = self.cfg.t_cap;
        let gap = ONE_MINUS_GAMMA * t / t.ln();
        let target = ONE_MINUS_GAMMA * t;
        let engine = &self.engine;
        let within_cap = |x: f64| {
            if x > cap {
                Err(Error::Bracket {
                    lo: t,
                    hi: x,
                    context: format!("reverse step from {t} runs past the T cap {cap}"),
                })
            } else {
                Ok(())
            }
        };
        let tol = Tolerance {
            xtol: 4.0 * f64::EPSILON * (t + 2.0 * gap),
            ftol: self.cfg.tol * target,
            max_evals: 200,
        };
        let lo = t + 0.5 * gap;
        let hi = (t + 2.0 * gap).min(cap);
        let context = format!("reverse step ({method}) from T = {t}");
        let root = match method {
            ReverseMethod::IncrementSolve => solve_increasing(
                |x| {
                    within_cap(x)?;
                    Ok(engine.integral(t, x)?.value - target)
                },
                lo,
                hi,
                t,
                40,
                tol,
                &context,
            )?,
            ReverseMethod::MaintermInvert => {
                let level = main_term(t) + self.cfg.c0;
                solve_increasing(
                    |x| {
                        within_cap(x)?;
                        Ok(engine.j(x)?.value - level)
                    },
                    lo,
                    hi,
                    t,
                    40,
                    tol,
                    &context,
                )?
            }
        };
        Ok(root.x)
    }

    /// T⁰ = T < T¹ < … < Tᵏ with the increments between them.
    pub fn build_chain(&self, t: f64, k: usize, method: ReverseMethod) -> Result<LadderChain> {
        self.check_base("build_chain", t)?;
        if k > self.cfg.k_max {
            return Err(Error::Index(format!(
                "chain length {k} exceeds k_max = {}",
                self.cfg.k_max
            )));
        }
        let mut points = Vec::with_capacity(k);
        let mut gaps = Vec::with_capacity(k);
        let mut increments = Vec::with_capacity(k);
        let mut prev = t;
        for _ in 0..k {
            let next = self.reverse_step_raw(prev, method)?;
            if !(next > prev) {
                return Err(Error::Consistency(format!(
                    "reverse iteration {next} does not exceed {prev}"
                )));
            }
            increments.push(self.engine.integral(prev, next)?);
            gaps.push(next - prev);
            points.push(next);
            prev = next;
        }
        Ok(LadderChain {
            base: t,
            points,
            gaps,
            increments,
            method,
        })
    }
}
