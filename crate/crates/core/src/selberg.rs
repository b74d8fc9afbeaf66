//! Selberg's moment constant d(l) and the identities linking S₁ moments to
//! ladder increments.
//!
//! d(l) has no closed form here; it is estimated as
//! d̂ = (1/T)∫₀ᵀ |S₁(t)|^{2l} dt and used wherever d(l) appears. Every
//! check returns a [`TheoremReport`] whose envelope is κ times the order of
//! the error term (κ defaults to 10).

use serde::{Deserialize, Serialize};

use crate::ladder::LadderChain;
use crate::quadrature::{s1_head_moment, s1_moment, MOMENT_TOL};
use crate::report::{CheckId, TheoremReport};
use crate::zeta::phase::ANCHOR;
use crate::zeta::PhaseTrack;
use crate::{Error, Result, ONE_MINUS_GAMMA};

/// Default envelope multiplier.
pub const DEFAULT_KAPPA: f64 = 10.0;

/// Exponent b at which H/T^b is recorded.
const SHORT_INTERVAL_EXPONENT: f64 = 0.51;

/// Estimate of d(l) with its trend over T/4, T/2, T.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelbergEstimate {
    pub l: u32,
    pub t: f64,
    pub d_hat: f64,
    /// (Tᵢ, (1/Tᵢ)∫₀^{Tᵢ}|S₁|^{2l} − d̂).
    pub residual_trend: Vec<(f64, f64)>,
}

/// Settings shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckSettings {
    pub kappa: f64,
    pub moment_tol: f64,
}

impl Default for CheckSettings {
    fn default() -> Self {
        Self {
            kappa: DEFAULT_KAPPA,
            moment_tol: MOMENT_TOL,
        }
    }
}

/// ∫₀ᵀ |S₁|^{2l}: the [0, 10] head from the low branch plus the track.
pub fn prefix_moment(track: &PhaseTrack, t: f64, l: u32, tol: f64) -> Result<f64> {
    let head = s1_head_moment(ANCHOR, l, tol)?.value;
    if t <= ANCHOR {
        return s1_head_moment(t, l, tol).map(|r| r.value);
    }
    if track.anchor_t() > ANCHOR {
        return Err(Error::Coverage {
            a: ANCHOR,
            b: t,
            lo: track.anchor_t(),
            hi: track.end_t(),
        });
    }
    Ok(head + s1_moment(track, ANCHOR, t, l, tol)?.value)
}

/// d̂(l) from a track anchored at 10 and reaching T.
pub fn estimate_d(l: u32, t: f64, track: &PhaseTrack) -> Result<SelbergEstimate> {
    estimate_d_with(l, t, track, MOMENT_TOL)
}

pub fn estimate_d_with(l: u32, t: f64, track: &PhaseTrack, tol: f64) -> Result<SelbergEstimate> {
    if l == 0 {
        return Err(Error::Index("moment order l must be positive".into()));
    }
    if !(t >= 4.0 * ANCHOR) {
        return Err(Error::domain("estimate_d", t, "T >= 40"));
    }
    track.check_covers(ANCHOR, t)?;
    let marks = [0.25 * t, 0.5 * t, t];
    let mut total = s1_head_moment(ANCHOR, l, tol)?.value;
    let mut from = ANCHOR;
    let mut cumulative = Vec::with_capacity(3);
    for &m in &marks {
        total += s1_moment(track, from, m, l, tol)?.value;
        cumulative.push((m, total));
        from = m;
    }
    let d_hat = total / t;
    if !(d_hat > 0.0) {
        return Err(Error::Consistency(format!(
            "moment estimate {d_hat} is not positive"
        )));
    }
    Ok(SelbergEstimate {
        l,
        t,
        d_hat,
        residual_trend: cumulative
            .iter()
            .map(|&(m, v)| (m, v / m - d_hat))
            .collect(),
    })
}

fn check_segment(chain: &LadderChain, r: usize) -> Result<()> {
    if r == 0 || r > chain.k() {
        return Err(Error::Index(format!(
            "segment index r = {r} outside 1..={}",
            chain.k()
        )));
    }
    Ok(())
}

fn envelope_scale(t: f64) -> (f64, f64) {
    let ln = t.ln();
    (ln, ln * ln)
}

/// (1/d̂)∫_{Tʳ⁻¹}^{Tʳ}|S₁|^{2l} against Tʳ − Tʳ⁻¹, envelope κT/ln²T. A chain
/// with no steps passes vacuously.
pub fn segment_moment_check(
    chain: &LadderChain,
    r: usize,
    l: u32,
    d_hat: f64,
    track: &PhaseTrack,
    settings: CheckSettings,
) -> Result<TheoremReport> {
    let t = chain.base;
    let (_, ln2) = envelope_scale(t);
    let envelope = settings.kappa * t / ln2;
    if chain.k() == 0 {
        return Ok(
            TheoremReport::new(CheckId::SegmentMoment, 0.0, 0.0, envelope)
                .with("kappa", settings.kappa),
        );
    }
    check_segment(chain, r)?;
    let (a, b) = (chain.point(r - 1), chain.point(r));
    let moment = s1_moment(track, a, b, l, settings.moment_tol)?.value;
    let h = b - a;
    Ok(
        TheoremReport::new(CheckId::SegmentMoment, moment / d_hat, h, envelope)
            .with("T", t)
            .with("r", r as f64)
            .with("l", l as f64)
            .with("kappa", settings.kappa)
            .with("H_over_T_pow_b", h / t.powf(SHORT_INTERVAL_EXPONENT)),
    )
}

/// Per-segment moments summed over r..s−1 against the moment taken over
/// [Tʳ⁻¹, Tˢ⁻¹] in one go; the envelope is the sum of the per-step ones.
pub fn segment_moment_sum_check(
    chain: &LadderChain,
    r: usize,
    s: usize,
    l: u32,
    d_hat: f64,
    track: &PhaseTrack,
    settings: CheckSettings,
) -> Result<TheoremReport> {
    if !(1 <= r && r < s && s <= chain.k() + 1) {
        return Err(Error::Index(format!(
            "need 1 <= r < s <= k + 1, got r = {r}, s = {s}, k = {}",
            chain.k()
        )));
    }
    let mut summed = 0.0;
    for q in r..s {
        summed += s1_moment(
            track,
            chain.point(q - 1),
            chain.point(q),
            l,
            settings.moment_tol,
        )?
        .value;
    }
    let whole = s1_moment(
        track,
        chain.point(r - 1),
        chain.point(s - 1),
        l,
        settings.moment_tol,
    )?
    .value;
    let t = chain.base;
    let (_, ln2) = envelope_scale(t);
    let envelope = (s - r) as f64 * settings.kappa * t / ln2;
    Ok(TheoremReport::new(
        CheckId::SegmentMomentSum,
        summed / d_hat,
        whole / d_hat,
        envelope,
    )
    .with("T", t)
    .with("r", r as f64)
    .with("s", s as f64)
    .with("kappa", settings.kappa))
}

/// ∫_{Tˢ⁻¹}^{Tˢ}|ζ|² − ∫_{Tʳ⁻¹}^{Tʳ}|ζ|² against ((1−c)/d̂)∫_{Tʳ⁻¹}^{Tˢ⁻¹}|S₁|^{2l},
/// for 1 ≤ r ≤ s − 1 ≤ k − 1; envelope κT/ln²T.
pub fn increment_lift_check(
    chain: &LadderChain,
    r: usize,
    s: usize,
    l: u32,
    d_hat: f64,
    track: &PhaseTrack,
    settings: CheckSettings,
) -> Result<TheoremReport> {
    let k = chain.k();
    if !(1 <= r && r < s && s <= k) {
        return Err(Error::Index(format!(
            "need 1 <= r <= s - 1 <= k - 1, got r = {r}, s = {s}, k = {k}"
        )));
    }
    let inc_s = chain.increments[s - 1].value;
    let inc_r = chain.increments[r - 1].value;
    let moment = s1_moment(
        track,
        chain.point(r - 1),
        chain.point(s - 1),
        l,
        settings.moment_tol,
    )?
    .value;
    let t = chain.base;
    let (_, ln2) = envelope_scale(t);
    Ok(TheoremReport::new(
        CheckId::IncrementLift,
        inc_s - inc_r,
        ONE_MINUS_GAMMA / d_hat * moment,
        settings.kappa * t / ln2,
    )
    .with("T", t)
    .with("r", r as f64)
    .with("s", s as f64)
    .with("l", l as f64)
    .with("kappa", settings.kappa))
}

/// (1/Tʳ)∫_{Tʳ⁻¹}^{Tʳ}{d̂|ζ|² + (1−c)|S₁|^{2l}} against (1−c)d̂; envelope κ/ln²T.
pub fn conservation_check(
    chain: &LadderChain,
    r: usize,
    l: u32,
    d_hat: f64,
    track: &PhaseTrack,
    settings: CheckSettings,
) -> Result<TheoremReport> {
    check_segment(chain, r)?;
    let (a, b) = (chain.point(r - 1), chain.point(r));
    let moment = s1_moment(track, a, b, l, settings.moment_tol)?.value;
    let inc = chain.increments[r - 1].value;
    let lhs = (d_hat * inc + ONE_MINUS_GAMMA * moment) / b;
    let t = chain.base;
    let (_, ln2) = envelope_scale(t);
    Ok(TheoremReport::new(
        CheckId::Conservation,
        lhs,
        ONE_MINUS_GAMMA * d_hat,
        settings.kappa / ln2,
    )
    .with("T", t)
    .with("r", r as f64)
    .with("l", l as f64)
    .with("d_hat", d_hat)
    .with("kappa", settings.kappa))
}

/// The two complementary identities between the prefix moment
/// ∫₀^{Tʳ⁻¹}|S₁|^{2l} and the increment over [Tʳ⁻¹, Tʳ].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementaryReport {
    pub moment_from_increment: TheoremReport,
    pub increment_from_moment: TheoremReport,
    /// [0, Tʳ⁻¹) and (Tʳ⁻¹, Tʳ] share no point.
    pub disjoint: bool,
}

impl ComplementaryReport {
    pub fn pass(&self) -> bool {
        self.disjoint && self.moment_from_increment.pass && self.increment_from_moment.pass
    }
}

/// Both complementary identities for segment r; envelope κT/ln T.
pub fn complementary_check(
    chain: &LadderChain,
    r: usize,
    l: u32,
    d_hat: f64,
    track: &PhaseTrack,
    settings: CheckSettings,
) -> Result<ComplementaryReport> {
    check_segment(chain, r)?;
    let (a, b) = (chain.point(r - 1), chain.point(r));
    let prefix = prefix_moment(track, a, l, settings.moment_tol)?;
    let inc = chain.increments[r - 1].value;
    let t = chain.base;
    let (ln, _) = envelope_scale(t);
    let envelope = settings.kappa * t / ln;
    let first = TheoremReport::new(
        CheckId::MomentFromIncrement,
        prefix,
        d_hat / ONE_MINUS_GAMMA * inc,
        envelope,
    )
    .with("T", t)
    .with("r", r as f64)
    .with("kappa", settings.kappa);
    let second = TheoremReport::new(
        CheckId::IncrementFromMoment,
        inc,
        ONE_MINUS_GAMMA / d_hat * prefix,
        envelope,
    )
    .with("T", t)
    .with("r", r as f64)
    .with("kappa", settings.kappa);
    // [0, a) ∩ (a, b] is empty exactly when a < b; both ends are finite
    let disjoint = a < b && a >= 0.0;
    Ok(ComplementaryReport {
        moment_from_increment: first,
        increment_from_moment: second,
        disjoint,
    })
}

/// Pearson correlation of paired samples.
pub fn correlation(pairs: &[(f64, f64)]) -> f64 {
    let n = pairs.len() as f64;
    if pairs.len() < 2 {
        return f64::NAN;
    }
    let (mx, my) = pairs
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}
