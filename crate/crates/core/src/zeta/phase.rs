//! Continuous tracking of S(t) = (1/π) arg ζ(1/2+it) and S₁(t) = ∫₀ᵗ S.
//!
//! On the critical line ζ(1/2+it) = Z(t) e^{−iθ(t)}, so the argument moves
//! continuously with −θ(t) and gains π at every sign change of Z. Sampling Z
//! with steps short enough that θ moves by at most π/4 keeps the continuous
//! part of each step below a quarter; the only discontinuities are the zeros,
//! which are located individually. Given the zeros, S and S₁ have closed
//! forms on every segment, so S₁ at an arbitrary point costs one short
//! Gauss–Legendre sum.
//!
//! The branch is anchored at t = 10 where N(10) = 0, i.e.
//! S(10) = −θ(10)/π − 1. On [0, 10] there are no zeros and S₁ is obtained
//! from the integral of θ directly.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::roots::{illinois, Tolerance};
use crate::{Error, Result};

use super::cache::{z_via, SampleCache};
use super::theta::{theta_integral, theta_prime, theta_unchecked, GL8_NODES, GL8_WEIGHTS};

/// Height at which the branch of arg ζ is anchored.
pub const ANCHOR: f64 = 10.0;

/// S₁(10), the integral of S over the zero-free stretch [0, 10].
pub const S1_AT_TEN: f64 = -0.588_277_835_177_021_1;

/// Track tolerance used by the campaigns.
pub const DEFAULT_TRACK_TOL: f64 = 1e-8;

/// Largest |S(t)| accepted before the track is declared inconsistent. At
/// heights reachable here |S| stays well below 3.
const MAX_ABS_S: f64 = 3.0;

/// Samples per block for the running-mean drift check.
const DRIFT_BLOCK: usize = 512;

/// Options for [`build_phase_track_with`].
#[derive(Debug, Clone)]
pub struct TrackOptions {
    /// Tolerance on S₁ per unit length; sets how precisely zeros are located.
    pub tol: f64,
    /// Maximum number of Z evaluations.
    pub budget: usize,
    /// Optional source of precomputed Z samples.
    pub cache: Option<Arc<SampleCache>>,
}

impl TrackOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            budget: 200_000_000,
            cache: None,
        }
    }
}

/// A grid with S(t) and S₁(t) aligned to it.
#[derive(Debug, Clone)]
pub struct PhaseTrack {
    grid: Vec<f64>,
    s_values: Vec<f64>,
    s1_values: Vec<f64>,
    counts: Vec<u64>,
    zeros: Vec<f64>,
    anchor_t: f64,
    tol: f64,
    evals: usize,
}

impl PhaseTrack {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s_values
    }

    pub fn s1_values(&self) -> &[f64] {
        &self.s1_values
    }

    /// N(t) at every grid point, as counted along the track.
    pub fn zero_counts(&self) -> &[u64] {
        &self.counts
    }

    /// Ordinates of the zeros located in (10, end].
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn anchor_t(&self) -> f64 {
        self.anchor_t
    }

    pub fn end_t(&self) -> f64 {
        *self.grid.last().expect("grid holds the anchor")
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Number of Z evaluations spent building the track.
    pub fn evals(&self) -> usize {
        self.evals
    }

    pub fn covers(&self, a: f64, b: f64) -> bool {
        a >= self.anchor_t && b <= self.end_t() && a <= b
    }

    pub(crate) fn check_covers(&self, a: f64, b: f64) -> Result<()> {
        if self.covers(a, b) {
            Ok(())
        } else {
            Err(Error::Coverage {
                a,
                b,
                lo: self.anchor_t,
                hi: self.end_t(),
            })
        }
    }

    /// N(t) = #{0 < γ ≤ t}.
    pub fn n_of_t(&self, t: f64) -> u64 {
        self.zeros.partition_point(|&g| g <= t) as u64
    }

    fn s_unchecked(&self, t: f64) -> f64 {
        self.n_of_t(t) as f64 - theta_unchecked(t) / PI - 1.0
    }

    /// S₁(t) for t inside the track.
    fn s1_unchecked(&self, t: f64) -> f64 {
        let i = self.grid.partition_point(|&g| g <= t).saturating_sub(1);
        self.s1_values[i] + segment_integral(&self.zeros, self.grid[i], t)
    }

    /// Zeros in (a, b].
    pub fn zeros_between(&self, a: f64, b: f64) -> &[f64] {
        let lo = self.zeros.partition_point(|&g| g <= a);
        let hi = self.zeros.partition_point(|&g| g <= b);
        &self.zeros[lo..hi]
    }
}

/// ∫ₐᵇ S(τ) dτ for b − a ≤ 1, given all zeros. S is written as
/// S(a) + #{γ ∈ (a, τ]} − (θ(τ) − θ(a))/π so that only small quantities meet.
fn segment_integral(zeros: &[f64], a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n_a = zeros.partition_point(|&g| g <= a);
    let theta_a = theta_unchecked(a);
    let s_a = n_a as f64 - theta_a / PI - 1.0;
    let mut jumps = 0.0;
    for &g in zeros[n_a..].iter().take_while(|&&g| g <= b) {
        jumps += b - g;
    }
    let half = 0.5 * (b - a);
    let mid = a + half;
    let mut drift = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
        drift += w * (theta_unchecked(mid + half * x) - theta_a);
    }
    s_a * (b - a) + jumps - half * drift / PI
}

/// S₁(t) on [0, 10], where N vanishes and S = −θ/π − 1.
pub fn s1_head(t: f64) -> Result<f64> {
    if !(0.0..=ANCHOR).contains(&t) {
        return Err(Error::domain("s1_head", t, "0 <= t <= 10"));
    }
    Ok(-t - theta_integral(0.0, t) / PI)
}

/// S(t) from a track; t must lie within the track.
pub fn s_of_t(track: &PhaseTrack, t: f64) -> Result<f64> {
    track.check_covers(t, t)?;
    Ok(track.s_unchecked(t))
}

/// S₁(t) from a track; t must lie within the track.
pub fn s1_of_t(track: &PhaseTrack, t: f64) -> Result<f64> {
    track.check_covers(t, t)?;
    Ok(track.s1_unchecked(t))
}

/// Build a track over [t_start, t_end] with default options.
pub fn build_phase_track(t_start: f64, t_end: f64, tol: f64) -> Result<PhaseTrack> {
    build_phase_track_with(t_start, t_end, &TrackOptions::new(tol))
}

/// Sampling step: θ moves by at most π/4 and the step never exceeds 1.
#[inline]
fn sample_step(t: f64) -> f64 {
    (PI / (4.0 * theta_prime(t))).min(1.0)
}

struct Sampler<'a> {
    cache: Option<&'a SampleCache>,
    evals: usize,
    budget: usize,
}

impl Sampler<'_> {
    fn z(&mut self, t: f64) -> Result<f64> {
        self.evals += 1;
        if self.evals > self.budget {
            return Err(Error::Budget {
                budget: self.budget,
                context: format!("building the phase track near t = {t}"),
            });
        }
        Ok(z_via(self.cache, t))
    }
}

fn zero_xtol(t: f64, tol: f64) -> f64 {
    let density = theta_prime(t) / PI;
    (0.5 * tol / density).max(8.0 * f64::EPSILON * t)
}

fn refine_zero(s: &mut Sampler<'_>, a: f64, za: f64, b: f64, zb: f64, tol: f64) -> Result<f64> {
    let xtol = zero_xtol(b, tol);
    let root = illinois(|t| s.z(t), a, za, b, zb, Tolerance::new(xtol, 0.0))?;
    Ok(root.x)
}

/// Look for a pair of zeros hidden between samples that share a sign. The
/// window is scanned on a fine grid and the smallest |Z| refined by golden
/// section; returns the point where Z changes sign, if one is found.
fn hidden_sign_change(
    s: &mut Sampler<'_>,
    lo: f64,
    hi: f64,
    sign: f64,
) -> Result<Option<(f64, f64)>> {
    const SCAN: usize = 12;
    let h = (hi - lo) / SCAN as f64;
    let mut best = (lo, f64::INFINITY);
    for i in 1..SCAN {
        let t = lo + h * i as f64;
        let v = sign * s.z(t)?;
        if v < 0.0 {
            return Ok(Some((t, v * sign)));
        }
        if v < best.1 {
            best = (t, v);
        }
    }
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = sign * s.z(c)?;
    let mut fd = sign * s.z(d)?;
    for _ in 0..40 {
        if fc < 0.0 {
            return Ok(Some((c, sign * fc)));
        }
        if fd < 0.0 {
            return Ok(Some((d, sign * fd)));
        }
        if b - a < 1e-9 * hi {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = sign * s.z(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = sign * s.z(d)?;
        }
    }
    Ok(None)
}

/// Build a track over [t_start, t_end]. Sampling always starts at the anchor
/// t = 10 so that the zero count and S₁ are carried forward exactly; only
/// the part from t_start on is kept in the grid.
pub fn build_phase_track_with(t_start: f64, t_end: f64, opts: &TrackOptions) -> Result<PhaseTrack> {
    if !(t_start >= ANCHOR) || !t_start.is_finite() {
        return Err(Error::domain("build_phase_track", t_start, "t_start >= 10"));
    }
    if !(t_end >= t_start) || !t_end.is_finite() {
        return Err(Error::domain(
            "build_phase_track",
            t_end,
            "t_end >= t_start",
        ));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::config("tol", "must be positive"));
    }
    let tol = opts.tol;
    let mut sampler = Sampler {
        cache: opts.cache.as_deref(),
        evals: 0,
        budget: opts.budget,
    };

    let mut samples: Vec<f64> = vec![ANCHOR];
    let mut extra: Vec<f64> = Vec::new();
    let mut zeros: Vec<f64> = Vec::new();
    let mut window: [(f64, f64); 3] = [(f64::NAN, f64::NAN); 3];
    let mut skip_until = f64::NEG_INFINITY;

    let mut t = ANCHOR;
    let mut z = sampler.z(t)?;
    window[2] = (t, z);
    while t < t_end {
        let mut next = (t + sample_step(t)).min(t_end);
        if t < t_start && next > t_start {
            next = t_start;
        }
        let zn = sampler.z(next)?;
        if (z < 0.0) != (zn < 0.0) {
            zeros.push(refine_zero(&mut sampler, t, z, next, zn, tol)?);
        }
        samples.push(next);
        window = [window[1], window[2], (next, zn)];

        let [(t0, z0), (_, z1), (t2, z2)] = window;
        let same_sign = (z0 < 0.0) == (z1 < 0.0) && (z1 < 0.0) == (z2 < 0.0);
        if same_sign && t0 >= skip_until && z1.abs() < z0.abs() && z1.abs() < z2.abs() {
            let sign = if z1 < 0.0 { -1.0 } else { 1.0 };
            if let Some((tm, zm)) = hidden_sign_change(&mut sampler, t0, t2, sign)? {
                let first = refine_zero(&mut sampler, t0, z0, tm, zm, tol)?;
                let second = refine_zero(&mut sampler, tm, zm, t2, z2, tol)?;
                // zeros located after t0 in this window were found from the
                // t1..t2 step only if Z changed sign there, which it did not
                zeros.push(first);
                zeros.push(second);
                extra.push(tm);
                skip_until = t2;
                log::debug!("hidden zero pair near t = {tm}");
            }
        }
        t = next;
        z = zn;
    }
    zeros.sort_by(f64::total_cmp);

    let mut all: Vec<f64> = samples;
    all.extend(extra);
    all.sort_by(f64::total_cmp);
    all.dedup();

    // S₁ forward from the anchor, then keep the part from t_start on.
    let first_kept = all.partition_point(|&g| g < t_start);
    let mut s1 = S1_AT_TEN;
    let mut grid = Vec::with_capacity(all.len() - first_kept);
    let mut s_values = Vec::with_capacity(grid.capacity());
    let mut s1_values = Vec::with_capacity(grid.capacity());
    let mut counts = Vec::with_capacity(grid.capacity());
    let mut prev = ANCHOR;
    let mut prev_s = -theta_unchecked(ANCHOR) / PI - 1.0;
    let mut prev_n = 0usize;
    let mut block_sum = 0.0;
    let mut block_len = 0usize;
    for (i, &g) in all.iter().enumerate() {
        if i > 0 {
            s1 += segment_integral(&zeros, prev, g);
        }
        let n = zeros.partition_point(|&x| x <= g);
        let s = n as f64 - theta_unchecked(g) / PI - 1.0;
        let continuous = (s - prev_s) - (n - prev_n) as f64;
        if continuous.abs() >= 0.5 || s.abs() > MAX_ABS_S {
            return Err(Error::BranchLoss {
                from: prev,
                to: g,
                step: continuous.abs().max(s.abs()),
            });
        }
        block_sum += s;
        block_len += 1;
        if block_len == DRIFT_BLOCK {
            let mean = block_sum / block_len as f64;
            if mean.abs() > 1.0 {
                return Err(Error::BranchLoss {
                    from: prev,
                    to: g,
                    step: mean.abs(),
                });
            }
            block_sum = 0.0;
            block_len = 0;
        }
        if i >= first_kept {
            grid.push(g);
            s_values.push(s);
            s1_values.push(s1);
            counts.push(n as u64);
        }
        prev = g;
        prev_s = s;
        prev_n = n;
    }

    Ok(PhaseTrack {
        grid,
        s_values,
        s1_values,
        counts,
        zeros,
        anchor_t: t_start,
        tol,
        evals: sampler.evals,
    })
}
