//! Evaluation of θ(t), Hardy's Z(t) and |ζ(1/2+it)|², plus continuous
//! tracking of the argument functions S(t) and S₁(t).
//!
//! Z(t) is served by two kernels. Below [`LOW_BRANCH_BELOW`] an
//! Euler–Maclaurin evaluation of ζ(1/2+it) is rotated by e^{iθ(t)}; above it
//! the Riemann–Siegel main sum with eight remainder terms is used.

pub mod cache;
pub mod euler_maclaurin;
pub mod phase;
mod riemann_siegel;
mod theta;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use phase::{
    build_phase_track, build_phase_track_with, s1_head, s1_of_t, s_of_t, PhaseTrack, TrackOptions,
    S1_AT_TEN,
};
pub use theta::log_gamma;

pub(crate) use theta::theta_unchecked;

/// Heights below this use the Euler–Maclaurin kernel.
pub const LOW_BRANCH_BELOW: f64 = 30.0;

/// One evaluation point on the critical line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalSample {
    pub t: f64,
    pub theta: f64,
    pub z: f64,
    pub mod_sq: f64,
}

impl CriticalSample {
    pub fn at(t: f64) -> Result<Self> {
        let z = hardy_z(t)?;
        Ok(Self {
            t,
            theta: theta_unchecked(t),
            z,
            mod_sq: z * z,
        })
    }
}

/// Riemann–Siegel phase θ(t) for t ≥ 1.
pub fn theta(t: f64) -> Result<f64> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::domain("theta", t, "t >= 1"));
    }
    Ok(theta_unchecked(t))
}

/// Hardy's Z(t) for t ≥ 0.
pub fn hardy_z(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("hardy_z", t, "t >= 0"));
    }
    Ok(z_unchecked(t))
}

/// |ζ(1/2+it)|² = Z(t)².
pub fn zeta_mod_sq(t: f64) -> Result<f64> {
    hardy_z(t).map(|z| z * z)
}

/// Z(t) from the Riemann–Siegel formula alone; requires t ≥ 10.
pub fn riemann_siegel_z(t: f64) -> Result<f64> {
    if !(t >= 10.0) || !t.is_finite() {
        return Err(Error::domain("riemann_siegel_z", t, "t >= 10"));
    }
    Ok(riemann_siegel::z_with_terms(
        t,
        riemann_siegel::DEFAULT_TERMS,
    ))
}

/// Z(t) from Riemann–Siegel truncated after `terms` remainder corrections.
pub fn riemann_siegel_z_terms(t: f64, terms: usize) -> Result<f64> {
    if !(t >= 10.0) || !t.is_finite() {
        return Err(Error::domain("riemann_siegel_z", t, "t >= 10"));
    }
    if !(1..=riemann_siegel::DEFAULT_TERMS).contains(&terms) {
        return Err(Error::config("terms", "between 1 and 8"));
    }
    Ok(riemann_siegel::z_with_terms(t, terms))
}

/// Z(t) from the Euler–Maclaurin kernel; intended for t ≤ 100.
pub fn euler_maclaurin_z(t: f64) -> Result<f64> {
    if !(0.0..=1000.0).contains(&t) {
        return Err(Error::domain("euler_maclaurin_z", t, "0 <= t <= 1000"));
    }
    Ok(euler_maclaurin::z(t))
}

#[inline]
pub(crate) fn z_unchecked(t: f64) -> f64 {
    if t < LOW_BRANCH_BELOW {
        euler_maclaurin::z(t)
    } else {
        riemann_siegel::z_with_terms(t, riemann_siegel::DEFAULT_TERMS)
    }
}
