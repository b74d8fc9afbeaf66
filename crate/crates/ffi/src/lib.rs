//! C ABI over `ladderlab`.
//!
//! Every entry point returns an [`LlStatus`]; results are written through
//! out-pointers only on success. On failure a message is kept per thread and
//! can be read with [`ll_last_error_message`]. Panics never cross the
//! boundary: they are caught and reported as `LL_STATUS_PANIC`.
//!
//! Ladders and phase tracks are opaque handles created by `*_new` and
//! released by the matching `*_free`. A handle may be shared between threads
//! for reading; all handle functions take it by const pointer.
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the access the function
//! makes: out-pointers writable for one value (or `capacity` values for
//! [`ll_ladder_chain`]), handles obtained from the matching constructor and
//! not yet freed. Null is always detected and reported; dangling pointers
//! cannot be.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ladderlab::functionals::{fermat_rational, FermatTriple, Functionals};
use ladderlab::ladder::{Ladder, LadderConfig, ReverseMethod};
use ladderlab::quadrature::hl_integral;
use ladderlab::zeta::{self, PhaseTrack};
use ladderlab::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    BranchLoss = 4,
    Budget = 5,
    Coverage = 6,
    Bracket = 7,
    IterationDepth = 8,
    Index = 9,
    Admissibility = 10,
    RangeCap = 11,
    Consistency = 12,
    Config = 13,
    Cache = 14,
    Io = 15,
    Panic = 16,
}

/// Values accepted by the `method` argument of the reverse-step functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlReverseMethod {
    IncrementSolve = 0,
    MaintermInvert = 1,
}

/// Plain-data mirror of the ladder configuration.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlLadderConfig {
    pub t0: f64,
    pub c0: f64,
    pub k_max: usize,
    pub tol: f64,
    pub quad_tol: f64,
    pub t_cap: f64,
}

/// Opaque ladder handle.
pub struct LlLadder {
    inner: Ladder,
}

/// Opaque phase-track handle.
pub struct LlPhaseTrack {
    inner: PhaseTrack,
}

struct Failure {
    status: LlStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain { .. } => LlStatus::Domain,
            Error::BranchLoss { .. } => LlStatus::BranchLoss,
            Error::Budget { .. } => LlStatus::Budget,
            Error::Coverage { .. } => LlStatus::Coverage,
            Error::Bracket { .. } => LlStatus::Bracket,
            Error::IterationDepth { .. } => LlStatus::IterationDepth,
            Error::Index(_) => LlStatus::Index,
            Error::Admissibility { .. } => LlStatus::Admissibility,
            Error::RangeCap { .. } => LlStatus::RangeCap,
            Error::Consistency(_) => LlStatus::Consistency,
            Error::Config { .. } => LlStatus::Config,
            Error::Cache(_) => LlStatus::Cache,
            Error::Io(_) => LlStatus::Io,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        status: LlStatus::InvalidArgument,
        message: message.into(),
    }
}

fn null(name: &str) -> Failure {
    Failure {
        status: LlStatus::NullPointer,
        message: format!("`{name}` is null"),
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> LlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LlStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            LlStatus::Panic
        }
    }
}

fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    // SAFETY: non-null checked above; the caller guarantees it is writable.
    unsafe { out.write(value) };
    Ok(())
}

fn ladder_ref<'a>(h: *const LlLadder) -> Result<&'a Ladder, Failure> {
    // SAFETY: the caller passes a handle from `ll_ladder_new` or null.
    unsafe { h.as_ref() }
        .map(|l| &l.inner)
        .ok_or_else(|| null("ladder"))
}

fn track_ref<'a>(h: *const LlPhaseTrack) -> Result<&'a PhaseTrack, Failure> {
    // SAFETY: the caller passes a handle from `ll_phase_track_new` or null.
    unsafe { h.as_ref() }
        .map(|t| &t.inner)
        .ok_or_else(|| null("track"))
}

fn method_from(raw: u32) -> Result<ReverseMethod, Failure> {
    match raw {
        0 => Ok(ReverseMethod::IncrementSolve),
        1 => Ok(ReverseMethod::MaintermInvert),
        other => Err(invalid(format!("unknown reverse method {other}"))),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ll_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread or
/// until [`ll_clear_error`].
#[no_mangle]
pub extern "C" fn ll_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Forget the stored error message of this thread.
#[no_mangle]
pub extern "C" fn ll_clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// θ(t).
#[no_mangle]
pub unsafe extern "C" fn ll_theta(t: f64, out: *mut f64) -> LlStatus {
    guard(|| write(out, "out", zeta::theta(t)?))
}

/// Hardy's Z(t).
#[no_mangle]
pub unsafe extern "C" fn ll_hardy_z(t: f64, out: *mut f64) -> LlStatus {
    guard(|| write(out, "out", zeta::hardy_z(t)?))
}

/// |ζ(1/2 + it)|².
#[no_mangle]
pub unsafe extern "C" fn ll_zeta_mod_sq(t: f64, out: *mut f64) -> LlStatus {
    guard(|| write(out, "out", zeta::zeta_mod_sq(t)?))
}

/// ∫ₐᵇ Z²(t) dt with relative tolerance `tol`. `err_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn ll_hl_integral(
    a: f64,
    b: f64,
    tol: f64,
    value_out: *mut f64,
    err_out: *mut f64,
) -> LlStatus {
    guard(|| {
        if value_out.is_null() {
            return Err(null("value_out"));
        }
        let r = hl_integral(a, b, tol)?;
        write(value_out, "value_out", r.value)?;
        if !err_out.is_null() {
            write(err_out, "err_out", r.err_est)?;
        }
        Ok(())
    })
}

/// (xⁿ + yⁿ)/zⁿ for positive integers, computed exactly before rounding.
#[no_mangle]
pub unsafe extern "C" fn ll_fermat_rational(
    x: u64,
    y: u64,
    z: u64,
    n: u32,
    out: *mut f64,
) -> LlStatus {
    guard(|| {
        let triple = FermatTriple::new(x, y, z, n)?;
        write(out, "out", fermat_rational(triple))
    })
}

/// F₁(x; τ) on the default ladder.
#[no_mangle]
pub unsafe extern "C" fn ll_f1_estimate(x: f64, tau: f64, out: *mut f64) -> LlStatus {
    guard(|| {
        let f = Functionals::new()?;
        write(out, "out", f.f1_estimate(x, tau)?)
    })
}

/// Default ladder configuration.
#[no_mangle]
pub extern "C" fn ll_ladder_config_default() -> LlLadderConfig {
    let d = LadderConfig::default();
    LlLadderConfig {
        t0: d.t0,
        c0: d.c0,
        k_max: d.k_max,
        tol: d.tol,
        quad_tol: d.quad_tol,
        t_cap: d.t_cap,
    }
}

/// Create a ladder. `config` may be null for the defaults.
#[no_mangle]
pub unsafe extern "C" fn ll_ladder_new(
    config: *const LlLadderConfig,
    out: *mut *mut LlLadder,
) -> LlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut cfg = LadderConfig::default();
        // SAFETY: null or a valid pointer, per the contract above.
        if let Some(c) = unsafe { config.as_ref() } {
            cfg.t0 = c.t0;
            cfg.c0 = c.c0;
            cfg.k_max = c.k_max;
            cfg.tol = c.tol;
            cfg.quad_tol = c.quad_tol;
            cfg.t_cap = c.t_cap;
        }
        let ladder = Ladder::new(cfg)?;
        write(
            out,
            "out",
            Box::into_raw(Box::new(LlLadder { inner: ladder })),
        )
    })
}

/// Release a ladder; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ll_ladder_free(ladder: *mut LlLadder) {
    if !ladder.is_null() {
        // SAFETY: produced by `Box::into_raw` in `ll_ladder_new`.
        drop(unsafe { Box::from_raw(ladder) });
    }
}

/// J(t) as seen by the ladder's engine.
#[no_mangle]
pub unsafe extern "C" fn ll_ladder_j(ladder: *const LlLadder, t: f64, out: *mut f64) -> LlStatus {
    guard(|| write(out, "out", ladder_ref(ladder)?.j(t)?))
}

/// φ₁(t).
#[no_mangle]
pub unsafe extern "C" fn ll_ladder_phi1(
    ladder: *const LlLadder,
    t: f64,
    out: *mut f64,
) -> LlStatus {
    guard(|| write(out, "out", ladder_ref(ladder)?.phi1(t)?))
}

/// φ₁ applied `k` times.
#[no_mangle]
pub unsafe extern "C" fn ll_ladder_phi1_iter(
    ladder: *const LlLadder,
    t: f64,
    k: usize,
    out: *mut f64,
) -> LlStatus {
    guard(|| write(out, "out", ladder_ref(ladder)?.phi1_iter(t, k)?))
}

/// Z̃²(t).
#[no_mangle]
pub unsafe extern "C" fn ll_ladder_tilde_z_sq(
    ladder: *const LlLadder,
    t: f64,
    out: *mut f64,
) -> LlStatus {
    guard(|| write(out, "out", ladder_ref(ladder)?.tilde_z_sq(t)?))
}

/// One reverse step from `t`; `method` is an [`LlReverseMethod`] value.
#[no_mangle]
pub unsafe extern "C" fn ll_ladder_reverse_step(
    ladder: *const LlLadder,
    t: f64,
    method: u32,
    out: *mut f64,
) -> LlStatus {
    guard(|| {
        let m = method_from(method)?;
        write(out, "out", ladder_ref(ladder)?.reverse_step(t, m)?)
    })
}

/// The reverse points T¹..Tᵏ of `t`, written to `points[0..k]`.
///
/// `points` must hold at least `capacity` values and `capacity >= k`.
#[no_mangle]
pub unsafe extern "C" fn ll_ladder_chain(
    ladder: *const LlLadder,
    t: f64,
    k: usize,
    method: u32,
    points: *mut f64,
    capacity: usize,
) -> LlStatus {
    guard(|| {
        if points.is_null() {
            return Err(null("points"));
        }
        if capacity < k {
            return Err(invalid(format!(
                "capacity {capacity} is smaller than k = {k}"
            )));
        }
        let m = method_from(method)?;
        let chain = ladder_ref(ladder)?.build_chain(t, k, m)?;
        // SAFETY: `points` is valid for `capacity >= k` writes.
        let dst = unsafe { std::slice::from_raw_parts_mut(points, k) };
        dst.copy_from_slice(&chain.points);
        Ok(())
    })
}

/// Track S and S₁ over [t_start, t_end].
#[no_mangle]
pub unsafe extern "C" fn ll_phase_track_new(
    t_start: f64,
    t_end: f64,
    tol: f64,
    out: *mut *mut LlPhaseTrack,
) -> LlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let track = zeta::build_phase_track(t_start, t_end, tol)?;
        write(
            out,
            "out",
            Box::into_raw(Box::new(LlPhaseTrack { inner: track })),
        )
    })
}

/// Release a phase track; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ll_phase_track_free(track: *mut LlPhaseTrack) {
    if !track.is_null() {
        // SAFETY: produced by `Box::into_raw` in `ll_phase_track_new`.
        drop(unsafe { Box::from_raw(track) });
    }
}

/// The interval covered by a track.
#[no_mangle]
pub unsafe extern "C" fn ll_phase_track_range(
    track: *const LlPhaseTrack,
    lo_out: *mut f64,
    hi_out: *mut f64,
) -> LlStatus {
    guard(|| {
        let tr = track_ref(track)?;
        write(lo_out, "lo_out", tr.anchor_t())?;
        write(hi_out, "hi_out", tr.end_t())
    })
}

/// S(t).
#[no_mangle]
pub unsafe extern "C" fn ll_phase_track_s(
    track: *const LlPhaseTrack,
    t: f64,
    out: *mut f64,
) -> LlStatus {
    guard(|| write(out, "out", zeta::s_of_t(track_ref(track)?, t)?))
}

/// S₁(t).
#[no_mangle]
pub unsafe extern "C" fn ll_phase_track_s1(
    track: *const LlPhaseTrack,
    t: f64,
    out: *mut f64,
) -> LlStatus {
    guard(|| write(out, "out", zeta::s1_of_t(track_ref(track)?, t)?))
}

/// Number of zeros with ordinate in (0, t].
#[no_mangle]
pub unsafe extern "C" fn ll_phase_track_zero_count(
    track: *const LlPhaseTrack,
    t: f64,
    out: *mut u64,
) -> LlStatus {
    guard(|| {
        let tr = track_ref(track)?;
        if !tr.covers(t, t) {
            return Err(Failure {
                status: LlStatus::Coverage,
                message: format!(
                    "t = {t} outside the track [{}, {}]",
                    tr.anchor_t(),
                    tr.end_t()
                ),
            });
        }
        write(out, "out", tr.n_of_t(t))
    })
}
