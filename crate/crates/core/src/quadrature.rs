//! Adaptive integration of critical-line integrands.
//!
//! [`integrate`] is a general global-adaptive Gauss–Kronrod (10/21) driver.
//! [`HlIntegrator`] evaluates the Hardy–Littlewood integral
//! J(x) = ∫₀ˣ |ζ(1/2+it)|² dt from a table of unit panels: each panel
//! [n, n+1] is split into subpanels whose width follows the oscillation scale
//! of |ζ|², integrated with locally adaptive GK21, and accumulated into a
//! compensated prefix table. J(b) − J(a) is then a table lookup plus two
//! partial panels, so increments over adjacent intervals telescope exactly.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::zeta::cache::{z_via, SampleCache};
use crate::zeta::{s1_head, PhaseTrack};
use crate::{Error, Result, DEFAULT_T_CAP};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_482_503_961_280,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Default relative tolerance for [`hl_integral`].
pub const HL_TOL: f64 = 1e-6;
/// Default relative tolerance for S₁ moments.
pub const MOMENT_TOL: f64 = 1e-4;

/// A definite integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub err_est: f64,
    pub evals: u64,
    pub interval: (f64, f64),
    pub converged: bool,
}

impl IntegralResult {
    pub fn empty(at: f64) -> Self {
        Self {
            value: 0.0,
            err_est: 0.0,
            evals: 0,
            interval: (at, at),
            converged: true,
        }
    }
}

/// One GK21 application: (Kronrod value, |Kronrod − Gauss|).
#[inline]
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = a + half;
    let fc = f(center);
    // normalising by the weight sum, accumulated in the same order, makes
    // constants integrate exactly
    let mut wsum = WGK[10];
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        wsum += WGK[j] * 2.0;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let kronrod = kronrod / wsum;
    (
        kronrod * (2.0 * half),
        ((kronrod - gauss * 0.5) * (2.0 * half)).abs(),
    )
}

/// Knobs for [`integrate_with`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub tol: f64,
    /// Maximum integrand evaluations.
    pub budget: u64,
    /// Panels the interval is cut into before adaptation starts.
    pub initial_panels: usize,
}

impl QuadOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            budget: 2_000_000,
            initial_panels: 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// ∫ₐᵇ f with target |error| ≤ max(tol·|value|, tol).
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    integrate_with(f, a, b, QuadOptions::new(tol))
}

/// Global adaptive GK21: the segment with the largest error estimate is
/// bisected until the total estimate meets the target or the budget runs out,
/// in which case the partial result comes back with `converged = false`.
pub fn integrate_with<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<IntegralResult> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integrate", b, "finite a <= b"));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::config("tol", "must be positive"));
    }
    if a == b {
        return Ok(IntegralResult::empty(a));
    }
    let panels = opts.initial_panels.max(1);
    let h = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels * 2);
    let mut evals = 0u64;
    for i in 0..panels {
        let lo = a + h * i as f64;
        let hi = if i + 1 == panels {
            b
        } else {
            a + h * (i + 1) as f64
        };
        let (value, err) = gk21(&mut f, lo, hi);
        evals += 21;
        heap.push(Segment {
            a: lo,
            b: hi,
            value,
            err,
        });
    }
    let totals = |heap: &BinaryHeap<Segment>| {
        let mut v: Vec<&Segment> = heap.iter().collect();
        v.sort_by(|x, y| x.a.total_cmp(&y.a));
        let value: f64 = v.iter().map(|s| s.value).sum();
        let err: f64 = v.iter().map(|s| s.err).sum();
        (value, err)
    };
    let mut value: f64 = heap.iter().map(|s| s.value).sum();
    let mut err: f64 = heap.iter().map(|s| s.err).sum();
    let mut converged = true;
    while err > (opts.tol * value.abs()).max(opts.tol) {
        if evals + 42 > opts.budget {
            converged = false;
            break;
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            converged = false;
            break;
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        evals += 42;
        value += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
    }
    let (value, err) = totals(&heap);
    Ok(IntegralResult {
        value,
        err_est: err,
        evals,
        interval: (a, b),
        converged,
    })
}

/// Locally adaptive GK21: bisect until each piece meets `abs_tol` scaled by
/// its share of the interval. Returns (value, err, evals, converged).
fn local_adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    depth: u32,
) -> (f64, f64, u64, bool) {
    let (v, e) = gk21(f, a, b);
    if e <= abs_tol || depth == 0 {
        return (v, e, 21, e <= abs_tol);
    }
    let mid = 0.5 * (a + b);
    let (v1, e1, n1, c1) = local_adaptive(f, a, mid, 0.5 * abs_tol, depth - 1);
    let (v2, e2, n2, c2) = local_adaptive(f, mid, b, 0.5 * abs_tol, depth - 1);
    (v1 + v2, e1 + e2, 21 + n1 + n2, c1 && c2)
}

/// Mean of |ζ(1/2+it)|² near t, to first order; used to scale tolerances.
#[inline]
fn mean_mod_sq(t: f64) -> f64 {
    ((t / (2.0 * PI)).ln() + 2.0 * crate::EULER_GAMMA).max(1.0)
}

/// Subpanels per unit length near t, following the zero density ln(t/2π)/2π.
#[inline]
fn subpanels_per_unit(t: f64) -> usize {
    ((t / (2.0 * PI)).ln().max(1.0) / 4.0).ceil().max(1.0) as usize
}

const MAX_DEPTH: u32 = 12;

#[derive(Debug, Clone, Copy, Default)]
struct Panel {
    value: f64,
    err: f64,
    evals: u64,
    converged: bool,
}

#[derive(Debug, Default)]
struct PrefixTable {
    // J(n) = hi[n] + lo[n] (double-double accumulation)
    hi: Vec<f64>,
    lo: Vec<f64>,
    err: Vec<f64>,
    evals: Vec<u64>,
    converged: Vec<bool>,
}

impl PrefixTable {
    fn new() -> Self {
        Self {
            hi: vec![0.0],
            lo: vec![0.0],
            err: vec![0.0],
            evals: vec![0],
            converged: vec![true],
        }
    }

    fn len(&self) -> usize {
        self.hi.len() - 1
    }

    fn push(&mut self, p: Panel) {
        let n = self.len();
        let (s, e) = two_sum(self.hi[n], p.value);
        let lo = self.lo[n] + e;
        let (hi, lo) = two_sum(s, lo);
        self.hi.push(hi);
        self.lo.push(lo);
        self.err.push(self.err[n] + p.err);
        self.evals.push(self.evals[n] + p.evals);
        self.converged.push(self.converged[n] && p.converged);
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Hardy–Littlewood integral engine with a lazily extended prefix table.
#[derive(Debug)]
pub struct HlIntegrator {
    tol: f64,
    t_cap: f64,
    cache: Option<Arc<SampleCache>>,
    table: Mutex<PrefixTable>,
}

impl HlIntegrator {
    pub fn new(tol: f64) -> Self {
        Self::with_options(tol, DEFAULT_T_CAP, None)
    }

    pub fn with_options(tol: f64, t_cap: f64, cache: Option<Arc<SampleCache>>) -> Self {
        Self {
            tol,
            t_cap,
            cache,
            table: Mutex::new(PrefixTable::new()),
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn t_cap(&self) -> f64 {
        self.t_cap
    }

    pub fn cache(&self) -> Option<&Arc<SampleCache>> {
        self.cache.as_ref()
    }

    #[inline]
    fn mod_sq(&self, t: f64) -> f64 {
        let z = z_via(self.cache.as_deref(), t);
        z * z
    }

    /// Node layout of the first pass over [a, b] (before any bisection).
    fn pieces(a: f64, b: f64) -> Vec<(f64, f64)> {
        let q = subpanels_per_unit(b);
        let m = (((b - a) * q as f64).ceil() as usize).max(1);
        let h = (b - a) / m as f64;
        (0..m)
            .map(|j| {
                let lo = a + h * j as f64;
                let hi = if j + 1 == m {
                    b
                } else {
                    a + h * (j + 1) as f64
                };
                (lo, hi)
            })
            .collect()
    }

    fn integrate_piecewise(&self, a: f64, b: f64) -> Panel {
        let scale = mean_mod_sq(b);
        let mut panel = Panel {
            converged: true,
            ..Panel::default()
        };
        let mut f = |t: f64| self.mod_sq(t);
        for (lo, hi) in Self::pieces(a, b) {
            let abs_tol = 0.1 * self.tol * scale * (hi - lo);
            let (v, e, n, c) = local_adaptive(&mut f, lo, hi, abs_tol, MAX_DEPTH);
            panel.value += v;
            panel.err += e;
            panel.evals += n;
            panel.converged &= c;
        }
        panel
    }

    /// The GK21 nodes of the first pass over the unit panels meeting [a, b].
    pub fn nominal_nodes(&self, a: f64, b: f64) -> Vec<f64> {
        let first = a.max(0.0).floor() as usize;
        let last = b.min(self.t_cap).ceil() as usize;
        let mut nodes = Vec::new();
        for n in first..last {
            for (lo, hi) in Self::pieces(n as f64, (n + 1) as f64) {
                let half = 0.5 * (hi - lo);
                let center = lo + half;
                nodes.push(center);
                for x in XGK.iter().take(10) {
                    nodes.push(center - half * x);
                    nodes.push(center + half * x);
                }
            }
        }
        nodes
    }

    fn ensure(&self, n: usize) {
        let have = self.table.lock().expect("table lock").len();
        if have >= n {
            return;
        }
        const CHUNK: usize = 4096;
        let mut start = have;
        while start < n {
            let end = (start + CHUNK).min(n);
            let panels: Vec<Panel> = (start..end)
                .into_par_iter()
                .map(|i| self.integrate_piecewise(i as f64, (i + 1) as f64))
                .collect();
            let mut table = self.table.lock().expect("table lock");
            // another thread may have extended the table meanwhile
            for (offset, p) in panels.into_iter().enumerate() {
                if table.len() == start + offset {
                    table.push(p);
                }
            }
            start = table.len().max(end);
        }
    }

    fn check_range(&self, a: f64, b: f64) -> Result<()> {
        if !(a >= 0.0) || !(b >= a) || !b.is_finite() {
            return Err(Error::domain("hl_integral", a, "0 <= a <= b"));
        }
        if b > self.t_cap {
            return Err(Error::Coverage {
                a,
                b,
                lo: 0.0,
                hi: self.t_cap,
            });
        }
        Ok(())
    }

    /// J(x) split as (hi, lo, prefix err, partial err, evals, converged).
    fn j_parts(&self, x: f64) -> (f64, f64, f64, f64, u64, bool) {
        let n = x.floor() as usize;
        self.ensure(n);
        let (hi, lo, err, evals, conv) = {
            let t = self.table.lock().expect("table lock");
            (t.hi[n], t.lo[n], t.err[n], t.evals[n], t.converged[n])
        };
        let frac = x - n as f64;
        if frac == 0.0 {
            return (hi, lo, err, 0.0, evals, conv);
        }
        let p = self.integrate_piecewise(n as f64, x);
        let (s, e) = two_sum(hi, p.value);
        (s, lo + e, err, p.err, evals + p.evals, conv && p.converged)
    }

    /// J(x) = ∫₀ˣ |ζ(1/2+it)|² dt.
    pub fn j(&self, x: f64) -> Result<IntegralResult> {
        self.check_range(0.0, x)?;
        let (hi, lo, err, partial, evals, converged) = self.j_parts(x);
        Ok(IntegralResult {
            value: hi + lo,
            err_est: err + partial,
            evals,
            interval: (0.0, x),
            converged,
        })
    }

    /// J(b) − J(a).
    pub fn integral(&self, a: f64, b: f64) -> Result<IntegralResult> {
        self.check_range(a, b)?;
        if a == b {
            return Ok(IntegralResult::empty(a));
        }
        let (bh, bl, be, bp, bn, bc) = self.j_parts(b);
        let (ah, al, ae, ap, an, ac) = self.j_parts(a);
        let value = (bh - ah) + (bl - al);
        let err = (be - ae).abs() + bp + ap;
        Ok(IntegralResult {
            value,
            err_est: err,
            evals: bn.saturating_sub(an),
            interval: (a, b),
            converged: bc && ac,
        })
    }

    /// Number of unit panels already tabulated.
    pub fn tabulated(&self) -> usize {
        self.table.lock().expect("table lock").len()
    }
}

fn shared_engines() -> &'static Mutex<HashMap<u64, Arc<HlIntegrator>>> {
    static ENGINES: OnceLock<Mutex<HashMap<u64, Arc<HlIntegrator>>>> = OnceLock::new();
    ENGINES.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The process-wide engine for a tolerance (no disk cache, default cap).
pub fn shared_engine(tol: f64) -> Arc<HlIntegrator> {
    let mut map = shared_engines().lock().expect("engine registry");
    map.entry(tol.to_bits())
        .or_insert_with(|| Arc::new(HlIntegrator::new(tol)))
        .clone()
}

/// ∫ₐᵇ |ζ(1/2+it)|² dt through the shared engine for `tol`.
pub fn hl_integral(a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    if !(tol > 0.0) {
        return Err(Error::config("tol", "must be positive"));
    }
    shared_engine(tol).integral(a, b)
}

/// ∫ₐᵇ |S₁(t)|^{2l} dt over a phase track. The interval is split at every
/// zero, where S₁ has a kink, and each smooth piece is integrated adaptively.
pub fn s1_moment(track: &PhaseTrack, a: f64, b: f64, l: u32, tol: f64) -> Result<IntegralResult> {
    if l == 0 {
        return Err(Error::Index("moment order l must be positive".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::config("tol", "must be positive"));
    }
    if !(b >= a) {
        return Err(Error::domain("s1_moment", b, "b >= a"));
    }
    track.check_covers(a, b)?;
    if a == b {
        return Ok(IntegralResult::empty(a));
    }
    let power = 2 * l as i32;
    let mut cuts = vec![a];
    cuts.extend(track.zeros_between(a, b).iter().copied().filter(|&g| g < b));
    cuts.push(b);

    let s1_at = |t: f64| crate::zeta::s1_of_t(track, t).unwrap_or(f64::NAN);
    let mut value = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    let mut converged = true;
    let mut f = |t: f64| s1_at(t).powi(power);
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let (v, e) = gk21(&mut f, lo, hi);
        let (v, e, n, c) = if e <= tol * v.abs() + 1e-15 * (hi - lo) {
            (v, e, 21, true)
        } else {
            let (v2, e2, n2, c2) =
                local_adaptive(&mut f, lo, hi, tol * v.abs() + 1e-15 * (hi - lo), MAX_DEPTH);
            (v2, e2, 21 + n2, c2)
        };
        value += v;
        err += e;
        evals += n;
        converged &= c;
    }
    Ok(IntegralResult {
        value,
        err_est: err,
        evals,
        interval: (a, b),
        converged,
    })
}

/// ∫₀ᵇ |S₁(t)|^{2l} dt for b ≤ 10, where S₁ comes from the low-t branch.
pub fn s1_head_moment(b: f64, l: u32, tol: f64) -> Result<IntegralResult> {
    if !(0.0..=10.0).contains(&b) {
        return Err(Error::domain("s1_head_moment", b, "0 <= b <= 10"));
    }
    let power = 2 * l as i32;
    integrate(
        |t| s1_head(t).unwrap_or(f64::NAN).powi(power),
        0.0,
        b,
        tol * 1e-3,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_reciprocal() {
        let r = integrate(|_| 1.0, 0.0, 10.0, 1e-12).unwrap();
        assert_eq!(r.value, 10.0);
        let r = integrate(|t| 1.0 / t, 1.0, 100.0, 1e-10).unwrap();
        assert!((r.value - 100f64.ln()).abs() < 1e-10);
        assert!(r.converged);
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|t| t, 3.0, 3.0, 1e-9).unwrap();
        assert_eq!((r.value, r.err_est, r.evals), (0.0, 0.0, 0));
        assert!(integrate(|t| t, 3.0, 2.0, 1e-9).is_err());
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let opts = QuadOptions {
            tol: 1e-14,
            budget: 100,
            initial_panels: 1,
        };
        let r = integrate_with(|t| (50.0 * t).sin().abs(), 0.0, 10.0, opts).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn hl_low_range_and_empty() {
        let engine = HlIntegrator::new(1e-9);
        assert_eq!(engine.integral(1000.0, 1000.0).unwrap().value, 0.0);
        let head = engine.integral(0.0, 10.0).unwrap();
        let direct = integrate(|t| crate::zeta::zeta_mod_sq(t).unwrap(), 0.0, 10.0, 1e-12).unwrap();
        assert!((head.value - direct.value).abs() < 1e-9 * direct.value);
    }

    #[test]
    fn hl_matches_direct_integration() {
        let engine = HlIntegrator::new(1e-9);
        let r = engine.integral(137.3, 151.9).unwrap();
        let mut opts = QuadOptions::new(1e-12);
        opts.initial_panels = 40;
        let direct =
            integrate_with(|t| crate::zeta::zeta_mod_sq(t).unwrap(), 137.3, 151.9, opts).unwrap();
        assert!((r.value - direct.value).abs() < 1e-9 * direct.value);
    }

    #[test]
    fn hl_respects_cap() {
        let engine = HlIntegrator::with_options(1e-6, 500.0, None);
        assert!(matches!(
            engine.integral(0.0, 600.0),
            Err(Error::Coverage { .. })
        ));
    }
}
