//! Legendre systems generated by ladder automorphisms of [−1, 1].
//!
//! For a base T and an iteration count p, the affine map
//! A_p(t) = T̂ᵖ + ((T+2)̂ᵖ − T̂ᵖ)(t + 1)/2 sends [−1, 1] onto the reverse
//! images of [T, T+2], and u_p(t) = φ₁ᵖ(A_p(t)) − T − 1 is an increasing
//! bijection of [−1, 1]. Because du_p/dt = A_p' Π_{r<p} Z̃²(v_p^r(t)), the
//! weighted members P_n(u(t)) Π|Z̃| stay orthogonal, with Gram diagonal
//! 2/((2n+1) Π A').

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ladder::{Ladder, LadderConfig, ReverseMethod};
use crate::{Error, Result};

/// The three ladder operations the generator needs.
pub trait LadderMap: Sync {
    /// φ₁(t).
    fn forward(&self, t: f64) -> Result<f64>;
    /// The reverse step t ↦ t¹ with φ₁(t¹) = t.
    fn reverse(&self, t: f64) -> Result<f64>;
    /// dφ₁/dt = Z̃²(t).
    fn derivative(&self, t: f64) -> Result<f64>;

    fn forward_iter(&self, t: f64, k: usize) -> Result<f64> {
        (0..k).try_fold(t, |x, _| self.forward(x))
    }

    fn reverse_iter(&self, t: f64, k: usize) -> Result<f64> {
        (0..k).try_fold(t, |x, _| self.reverse(x))
    }
}

impl LadderMap for Ladder {
    fn forward(&self, t: f64) -> Result<f64> {
        self.phi1_raw(t)
    }

    fn reverse(&self, t: f64) -> Result<f64> {
        self.reverse_step_raw(t, ReverseMethod::MaintermInvert)
    }

    fn derivative(&self, t: f64) -> Result<f64> {
        self.tilde_z_sq_raw(t)
    }
}

/// φ₁ = id; the generated system collapses to the classical one.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityLadder;

impl LadderMap for IdentityLadder {
    fn forward(&self, t: f64) -> Result<f64> {
        Ok(t)
    }

    fn reverse(&self, t: f64) -> Result<f64> {
        Ok(t)
    }

    fn derivative(&self, _t: f64) -> Result<f64> {
        Ok(1.0)
    }
}

/// Parameters of a generated system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSpec {
    pub t: f64,
    /// (p₁, p₂, p₃) truncated to the given length; u_{p₁} is applied last.
    pub p_list: Vec<usize>,
    pub n_max: usize,
    pub ladder_cfg: LadderConfig,
    /// Composite Gauss–Legendre panels over [−1, 1].
    pub panels: usize,
}

impl GenerationSpec {
    pub fn new(t: f64, p_list: Vec<usize>, n_max: usize) -> Self {
        Self {
            t,
            p_list,
            n_max,
            ladder_cfg: LadderConfig::default(),
            panels: 128,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ladder_cfg.validate()?;
        if !(self.t >= self.ladder_cfg.t0) {
            return Err(Error::config("T", "must be at least the ladder T0"));
        }
        if self.p_list.is_empty() || self.p_list.len() > 3 {
            return Err(Error::config("p_list", "needs one to three entries"));
        }
        if self
            .p_list
            .iter()
            .any(|&p| p == 0 || p > self.ladder_cfg.k_max)
        {
            return Err(Error::config("p_list", "entries must lie in 1..=k_max"));
        }
        if self.panels == 0 {
            return Err(Error::config("panels", "must be positive"));
        }
        Ok(())
    }
}

/// Ends of [T̂ᵖ, (T+2)̂ᵖ].
#[derive(Debug, Clone, Copy, PartialEq)]
struct Window {
    p: usize,
    lo: f64,
    hi: f64,
}

/// Automorphisms and members for a fixed base T.
pub struct Generator<'a, L: LadderMap> {
    map: &'a L,
    t: f64,
    windows: Vec<Window>,
}

impl<'a, L: LadderMap> Generator<'a, L> {
    pub fn new(map: &'a L, t: f64, p_list: &[usize]) -> Result<Self> {
        let mut windows: Vec<Window> = Vec::new();
        for &p in p_list {
            if p == 0 {
                return Err(Error::Index("iteration count p must be positive".into()));
            }
            if windows.iter().all(|w| w.p != p) {
                windows.push(Window {
                    p,
                    lo: map.reverse_iter(t, p)?,
                    hi: map.reverse_iter(t + 2.0, p)?,
                });
            }
        }
        Ok(Self { map, t, windows })
    }

    fn window(&self, p: usize) -> Result<Window> {
        self.windows
            .iter()
            .copied()
            .find(|w| w.p == p)
            .ok_or_else(|| Error::Index(format!("p = {p} was not prepared")))
    }

    /// A_p(t) ∈ [T̂ᵖ, (T+2)̂ᵖ].
    pub fn affine_to_iterated(&self, t: f64, p: usize) -> Result<f64> {
        let w = self.window(p)?;
        Ok(w.lo + 0.5 * (w.hi - w.lo) * (t + 1.0))
    }

    /// A_p'.
    pub fn affine_slope(&self, p: usize) -> Result<f64> {
        let w = self.window(p)?;
        Ok(0.5 * (w.hi - w.lo))
    }

    /// u_p(t) = φ₁ᵖ(A_p(t)) − T − 1.
    pub fn u_p(&self, t: f64, p: usize) -> Result<f64> {
        Ok(self.map.forward_iter(self.affine_to_iterated(t, p)?, p)? - self.t - 1.0)
    }

    /// v_p^r(t) = φ₁ʳ(A_p(t)), checked against [T̂^{p−r}, (T+2)̂^{p−r}].
    pub fn v_p_r(&self, t: f64, p: usize, r: usize) -> Result<f64> {
        if r >= p {
            return Err(Error::Index(format!("need r < p, got r = {r}, p = {p}")));
        }
        let v = self.map.forward_iter(self.affine_to_iterated(t, p)?, r)?;
        let lo = self.map.reverse_iter(self.t, p - r)?;
        let hi = self.map.reverse_iter(self.t + 2.0, p - r)?;
        let slack = 1e-9 * hi;
        if v < lo - slack || v > hi + slack {
            return Err(Error::Consistency(format!(
                "v_p^r = {v} outside [{lo}, {hi}] (p = {p}, r = {r})"
            )));
        }
        Ok(v)
    }

    /// One automorphism with its weight: (u_p(t), Π_{r<p} Z̃²(v_p^r(t))).
    fn step(&self, t: f64, p: usize) -> Result<(f64, f64)> {
        let mut v = self.affine_to_iterated(t, p)?;
        let mut weight = 1.0;
        for _ in 0..p {
            weight *= self.map.derivative(v)?;
            v = self.map.forward(v)?;
        }
        Ok((v - self.t - 1.0, weight))
    }

    /// Composite argument u_{p₁}(u_{p₂}(u_{p₃}(t))) and the squared weight,
    /// the product of every Z̃² factor met along the way.
    pub fn argument_and_weight(&self, t: f64, p_list: &[usize]) -> Result<(f64, f64)> {
        let mut s = t;
        let mut weight = 1.0;
        for &p in p_list.iter().rev() {
            let (u, w) = self.step(s, p)?;
            s = u;
            weight *= w;
        }
        Ok((s, weight))
    }

    /// P_n(u_{p₁}(u_{p₂}(u_{p₃}(t)))) times the |Z̃| products.
    pub fn generated_member(&self, n: usize, p_list: &[usize], t: f64) -> Result<f64> {
        let (u, w) = self.argument_and_weight(t, p_list)?;
        Ok(legendre(n, u) * w.sqrt())
    }

    /// Π A'_{pᵢ} over `p_list`.
    pub fn jacobian_scale(&self, p_list: &[usize]) -> Result<f64> {
        p_list
            .iter()
            .try_fold(1.0, |acc, &p| Ok(acc * self.affine_slope(p)?))
    }
}

/// P_n(x) by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> f64 {
    legendre_all(n, x)[n]
}

/// P_0(x), …, P_n(x).
pub fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n >= 1 {
        p.push(x);
    }
    for k in 1..n {
        let kf = k as f64;
        p.push(((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0));
    }
    p
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton on P_m.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 1..m {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = mf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Points per composite panel.
const GL_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    /// Row-major (n_max+1)² entries ∫₋₁¹ member_n member_m dt.
    pub matrix: Vec<Vec<f64>>,
    /// Mean of G_nn(2n+1)/2.
    pub diag_scale: f64,
    /// 1/Π A', the scale predicted by the change of variables.
    pub expected_scale: f64,
    /// max |G_nm|/√(G_nn G_mm) over n ≠ m.
    pub max_offdiag_rel: f64,
    /// max_n |G_nn(2n+1)/2 / diag_scale − 1|.
    pub diag_spread: f64,
    pub max_asymmetry: f64,
    pub nodes: usize,
}

/// Gram matrix of the generated system for a ladder map.
pub fn gram_matrix_with<L: LadderMap>(map: &L, spec: &GenerationSpec) -> Result<GramReport> {
    if spec.p_list.is_empty() || spec.panels == 0 {
        return Err(Error::config(
            "spec",
            "needs a p_list and at least one panel",
        ));
    }
    let generator = Generator::new(map, spec.t, &spec.p_list)?;
    let (gx, gw) = gauss_legendre(GL_POINTS);
    let h = 2.0 / spec.panels as f64;
    let points: Vec<(f64, f64)> = (0..spec.panels)
        .flat_map(|j| {
            let mid = -1.0 + h * (j as f64 + 0.5);
            gx.iter()
                .zip(&gw)
                .map(move |(x, w)| (mid + 0.5 * h * x, 0.5 * h * w))
                .collect::<Vec<_>>()
        })
        .collect();
    let n = spec.n_max;
    let rows: Vec<(f64, Vec<f64>)> = points
        .par_iter()
        .map(|&(t, w)| {
            let (u, weight) = generator.argument_and_weight(t, &spec.p_list)?;
            Ok((w * weight, legendre_all(n, u)))
        })
        .collect::<Result<_>>()?;
    let mut g = vec![vec![0.0; n + 1]; n + 1];
    for (w, p) in &rows {
        for i in 0..=n {
            for j in 0..=n {
                g[i][j] += w * p[i] * p[j];
            }
        }
    }
    let mut max_offdiag_rel: f64 = 0.0;
    let mut max_asymmetry: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                let rel = g[i][j].abs() / (g[i][i] * g[j][j]).sqrt();
                max_offdiag_rel = max_offdiag_rel.max(rel);
                max_asymmetry = max_asymmetry.max((g[i][j] - g[j][i]).abs());
            }
        }
    }
    let scaled: Vec<f64> = (0..=n)
        .map(|i| g[i][i] * (2 * i + 1) as f64 / 2.0)
        .collect();
    let diag_scale = scaled.iter().sum::<f64>() / scaled.len() as f64;
    let diag_spread = scaled
        .iter()
        .map(|s| (s / diag_scale - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(GramReport {
        matrix: g,
        diag_scale,
        expected_scale: 1.0 / generator.jacobian_scale(&spec.p_list)?,
        max_offdiag_rel,
        diag_spread,
        max_asymmetry,
        nodes: points.len(),
    })
}

/// Gram matrix of the generated system on the operational ladder.
pub fn gram_matrix(spec: &GenerationSpec) -> Result<GramReport> {
    spec.validate()?;
    let ladder = Ladder::new(spec.ladder_cfg)?;
    gram_matrix_with(&ladder, spec)
}
