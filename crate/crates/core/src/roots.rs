//! Bracketed root finding for monotone and sign-changing scalar functions.
//!
//! The workhorse is the Illinois variant of regula falsi with a bisection
//! safeguard: whenever two consecutive iterations fail to halve the bracket,
//! the next point is the midpoint.

use crate::{Error, Result};

/// Outcome of a bracketed solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub lo: f64,
    pub hi: f64,
    pub evals: usize,
}

/// Stopping rule: stop when |f| ≤ `ftol` or the bracket is narrower than `xtol`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub xtol: f64,
    pub ftol: f64,
    pub max_evals: usize,
}

impl Tolerance {
    pub fn new(xtol: f64, ftol: f64) -> Self {
        Self {
            xtol,
            ftol,
            max_evals: 200,
        }
    }
}

/// Refine a root of `f` inside `[a, b]` given `fa = f(a)`, `fb = f(b)` of
/// opposite signs (or one of them zero).
pub fn illinois<F>(mut f: F, a: f64, fa: f64, b: f64, fb: f64, tol: Tolerance) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut fa, mut b, mut fb) = if a <= b {
        (a, fa, b, fb)
    } else {
        (b, fb, a, fa)
    };
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            fx: 0.0,
            lo: a,
            hi: a,
            evals: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            fx: 0.0,
            lo: b,
            hi: b,
            evals: 0,
        });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Bracket {
            lo: a,
            hi: b,
            context: "refining a root".into(),
        });
    }

    let mut evals = 0;
    let mut side = 0i8;
    let mut stalls = 0;
    let mut best = if fa.abs() < fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    while evals < tol.max_evals {
        let width = b - a;
        if width <= tol.xtol || best.1.abs() <= tol.ftol {
            break;
        }
        let mut x = if stalls >= 2 {
            stalls = 0;
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        evals += 1;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            return Ok(Root {
                x,
                fx,
                lo: x,
                hi: x,
                evals,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width {
            stalls += 1;
        } else {
            stalls = 0;
        }
    }
    if b - a > tol.xtol && best.1.abs() > tol.ftol {
        return Err(Error::Budget {
            budget: tol.max_evals,
            context: format!("refining a root in [{a}, {b}]"),
        });
    }
    Ok(Root {
        x: best.0,
        fx: best.1,
        lo: a,
        hi: b,
        evals,
    })
}

/// Solve `f(x) = 0` for a nondecreasing `f`, starting from the guess window
/// `[lo, hi]`. The window is widened geometrically (never below `floor`)
/// until it brackets the root, at most `max_widen` times.
pub fn solve_increasing<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    floor: f64,
    max_widen: usize,
    tol: Tolerance,
    context: &str,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (lo.max(floor), hi);
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    let mut evals = 2;
    let mut widen = 0;
    while flo > 0.0 || fhi < 0.0 {
        if widen == max_widen {
            return Err(Error::Bracket {
                lo,
                hi,
                context: context.to_string(),
            });
        }
        let width = hi - lo;
        if flo > 0.0 {
            hi = lo;
            fhi = flo;
            lo = (lo - 2.0 * width).max(floor);
            flo = f(lo)?;
            if lo == floor && flo > 0.0 {
                return Err(Error::Bracket {
                    lo,
                    hi,
                    context: context.to_string(),
                });
            }
        } else {
            lo = hi;
            flo = fhi;
            hi += 2.0 * width;
            fhi = f(hi)?;
        }
        evals += 1;
        widen += 1;
    }
    let mut root = illinois(f, lo, flo, hi, fhi, tol)?;
    root.evals += evals;
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let r = illinois(f, 0.0, -2.0, 2.0, 6.0, Tolerance::new(1e-14, 0.0)).unwrap();
        assert!((r.x - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_bracket() {
        let f = |x: f64| Ok(x * x + 1.0);
        assert!(illinois(f, -1.0, 2.0, 1.0, 2.0, Tolerance::new(1e-12, 0.0)).is_err());
    }

    #[test]
    fn widens_until_bracketed() {
        let f = |x: f64| Ok(x.ln() - 5.0);
        let r = solve_increasing(f, 1.0, 2.0, 0.5, 20, Tolerance::new(1e-12, 1e-14), "ln").unwrap();
        assert!((r.x - 5f64.exp()).abs() < 1e-9);
        let down = solve_increasing(
            |x| Ok(x - 0.7),
            5.0,
            6.0,
            0.0,
            20,
            Tolerance::new(1e-13, 0.0),
            "down",
        )
        .unwrap();
        assert!((down.x - 0.7).abs() < 1e-12);
    }

    #[test]
    fn gives_up_after_widening_budget() {
        let r = solve_increasing(
            |x| Ok(x - 1e9),
            0.0,
            1.0,
            0.0,
            3,
            Tolerance::new(1e-9, 0.0),
            "far",
        );
        assert!(matches!(r, Err(Error::Bracket { .. })));
    }
}
