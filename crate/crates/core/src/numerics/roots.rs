use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo < hi && lo.is_finite() && hi.is_finite() {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidBracket {
                lo,
                hi,
                reason: "need finite lo < hi".into(),
            })
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

const MAX_ITER: usize = 500;

/// Root of `f` inside a sign-changing bracket.
///
/// Secant steps are taken while they stay strictly inside the bracket, but
/// every second iteration is a plain bisection so the width at least halves
/// each two steps. Stops when the bracket is narrower than `tol` or an exact
/// zero is hit; the result always lies in `[b.lo, b.hi]`.
pub fn find_root_bracketed<F>(f: F, b: Bracket, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let Bracket { mut lo, mut hi } = Bracket::new(b.lo, b.hi)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("root tolerance must be > 0, got {tol}")));
    }
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_nan() {
            Err(Error::NonFinite { x })
        } else {
            Ok(y)
        }
    };
    let mut f_lo = eval(lo)?;
    let mut f_hi = eval(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            reason: format!("no sign change (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})"),
        });
    }

    for iter in 0..MAX_ITER {
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let mut x = mid;
        if iter % 2 == 0 && f_lo.is_finite() && f_hi.is_finite() {
            let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if secant > lo && secant < hi {
                x = secant;
            }
        }
        if x <= lo || x >= hi {
            // Floating-point resolution exhausted.
            return Ok(mid);
        }
        let fx = eval(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
    }
    Err(Error::NonConvergence(format!(
        "root finder exceeded {MAX_ITER} iterations on [{lo}, {hi}]"
    )))
}
