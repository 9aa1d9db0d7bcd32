//! Bracketing root search for monotone scalar functions.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct BisectConfig {
    /// Absolute tolerance on `|f(x)|`.
    pub f_tol: f64,
    /// Relative tolerance on the bracket width.
    pub x_rel_tol: f64,
    pub max_iter: usize,
}

impl Default for BisectConfig {
    fn default() -> Self {
        Self {
            f_tol: 0.0,
            x_rel_tol: 1e-13,
            max_iter: 200,
        }
    }
}

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs (or
/// one of them vanishes). Stops when `|f| ≤ f_tol` or the bracket shrinks
/// below `x_rel_tol` relative to its location.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, cfg: &BisectConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = f(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid.abs() <= cfg.f_tol || f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        if (hi - lo).abs() <= cfg.x_rel_tol * scale {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scan `candidates` in order and return the first adjacent pair across which
/// `f` changes sign.
pub fn first_bracket<F>(mut f: F, candidates: &[f64]) -> Result<Option<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Some((&first, rest)) = candidates.split_first() else {
        return Ok(None);
    };
    let mut prev = (first, f(first)?);
    if prev.1 == 0.0 {
        return Ok(Some((first, first)));
    }
    for &x in rest {
        let fx = f(x)?;
        if fx == 0.0 || fx.signum() != prev.1.signum() {
            return Ok(Some((prev.0, x)));
        }
        prev = (x, fx);
    }
    Ok(None)
}
