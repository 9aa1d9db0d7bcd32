use serde::Serialize;

use super::period::{time_avg_p2, FringePoint};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::families::{cubic_chi, CubicFamily};
use crate::root::{bisect, BisectConfig};

/// A scan value of `T` that was left out, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPoint {
    #[serde(rename = "T")]
    pub t_final: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FringeScan {
    /// In increasing `T`.
    pub points: Vec<FringePoint>,
    pub skipped: Vec<SkippedPoint>,
}

/// Relative size of the interior minimum of `χ` below which the cubic is
/// treated as touching zero.
const TOUCH_TOL: f64 = 1e-9;

fn cubic_point(chi_t: f64, bx: f64, t_final: f64) -> Result<FringePoint> {
    let fam = CubicFamily::for_target(chi_t, bx, t_final)?;
    if let Some(m) = fam.interior_minimum() {
        if m <= TOUCH_TOL * chi_t {
            return Err(Error::InvalidAnsatz(format!(
                "cubic profile touches chi = 0 inside (0, {t_final})"
            )));
        }
    }
    time_avg_p2(&cubic_chi(fam), &fam.envelope(), t_final)
}

/// `P̄₂` of the cubic sweep ending at `chi_t` on `steps` uniformly spaced
/// durations in `[t_min, t_max]`. Durations outside the admissible window,
/// including the upper edge where the profile touches zero, are skipped
/// and reported; any other failure aborts the scan.
pub fn fringe_scan(
    chi_t: f64,
    bx: f64,
    (t_min, t_max): (f64, f64),
    steps: usize,
    exec: Exec,
) -> Result<FringeScan> {
    if !(t_min > 0.0 && t_max >= t_min && steps >= 1) {
        return Err(Error::InvalidParameter(format!(
            "bad scan range [{t_min}, {t_max}] with {steps} steps"
        )));
    }
    let ts: Vec<f64> = if steps == 1 {
        vec![t_min]
    } else {
        let h = (t_max - t_min) / (steps - 1) as f64;
        (0..steps)
            .map(|i| if i + 1 == steps { t_max } else { t_min + h * i as f64 })
            .collect()
    };
    let results = exec.map(&ts, |&t| cubic_point(chi_t, bx, t));
    let mut scan = FringeScan::default();
    for (t, r) in ts.into_iter().zip(results) {
        match r {
            Ok(p) => scan.points.push(p),
            Err(e @ (Error::OutOfBounds { .. } | Error::InvalidAnsatz(_))) => {
                scan.skipped.push(SkippedPoint {
                    t_final: t,
                    reason: e.to_string(),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(scan)
}

/// Durations where `sin 2ξ₀(T)` vanishes, i.e. the maxima of the fringe
/// pattern. Bracketed by sign changes between neighbouring scan points and
/// refined by bisection; makes no monotonicity assumption on `ξ₀(T)`.
pub fn fringe_peaks(chi_t: f64, bx: f64, scan: &FringeScan) -> Result<Vec<f64>> {
    let g = |t: f64| -> Result<f64> { Ok((2.0 * cubic_point(chi_t, bx, t)?.xi0_t).sin()) };
    let cfg = BisectConfig {
        f_tol: 1e-13,
        ..BisectConfig::default()
    };
    let mut peaks = Vec::new();
    let pts = &scan.points;
    for (i, p) in pts.iter().enumerate() {
        let s = (2.0 * p.xi0_t).sin();
        if s.abs() <= 1e-13 {
            peaks.push(p.t_final);
            continue;
        }
        if let Some(q) = pts.get(i + 1) {
            let sq = (2.0 * q.xi0_t).sin();
            if sq.abs() > 1e-13 && s.signum() != sq.signum() {
                peaks.push(bisect(g, p.t_final, q.t_final, &cfg)?);
            }
        }
    }
    Ok(peaks)
}
