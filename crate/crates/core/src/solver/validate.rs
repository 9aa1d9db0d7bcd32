//! Admissibility checks for a `χ` ansatz on a time grid.

use serde::Serialize;

use super::ansatz::ChiAnsatz;
use super::envelope::Envelope;
use super::{Local, CLAMP_TOL};
use crate::model::TimeGrid;

/// Gap below which a point counts as saturated.
const SATURATION_TOL: f64 = 1e-12;
/// `|sin 2χ|` below which a local minimum counts as a zero.
const ZERO_TOL: f64 = 1e-10;
/// Slack for `χ(0) = 0` and `χ̇(0) = -ηβ(0)`.
const INITIAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub t: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    /// `min (|β| - |χ̇|)` over the grid.
    pub qsl_margin: f64,
    pub saturation_points: Vec<f64>,
    /// Times `t > 0` at which `sin 2χ = 0`.
    pub zero_crossings: Vec<f64>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// Turns a failed report into [`crate::Error::InvalidAnsatz`].
    pub fn into_result(self) -> crate::Result<Self> {
        if self.ok {
            return Ok(self);
        }
        let first = &self.violations[0];
        Err(crate::Error::InvalidAnsatz(format!(
            "{} violation(s); first at t = {}: {}",
            self.violations.len(),
            first.t,
            first.reason
        )))
    }
}

/// Minimise `f` on `[a, b]` by golden-section search.
fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Locate a sign change of `f` on `[a, b]` by bisection.
fn refine_sign_change<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Check `χ` against the envelope on every grid point.
///
/// Reported problems:
/// * `|χ̇| > |β|` beyond the clamp tolerance;
/// * `χ(0) ≠ 0`, or `χ̇(0) ≠ -ηβ(0)` (which also cross-checks `η`);
/// * `sin 2χ = 0` at `t > 0` without simultaneous saturation, where `b_z`
///   diverges through `cot 2χ` — sign changes between grid points and
///   tangential touches are both located;
/// * isolated interior saturation points with `sin 2χ ≠ 0`, where the
///   principal branch of `√(1 - χ̇²/β²)` would have to be continued.
pub fn validate(chi: &dyn ChiAnsatz, env: &dyn Envelope, grid: &TimeGrid) -> ValidationReport {
    let eta = chi.eta().sign();
    let mut violations = Vec::new();
    let mut saturation_points = Vec::new();
    let mut zero_crossings = Vec::new();

    let chi0 = chi.chi(0.0);
    if chi0.abs() > INITIAL_TOL || !chi0.is_finite() {
        violations.push(Violation {
            t: 0.0,
            reason: format!("chi(0) = {chi0} must vanish"),
        });
    }
    let beta0 = env.beta(0.0);
    let r0 = chi.speed_ratio(0.0, beta0);
    if !r0.is_finite() {
        violations.push(Violation {
            t: 0.0,
            reason: "chi_dot(0)/beta(0) undefined".into(),
        });
    } else if (r0 + eta).abs() > INITIAL_TOL {
        let reason = if r0 * eta > 0.0 {
            format!("eta = {eta} contradicts sign of chi_dot(0)/beta(0) = {r0}")
        } else {
            format!("chi_dot(0)/beta(0) = {r0}, expected {}", -eta)
        };
        violations.push(Violation { t: 0.0, reason });
    }

    let times = grid.samples();
    let locals: Vec<Local> = times.iter().map(|&t| Local::at(chi, env, t)).collect();
    let sin2 = |t: f64| (2.0 * chi.chi(t)).sin();
    let gap_at = |t: f64| Local::at(chi, env, t).gap;

    let mut qsl_margin = f64::INFINITY;
    for (i, (&t, l)) in times.iter().zip(&locals).enumerate() {
        if !(l.chi.is_finite() && l.raw_ratio.is_finite() && l.gap.is_finite()) {
            violations.push(Violation {
                t,
                reason: "non-finite chi, chi_dot/beta or gap".into(),
            });
            continue;
        }
        qsl_margin = qsl_margin.min(l.beta.abs() * (1.0 - l.raw_ratio.abs()));
        if l.raw_ratio.abs() > 1.0 + CLAMP_TOL || l.gap < 0.0 {
            violations.push(Violation {
                t,
                reason: format!("speed limit violated: |chi_dot/beta| = {}", l.raw_ratio.abs()),
            });
            continue;
        }
        let saturated = l.gap <= SATURATION_TOL;
        if saturated {
            saturation_points.push(t);
        }
        let s = (2.0 * l.chi).sin();
        if t > 0.0 && s.abs() <= ZERO_TOL {
            zero_crossings.push(t);
            if !saturated {
                violations.push(Violation {
                    t,
                    reason: "sin(2 chi) = 0 away from saturation: b_z diverges".into(),
                });
            }
        }
        // isolated interior tangency
        if saturated && i > 0 && i + 1 < times.len() && s.abs() > ZERO_TOL {
            let neighbours_free =
                locals[i - 1].gap > SATURATION_TOL && locals[i + 1].gap > SATURATION_TOL;
            if neighbours_free {
                violations.push(Violation {
                    t,
                    reason: "interior tangency |chi_dot| = |beta| with sin(2 chi) != 0".into(),
                });
            }
        }
    }

    // zeros of sin 2χ and tangencies hiding between grid points
    for i in 0..times.len().saturating_sub(1) {
        let (ta, tb) = (times[i], times[i + 1]);
        let (sa, sb) = (sin2(ta), sin2(tb));
        let interior_a = ta > 0.0 && sa.abs() > ZERO_TOL;
        if interior_a && sb.abs() > ZERO_TOL && sa.signum() != sb.signum() {
            let tz = refine_sign_change(sin2, ta, tb);
            zero_crossings.push(tz);
            if gap_at(tz) > 1e-9 {
                violations.push(Violation {
                    t: tz,
                    reason: "sin(2 chi) changes sign away from saturation: b_z diverges".into(),
                });
            }
        }
        if i == 0 || i + 1 >= times.len() {
            continue;
        }
        let (tl, sl) = (times[i - 1], sin2(times[i - 1]));
        // local minimum of |sin 2χ| at an interior grid point: look for a touch
        if sa.abs() > ZERO_TOL
            && sa.abs() < sl.abs()
            && sa.abs() <= sb.abs()
            && sa.signum() == sb.signum()
            && sa.signum() == sl.signum()
        {
            let (tm, m) = golden_min(|t| sin2(t).abs(), tl, tb);
            if m <= ZERO_TOL && tm > 0.0 {
                zero_crossings.push(tm);
                if gap_at(tm) > 1e-9 {
                    violations.push(Violation {
                        t: tm,
                        reason: "sin(2 chi) touches zero away from saturation".into(),
                    });
                }
            }
        }
        // local minimum of the gap: look for an unresolved tangency
        let (gl, ga, gb) = (locals[i - 1].gap, locals[i].gap, locals[i + 1].gap);
        if ga > SATURATION_TOL && ga < gl && ga <= gb {
            let (tm, m) = golden_min(gap_at, tl, tb);
            if m <= SATURATION_TOL && sin2(tm).abs() > ZERO_TOL {
                violations.push(Violation {
                    t: tm,
                    reason: "interior tangency |chi_dot| = |beta| between grid points".into(),
                });
            }
        }
    }

    zero_crossings.sort_by(f64::total_cmp);
    zero_crossings.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    violations.sort_by(|a, b| a.t.total_cmp(&b.t));
    ValidationReport {
        ok: violations.is_empty(),
        qsl_margin,
        saturation_points,
        zero_crossings,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::ansatz::{saturating, Eta, FnAnsatz};
    use crate::solver::envelope::{ConstantEnvelope, ModulatedEnvelope};
    use std::sync::Arc;

    fn grid() -> TimeGrid {
        TimeGrid::uniform(0.0, 3.0, 61).unwrap()
    }

    #[test]
    fn saturation_is_ok_everywhere() {
        let env = Arc::new(ModulatedEnvelope::new(1.0));
        let chi = saturating(env.clone(), Eta::Plus);
        let r = validate(&chi, env.as_ref(), &grid());
        assert!(r.ok, "{:?}", r.violations);
        assert_eq!(r.saturation_points.len(), 61);
        assert_eq!(r.qsl_margin, 0.0);
    }

    #[test]
    fn double_speed_violates_for_positive_times() {
        let env = ConstantEnvelope::new(1.0);
        let chi = FnAnsatz::new(|t| -2.0 * t, |_| -2.0, |_| 0.0, Eta::Plus);
        let r = validate(&chi, &env, &grid());
        assert!(!r.ok);
        let qsl: Vec<_> = r
            .violations
            .iter()
            .filter(|v| v.reason.contains("speed limit"))
            .collect();
        assert_eq!(qsl.len(), 61);
        assert!(r.qsl_margin < 0.0);
    }

    #[test]
    fn wrong_eta_is_reported() {
        let env = ConstantEnvelope::new(1.0);
        let chi = FnAnsatz::new(|t| -t, |_| -1.0, |_| 0.0, Eta::Minus);
        let r = validate(&chi, &env, &grid());
        assert!(r.violations.iter().any(|v| v.reason.contains("contradicts")));
    }

    #[test]
    fn unsaturated_zero_of_sin2chi_is_reported() {
        // χ = -t crosses -π/2 at t = π/2; fine when saturated, divergent
        // when the drive is twice as strong
        let env = ConstantEnvelope::new(1.0);
        let chi = FnAnsatz::new(|t| -t, |_| -1.0, |_| 0.0, Eta::Plus);
        assert!(validate(&chi, &env, &TimeGrid::uniform(0.0, 4.0, 41).unwrap()).ok);

        let env2 = ConstantEnvelope::new(2.0);
        let r = validate(&chi, &env2, &TimeGrid::uniform(0.0, 4.0, 41).unwrap());
        assert!(r.violations.iter().any(|v| v.reason.contains("diverges")));
        assert!(r.zero_crossings.iter().any(|&t| (t - std::f64::consts::FRAC_PI_2).abs() < 1e-9));
    }

    #[test]
    fn helpers_find_minima_and_roots() {
        let (x, f) = golden_min(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-7 && f < 1e-14);
        let r = refine_sign_change(|x| x * x - 2.0, 0.0, 2.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }
}
