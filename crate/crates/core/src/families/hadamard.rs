//! Hadamard gate from the polynomial pulse with `a_k = 4/π`.
//!
//! `χ → -π/4` fixes `|u11| = |u21| = 1/√2`; the phases reach their Hadamard
//! values once `∫₀ᵀ β√(1-χ̇²/β²) csc 2χ dt = -5π/4`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::poly::{poly_chi, PolyFamily};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::interferometry::qsl_time;
use crate::model::{gate_fidelity, DrivingFields, Propagator, TimeGrid};
use crate::root::{bisect, BisectConfig};
use crate::solver::{evolution, phase_integral, synthesize_fields, ChiAnsatz, Envelope};

/// Target of the phase integral.
pub const HADAMARD_PHASE: f64 = -5.0 * PI / 4.0;
/// Tolerance on the phase at the returned duration.
pub const PHASE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct HadamardDesign {
    #[serde(rename = "T")]
    pub duration: f64,
    /// `χ(T)`; tends to `-π/4`.
    pub chi_final: f64,
    /// Phase integral at `T` minus the target.
    pub phase_error: f64,
    pub fidelity: f64,
    pub propagator: Propagator,
    #[serde(skip)]
    pub fields: DrivingFields,
}

/// Find the gate time by bracketing over `(T_QSL, 20 T_QSL]`, with
/// `T_QSL` the speed-limit time for `χ = π/4`, then bisecting on the
/// cumulative phase. Fields are sampled on `samples` uniform points.
pub fn design_hadamard(
    fam: &PolyFamily,
    env: Arc<dyn Envelope>,
    samples: usize,
    exec: Exec,
) -> Result<HadamardDesign> {
    let a_k = *fam.coefficients_per_b().last().expect("k >= 2");
    if (a_k - 4.0 / PI).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "Hadamard design needs a_k = 4/pi per unit area, got {a_k}"
        )));
    }
    let chi = poly_chi(fam, env.clone());
    let t_qsl = qsl_time(env.as_ref(), PI / 4.0)?;
    for t in [0.0, 0.5 * t_qsl, t_qsl] {
        if env.phi(t) != 0.0 {
            return Err(Error::InvalidParameter("Hadamard design needs phi = 0".into()));
        }
    }

    // the integrand is negative throughout, so the phase decreases monotonically
    let horizon = 20.0 * t_qsl;
    let mut lo = t_qsl;
    let mut phase_lo = phase_integral(&chi, env.as_ref(), 0.0, lo)?;
    let mut hi = lo;
    let mut phase_hi = phase_lo;
    while phase_hi > HADAMARD_PHASE {
        lo = hi;
        phase_lo = phase_hi;
        if lo >= horizon {
            return Err(Error::RootNotBracketed {
                lo: t_qsl,
                hi: horizon,
            });
        }
        hi = (lo * 1.25).min(horizon);
        phase_hi = phase_lo + phase_integral(&chi, env.as_ref(), lo, hi)?;
    }

    let cfg = BisectConfig {
        f_tol: 0.1 * PHASE_TOL,
        ..BisectConfig::default()
    };
    let excess = |t: f64| Ok(phase_lo + phase_integral(&chi, env.as_ref(), lo, t)? - HADAMARD_PHASE);
    let duration = bisect(excess, lo, hi, &cfg)?;
    let phase_error = excess(duration)?;

    let grid = TimeGrid::uniform(0.0, duration, samples.max(2))?;
    let fields = synthesize_fields(&chi, env.as_ref(), &grid, exec)?;
    let propagator = evolution(&chi, env.as_ref(), duration)?;
    Ok(HadamardDesign {
        duration,
        chi_final: chi.chi(duration),
        phase_error,
        fidelity: gate_fidelity(&propagator, &Propagator::hadamard()),
        propagator,
        fields,
    })
}

/// First time at which a monotone `χ` reaches `target` (searching outward
/// from `t = 0` by doubling, up to `horizon`).
pub fn time_to_reach(chi: &dyn ChiAnsatz, target: f64, horizon: f64) -> Result<f64> {
    let f = |t: f64| Ok(chi.chi(t) - target);
    let sign0 = -target.signum();
    let mut hi = horizon / 1024.0;
    while (chi.chi(hi) - target).signum() == sign0 {
        if hi >= horizon {
            return Err(Error::Unreachable {
                target,
                reached: chi.chi(horizon),
                horizon,
            });
        }
        hi = (2.0 * hi).min(horizon);
    }
    bisect(f, 0.0, hi, &BisectConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::poly::PolyConvention;
    use crate::solver::ModulatedEnvelope;

    #[test]
    fn modulated_drive_reaches_hadamard() {
        let fam = PolyFamily::pulse(6, 1.0, PolyConvention::PerB).unwrap();
        let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
        let d = design_hadamard(&fam, env, 101, Exec::Parallel).unwrap();
        // frozen from an independent mpmath evaluation of the same integral
        assert!((d.duration - 3.606_688_735_953_808).abs() < 1e-7, "{}", d.duration);
        assert!(d.phase_error.abs() <= PHASE_TOL);
        assert!(d.fidelity > 0.999_99, "{}", d.fidelity);
        assert_eq!(d.fields.len(), 101);
    }

    #[test]
    fn wrong_top_coefficient_is_rejected() {
        let fam = PolyFamily::new(2, vec![1.0], 1.0, PolyConvention::PerB).unwrap();
        let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
        assert!(matches!(
            design_hadamard(&fam, env, 11, Exec::Sequential),
            Err(Error::InvalidParameter(_))
        ));
    }
}
