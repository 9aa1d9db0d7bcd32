use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};
use crate::root::{bisect, BisectConfig};
use crate::solver::{ChiAnsatz, Envelope};

/// Outcome of a single sweep started in `|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepResult {
    pub p2: f64,
    pub chi_t: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
}

/// `P₂(T) = |u21(T)|² = sin² χ(T)`; exact, no integration.
pub fn narp_probability(chi: &dyn ChiAnsatz, t_final: f64) -> SweepResult {
    let chi_t = chi.chi(t_final);
    let s = chi_t.sin();
    SweepResult {
        p2: s * s,
        chi_t,
        t_final,
    }
}

const MAX_DOUBLINGS: usize = 48;

/// Smallest `T` with `∫₀ᵀ |β| = chi_target`.
pub fn qsl_time(env: &dyn Envelope, chi_target: f64) -> Result<f64> {
    if !(chi_target > 0.0 && chi_target.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "chi_target must be positive, got {chi_target}"
        )));
    }
    let cfg = QuadConfig::with_abs_tol(1e-13);
    let area = |a: f64, b: f64| Ok::<_, Error>(integrate(|t| env.beta(t).abs(), a, b, &cfg)?.value);

    let b0 = env.beta(0.0).abs();
    let mut hi = if b0 > 1e-8 { chi_target / b0 } else { 1.0 };
    let mut lo = 0.0;
    let mut area_lo = 0.0;
    let mut area_hi = area(0.0, hi)?;
    let mut doublings = 0;
    while area_hi < chi_target {
        if doublings == MAX_DOUBLINGS {
            return Err(Error::Unreachable {
                target: chi_target,
                reached: area_hi,
                horizon: hi,
            });
        }
        lo = hi;
        area_lo = area_hi;
        hi *= 2.0;
        area_hi = area_lo + area(lo, hi)?;
        doublings += 1;
    }
    let cfg = BisectConfig {
        x_rel_tol: 1e-14,
        ..BisectConfig::default()
    };
    bisect(|t| Ok(area_lo + area(lo, t)? - chi_target), lo, hi, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{ConstantEnvelope, ErfEnvelope, FnAnsatz, Eta, ModulatedEnvelope};
    use std::f64::consts::PI;

    #[test]
    fn narp_probabilities() {
        for (chi_t, p) in [(PI / 2.0, 1.0), (0.0, 0.0), (PI / 4.0, 0.5)] {
            let chi = FnAnsatz::new(move |t| chi_t * t, move |_| chi_t, |_| 0.0, Eta::Minus);
            let r = narp_probability(&chi, 1.0);
            assert!((r.p2 - p).abs() < 1e-15);
            assert!((r.p2 - r.chi_t.sin().powi(2)).abs() <= 1e-12);
        }
    }

    #[test]
    fn constant_drive_qsl() {
        let env = ConstantEnvelope::new(1.3);
        let t = qsl_time(&env, PI / 2.1).unwrap();
        assert!((t - PI / (2.1 * 1.3)).abs() < 1e-10 * t);
    }

    #[test]
    fn modulated_drive_matches_closed_area() {
        let env = ModulatedEnvelope::new(1.0);
        let t = qsl_time(&env, PI / 4.0).unwrap();
        // B(t) is the closed-form area and β > 0
        assert!((env.area(t) - PI / 4.0).abs() < 1e-12);
        assert!(qsl_time(&env, 1.0).unwrap() > t);
    }

    #[test]
    fn saturating_pulse_is_unreachable() {
        let env = ErfEnvelope::new(0.25, 3.0, 5.0).unwrap();
        match qsl_time(&env, 1.0) {
            Err(Error::Unreachable { reached, .. }) => assert!((reached - 0.25).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }
}
