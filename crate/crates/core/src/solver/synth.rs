//! Synthesis of the longitudinal field `b_z`.

use super::ansatz::ChiAnsatz;
use super::envelope::Envelope;
use super::Local;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{DrivingFields, FieldSample, TimeGrid};

/// `b_z` from the closed form, valid where the speed limit is not saturated.
fn direct(chi: &dyn ChiAnsatz, env: &dyn Envelope, t: f64, l: &Local) -> f64 {
    let bend = chi.bend(t, l.beta, env.beta_dot(t));
    l.beta * bend / (2.0 * l.gap.sqrt()) - l.cot_term() + 0.5 * l.phi_dot
}

/// Limit of `b_z` at a saturation point approached from one side, by
/// quadratic extrapolation of three one-sided samples. Returns `None` when
/// the neighbourhood is itself saturated.
fn one_sided_limit(chi: &dyn ChiAnsatz, env: &dyn Envelope, t: f64, h: f64) -> Option<f64> {
    let mut f = [0.0; 3];
    for (k, slot) in f.iter_mut().enumerate() {
        let s = t + (k + 1) as f64 * h;
        let l = Local::at(chi, env, s);
        if !(l.gap > 0.0) || (2.0 * l.chi).sin() == 0.0 {
            return None;
        }
        *slot = match chi.field_per_beta(s).filter(|f| f.is_finite()) {
            Some(f) => l.beta * f + 0.5 * l.phi_dot,
            None => direct(chi, env, s, &l),
        };
        if !slot.is_finite() {
            return None;
        }
    }
    Some(3.0 * f[0] - 3.0 * f[1] + f[2])
}

/// `b_z(t)`.
///
/// At saturation points (`χ̇ = ±β`) the first term is `0/0` when `χ̈ - χ̇β̇/β`
/// also vanishes; the limit is then taken from the right (or, failing that,
/// the left) by extrapolation. If the numerator does not vanish the field is
/// infinite and a signed infinity is returned, as for sweeps that start
/// infinitely far from the anti-crossing. On stretches where `χ` saturates
/// identically `b_z = φ̇/2`.
///
/// `sin 2χ = 0` away from saturation is an error: validation rejects such
/// ansätze.
pub fn synthesize_bz(chi: &dyn ChiAnsatz, env: &dyn Envelope, t: f64) -> Result<f64> {
    let l = Local::at(chi, env, t);
    if l.gap >= 0.0 {
        if let Some(f) = chi.field_per_beta(t).filter(|f| f.is_finite()) {
            return Ok(l.beta * f + 0.5 * l.phi_dot);
        }
    }
    if l.gap > 0.0 {
        let (s, c) = (2.0 * l.chi).sin_cos();
        if s == 0.0 {
            return Err(Error::DivergentField {
                t,
                sign: -(l.beta * c).signum(),
            });
        }
        return Ok(direct(chi, env, t, &l));
    }
    if l.gap.is_nan() || l.gap < 0.0 {
        return Err(Error::InvalidAnsatz(format!(
            "speed limit violated at t = {t} (gap {})",
            l.gap
        )));
    }
    if l.beta == 0.0 {
        return Ok(0.5 * l.phi_dot);
    }
    let bend = chi.bend(t, l.beta, env.beta_dot(t));
    if bend != 0.0 && bend.is_finite() {
        return Ok(f64::INFINITY.copysign(bend * l.beta));
    }
    let h = 1e-4 * t.abs().max(1.0);
    Ok(one_sided_limit(chi, env, t, h)
        .or_else(|| one_sided_limit(chi, env, t, -h))
        .unwrap_or(0.5 * l.phi_dot))
}

/// `(b_x, b_y, b_z)` on every grid point, in grid order.
pub fn synthesize_fields(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    grid: &TimeGrid,
    exec: Exec,
) -> Result<DrivingFields> {
    let samples = exec.map(grid.samples(), |&t| {
        let beta = env.beta(t);
        let (s, c) = env.phi(t).sin_cos();
        Ok(FieldSample {
            t,
            bx: beta * c,
            by: beta * s,
            bz: synthesize_bz(chi, env, t)?,
        })
    });
    Ok(DrivingFields::new(samples.into_iter().collect::<Result<_>>()?))
}
