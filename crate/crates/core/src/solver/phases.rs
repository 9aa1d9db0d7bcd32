//! Phase integrals `ξ±` and the exact propagator.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use super::ansatz::{ChiAnsatz, ChiOfB};
use super::envelope::Envelope;
use super::Local;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{compose, PhaseSet, Propagator, TimeGrid};
use crate::quad::{integrate_endpoint_singular, QuadConfig};

/// `∫ₐᵇ β√(1-χ̇²/β²) csc 2χ dt`.
pub fn phase_integral(chi: &dyn ChiAnsatz, env: &dyn Envelope, a: f64, b: f64) -> Result<f64> {
    let f = |t: f64| Local::at(chi, env, t).xi_integrand();
    Ok(integrate_endpoint_singular(f, a, b, &QuadConfig::default())?.value)
}

/// The phase integral from 0 to every entry of `times` (sorted ascending,
/// non-negative). Segments are integrated independently and summed in order,
/// so the result is identical in both execution modes.
pub fn cumulative_phase_integral(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    times: &[f64],
    exec: Exec,
) -> Result<Vec<f64>> {
    cumulative(times, exec, |a, b| phase_integral(chi, env, a, b))
}

pub(crate) fn cumulative<F>(times: &[f64], exec: Exec, segment: F) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Result<f64> + Sync + Send,
{
    if times.iter().any(|&t| t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidGrid(
            "cumulative integrals need sorted non-negative times".into(),
        ));
    }
    let pieces = exec.map_range(times.len(), |i| {
        let a = if i == 0 { 0.0 } else { times[i - 1] };
        segment(a, times[i])
    });
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for p in pieces {
        acc += p?;
        out.push(acc);
    }
    Ok(out)
}

fn phases_from(l: &Local, eta: f64, integral: f64, t: f64) -> Result<PhaseSet> {
    if !l.ratio.is_finite() {
        return Err(Error::InvalidAnsatz(format!(
            "chi_dot/beta undefined at t = {t}; use the beta = 0 branch"
        )));
    }
    let half_kappa = 0.5 * l.ratio.clamp(-1.0, 1.0).asin();
    let offset = eta * FRAC_PI_4;
    Ok(PhaseSet::new(
        integral - half_kappa - offset,
        integral + half_kappa + offset,
    ))
}

/// `ξ₋(t)`, `ξ₊(t)`, `ξ₀(t)`.
pub fn xi_phases(chi: &dyn ChiAnsatz, env: &dyn Envelope, t: f64) -> Result<PhaseSet> {
    let integral = phase_integral(chi, env, 0.0, t)?;
    phases_from(&Local::at(chi, env, t), chi.eta().sign(), integral, t)
}

pub fn xi_phases_on_grid(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    grid: &TimeGrid,
    exec: Exec,
) -> Result<Vec<PhaseSet>> {
    let integrals = cumulative_phase_integral(chi, env, grid.samples(), exec)?;
    let eta = chi.eta().sign();
    grid.iter()
        .zip(integrals)
        .map(|(t, i)| phases_from(&Local::at(chi, env, t), eta, i, t))
        .collect()
}

fn check_initial_phase(env: &dyn Envelope) -> Result<()> {
    let phi0 = env.phi(0.0);
    if phi0 != 0.0 {
        return Err(Error::InitialPhase { phi0 });
    }
    Ok(())
}

fn assemble(l: &Local, eta: f64, xi: &PhaseSet) -> Result<Propagator> {
    let (s, c) = l.chi.sin_cos();
    let u11 = Complex64::from_polar(c, xi.xi_minus - 0.5 * l.phi);
    let u21 = Complex64::new(0.0, eta * s) * Complex64::from_polar(1.0, xi.xi_plus + 0.5 * l.phi);
    Propagator::new(u11, u21)
}

/// The exact propagator `U(t)`.
pub fn evolution(chi: &dyn ChiAnsatz, env: &dyn Envelope, t: f64) -> Result<Propagator> {
    check_initial_phase(env)?;
    let xi = xi_phases(chi, env, t)?;
    assemble(&Local::at(chi, env, t), chi.eta().sign(), &xi)
}

pub fn evolution_on_grid(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    grid: &TimeGrid,
    exec: Exec,
) -> Result<Vec<Propagator>> {
    check_initial_phase(env)?;
    let phases = xi_phases_on_grid(chi, env, grid, exec)?;
    let eta = chi.eta().sign();
    grid.iter()
        .zip(&phases)
        .map(|(t, xi)| assemble(&Local::at(chi, env, t), eta, xi))
        .collect()
}

/// `ξ±` as functions of the pulse area alone:
/// `ξ± = ∫₀ᴮ √(1-χ'²) csc 2χ dB' ± ½ asin χ'(B) ± ηπ/4`.
pub fn xi_of_b(profile: &dyn ChiOfB, b: f64) -> Result<PhaseSet> {
    let f = |x: f64| {
        let g = profile.gap(x);
        if g <= 0.0 {
            0.0
        } else {
            g.sqrt() / (2.0 * profile.value(x)).sin()
        }
    };
    let integral = integrate_endpoint_singular(f, 0.0, b, &QuadConfig::default())?.value;
    let slope = profile.slope(b).clamp(-1.0, 1.0);
    let half_kappa = 0.5 * slope.asin();
    let offset = profile.eta().sign() * FRAC_PI_4;
    Ok(PhaseSet::new(
        integral - half_kappa - offset,
        integral + half_kappa + offset,
    ))
}

/// `β ≡ 0`: a pure z-rotation, `u11 = e^{-iθ}`, `u21 = 0` with
/// `θ = ∫ b_z dt`.
pub fn idle_evolution(bz_area: f64) -> Propagator {
    Propagator::z_rotation(2.0 * bz_area)
}

/// One stretch of a piecewise drive. Each exact segment runs on its own
/// local clock starting at zero.
pub enum Segment<'a> {
    Exact {
        chi: &'a dyn ChiAnsatz,
        env: &'a dyn Envelope,
        duration: f64,
    },
    /// No transverse drive; `bz_area = ∫ b_z` over the segment.
    Idle { bz_area: f64 },
}

impl Segment<'_> {
    /// Idle stretch with constant `b_z`.
    pub fn idle(bz: f64, duration: f64) -> Self {
        Segment::Idle {
            bz_area: bz * duration,
        }
    }
}

/// Time-ordered product of the segment propagators (first segment acts
/// first).
pub fn piecewise_evolution(segments: &[Segment<'_>]) -> Result<Propagator> {
    let mut u = Propagator::identity();
    for seg in segments {
        let step = match *seg {
            Segment::Exact { chi, env, duration } => evolution(chi, env, duration)?,
            Segment::Idle { bz_area } => idle_evolution(bz_area),
        };
        u = compose(&step, &u);
    }
    Ok(u)
}
