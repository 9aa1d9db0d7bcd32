//! The complex-`κ` parametrization: a second analytic route to the same
//! solutions, written in the frame rotating with `b_z`.
//!
//! With `χ̇ = β sin κ_I`, reality of `α = 2∫b_z - φ` fixes
//! `κ_R = -2η atanh tan(ηχ + π/4)` and gives
//! `α = κ_I + ηπ/2 - 2∫ β cos κ_I cot 2χ`. The rotating-frame propagator is
//! then `v11 = cos χ e^{iψ₁}`, `v21 = -i|sin χ| e^{iψ₂}` with
//! `ψ₁ = -η∫β e^{ηκ_R} cos κ_I` and `ψ₂ = -η∫β e^{-ηκ_R} cos κ_I`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use super::ansatz::{ChiAnsatz, Eta};
use super::envelope::Envelope;
use super::phases::cumulative;
use super::Local;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Propagator, TimeGrid};
use crate::quad::{integrate_endpoint_singular, QuadConfig};

/// `κ_I`, `κ_R` and `α` sampled on a grid. `κ_R` is `±∞` where `χ = 0` or
/// `ηχ = -π/2`, and NaN where `ηχ` leaves `[-π/2, 0]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaPath {
    pub eta: Eta,
    pub times: Vec<f64>,
    pub kappa_i: Vec<f64>,
    pub kappa_r: Vec<f64>,
    pub alpha: Vec<f64>,
}

/// `κ_R(χ)`. Uses the identity `atanh tan(x + π/4) = -½ ln(-tan x)`, which
/// keeps full precision near `χ = 0`.
pub fn kappa_r(chi: f64, eta: Eta) -> f64 {
    let e = eta.sign();
    let x = e * chi;
    if x == 0.0 {
        return -e * f64::INFINITY;
    }
    if (x + FRAC_PI_2).abs() <= 4.0 * f64::EPSILON {
        return e * f64::INFINITY;
    }
    e * (-x.tan()).ln()
}

fn kappa_i(l: &Local) -> f64 {
    l.ratio.clamp(-1.0, 1.0).asin()
}

fn cot_segment(chi: &dyn ChiAnsatz, env: &dyn Envelope, a: f64, b: f64) -> Result<f64> {
    let f = |t: f64| Local::at(chi, env, t).cot_term();
    Ok(integrate_endpoint_singular(f, a, b, &QuadConfig::default())?.value)
}

pub fn kappa_path(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    grid: &TimeGrid,
    exec: Exec,
) -> Result<KappaPath> {
    let eta = chi.eta();
    let cot = cumulative(grid.samples(), exec, |a, b| cot_segment(chi, env, a, b))?;
    let mut path = KappaPath {
        eta,
        times: grid.samples().to_vec(),
        kappa_i: Vec::with_capacity(grid.len()),
        kappa_r: Vec::with_capacity(grid.len()),
        alpha: Vec::with_capacity(grid.len()),
    };
    for (t, c) in grid.iter().zip(cot) {
        let l = Local::at(chi, env, t);
        let ki = kappa_i(&l);
        path.kappa_i.push(ki);
        path.kappa_r.push(kappa_r(l.chi, eta));
        path.alpha.push(ki + eta.sign() * FRAC_PI_2 - 2.0 * c);
    }
    Ok(path)
}

/// `α(t)` at arbitrary times, for driving the rotating-frame integrator.
/// The cotangent integral is tabulated at knots and completed by a short
/// quadrature from the nearest knot below.
pub struct AlphaFunction<'a> {
    chi: &'a dyn ChiAnsatz,
    env: &'a dyn Envelope,
    knots: Vec<f64>,
    cot: Vec<f64>,
}

impl<'a> AlphaFunction<'a> {
    pub fn new(
        chi: &'a dyn ChiAnsatz,
        env: &'a dyn Envelope,
        t_end: f64,
        knots: usize,
        exec: Exec,
    ) -> Result<Self> {
        let grid = TimeGrid::uniform(0.0, t_end, knots.max(2))?;
        let knots = grid.samples().to_vec();
        let cot = cumulative(&knots, exec, |a, b| cot_segment(chi, env, a, b))?;
        Ok(Self {
            chi,
            env,
            knots,
            cot,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let k = self.knots.partition_point(|&x| x <= t).saturating_sub(1);
        let c = self.cot[k] + cot_segment(self.chi, self.env, self.knots[k], t)?;
        let l = Local::at(self.chi, self.env, t);
        Ok(kappa_i(&l) + self.chi.eta().sign() * FRAC_PI_2 - 2.0 * c)
    }
}

/// Rotating-frame propagator built from `κ`. Requires `ηχ ∈ (-π/2, 0]` on
/// the grid, where `κ_R` is real.
pub fn kappa_evolution(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    grid: &TimeGrid,
    exec: Exec,
) -> Result<Vec<Propagator>> {
    let eta = chi.eta();
    let e = eta.sign();
    for t in grid.iter() {
        let x = e * chi.chi(t);
        if !(x <= 0.0 && x > -FRAC_PI_2) {
            return Err(Error::KappaDomain { t, chi: chi.chi(t) });
        }
    }
    // ψ₁ and ψ₂ integrands
    let weight = move |t: f64, sign: f64| {
        let l = Local::at(chi, env, t);
        if l.gap == 0.0 {
            return 0.0;
        }
        -e * l.beta * (sign * e * kappa_r(l.chi, eta)).exp() * l.gap.sqrt()
    };
    let cfg = QuadConfig::default();
    let psi = |sign: f64| {
        cumulative(grid.samples(), exec, |a, b| {
            Ok(integrate_endpoint_singular(|t| weight(t, sign), a, b, &cfg)?.value)
        })
    };
    let (psi1, psi2) = (psi(1.0)?, psi(-1.0)?);
    grid.iter()
        .zip(psi1.iter().zip(&psi2))
        .map(|(t, (&p1, &p2))| {
            let (s, c) = chi.chi(t).sin_cos();
            Propagator::new(
                Complex64::from_polar(c, p1),
                Complex64::new(0.0, -s.abs()) * Complex64::from_polar(1.0, p2),
            )
        })
        .collect()
}
