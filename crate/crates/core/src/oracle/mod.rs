//! Independent numerical ground truth.
//!
//! Adaptive Runge–Kutta integration of `i dU/dt = H U` in the lab frame and
//! of the rotating-frame equations `v̇₁₁ = -iβe^{iα}v₂₁`,
//! `v̇₂₁ = -iβe^{-iα}v₁₁`. Nothing here uses the closed-form phases; the
//! lab-frame drive only consumes synthesized fields.
//!
//! Propagators are never renormalized, so unitarity drift stays visible as
//! an error signal.

mod check;
mod dopri;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Propagator, TimeGrid};
use crate::solver::{synthesize_bz, ChiAnsatz, Envelope};

pub use check::{check_against_oracle, OracleReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Fraction of the horizon cut off at endpoints where the field diverges.
    pub endpoint_clip: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            endpoint_clip: 1e-6,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step > 0.0) {
            return Err(Error::InvalidParameter(
                "integrator tolerances and max_step must be positive".into(),
            ));
        }
        if !(self.endpoint_clip > 0.0 && self.endpoint_clip < 1e-2) {
            return Err(Error::InvalidParameter(format!(
                "endpoint_clip must lie in (0, 1e-2), got {}",
                self.endpoint_clip
            )));
        }
        Ok(())
    }
}

/// Propagators relative to the first grid point, so `propagators[0]` is the
/// identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub propagators: Vec<Propagator>,
}

impl Trajectory {
    pub fn max_unitarity_drift(&self) -> f64 {
        self.propagators
            .iter()
            .map(Propagator::unitarity_defect)
            .fold(0.0, f64::max)
    }
}

/// Lab-frame fields `(b_x, b_y, b_z)` as functions of time.
pub trait Drive: Sync {
    fn fields(&self, t: f64) -> [f64; 3];
}

impl<F: Fn(f64) -> [f64; 3] + Sync> Drive for F {
    fn fields(&self, t: f64) -> [f64; 3] {
        self(t)
    }
}

/// Fields synthesized from an ansatz; failures surface as NaN, which the
/// integrator reports as a step failure.
pub struct ExactDrive<'a> {
    pub chi: &'a dyn ChiAnsatz,
    pub env: &'a dyn Envelope,
}

impl Drive for ExactDrive<'_> {
    fn fields(&self, t: f64) -> [f64; 3] {
        let beta = self.env.beta(t);
        let (s, c) = self.env.phi(t).sin_cos();
        let bz = synthesize_bz(self.chi, self.env, t).unwrap_or(f64::NAN);
        [beta * c, beta * s, bz]
    }
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn to_trajectory(grid: &TimeGrid, states: Vec<dopri::State>) -> Trajectory {
    Trajectory {
        grid: grid.clone(),
        propagators: states
            .into_iter()
            .map(|[a, b]| Propagator::new_unchecked(a, b))
            .collect(),
    }
}

/// `i dU/dt = (b_x σ_x + b_y σ_y + b_z σ_z) U` from the identity at the
/// first grid point. The first column carries the whole SU(2) matrix.
pub fn integrate_lab(drive: &dyn Drive, grid: &TimeGrid, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let rhs = |t: f64, y: &dopri::State| {
        let [bx, by, bz] = drive.fields(t);
        let off = Complex64::new(bx, -by);
        [
            -I * (y[0] * bz + off * y[1]),
            -I * (off.conj() * y[0] - y[1] * bz),
        ]
    };
    let states = dopri::solve(rhs, grid.samples(), [ONE, ZERO], cfg)?;
    Ok(to_trajectory(grid, states))
}

/// Rotating-frame evolution driven by `β` and the phase `α(t)`.
pub fn integrate_rotating(
    env: &dyn Envelope,
    alpha: &(dyn Fn(f64) -> f64 + Sync),
    grid: &TimeGrid,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let rhs = |t: f64, y: &dopri::State| {
        let w = Complex64::from_polar(env.beta(t), alpha(t));
        [-I * w * y[1], -I * w.conj() * y[0]]
    };
    let states = dopri::solve(rhs, grid.samples(), [ONE, ZERO], cfg)?;
    Ok(to_trajectory(grid, states))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub max_frobenius: f64,
    pub max_unitarity_drift: f64,
    pub worst_t: f64,
}

/// Sup-norm Frobenius discrepancy between two trajectories on the same grid.
pub fn compare(analytic: &Trajectory, numeric: &Trajectory) -> Result<Comparison> {
    if analytic.grid != numeric.grid || analytic.propagators.len() != numeric.propagators.len() {
        return Err(Error::GridMismatch);
    }
    let mut worst = (0.0, analytic.grid.t0());
    for ((t, a), b) in analytic.grid.iter().zip(&analytic.propagators).zip(&numeric.propagators) {
        let d = a.frobenius_distance(b);
        if !(d <= worst.0) {
            worst = (d, t);
        }
    }
    Ok(Comparison {
        max_frobenius: worst.0,
        max_unitarity_drift: analytic.max_unitarity_drift().max(numeric.max_unitarity_drift()),
        worst_t: worst.1,
    })
}
