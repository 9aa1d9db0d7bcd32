//! The exact-solution engine.
//!
//! Given an envelope `β e^{iφ}` and an admissible angle function `χ(t)`, the
//! propagator is
//!
//! ```text
//! u11 = cos χ e^{i(ξ₋ - φ/2)},   u21 = iη sin χ e^{i(ξ₊ + φ/2)},
//! ξ± = ∫₀ᵗ β√(1-χ̇²/β²) csc 2χ  ±  ½ asin(χ̇/β)  ±  ηπ/4,
//! ```
//!
//! provided the longitudinal field is
//!
//! ```text
//! b_z = (χ̈ - χ̇β̇/β) / (2β√(1-χ̇²/β²)) - β√(1-χ̇²/β²) cot 2χ + φ̇/2.
//! ```

mod ansatz;
mod envelope;
mod kappa;
mod phases;
mod synth;
mod validate;

pub use ansatz::{saturating, BDriven, ChiAnsatz, ChiOfB, Eta, FnAnsatz, Params, Saturation};
pub use envelope::{
    ConstantEnvelope, Envelope, ErfEnvelope, FourierEnvelope, ModulatedEnvelope, PhaseProfile,
};
pub use kappa::{kappa_evolution, kappa_path, AlphaFunction, KappaPath};
pub use phases::{
    cumulative_phase_integral, evolution, evolution_on_grid, idle_evolution, phase_integral,
    piecewise_evolution, xi_of_b, xi_phases, xi_phases_on_grid, Segment,
};
pub use synth::{synthesize_bz, synthesize_fields};
pub use validate::{validate, ValidationReport, Violation};

/// `χ̇/β` is pulled back onto `[-1, 1]` when it overshoots by at most this.
pub const CLAMP_TOL: f64 = 1e-12;

/// Everything the formulas need at one instant.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Local {
    pub beta: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub chi: f64,
    /// `χ̇/β` before clamping.
    pub raw_ratio: f64,
    /// `χ̇/β` clamped onto `[-1, 1]` within [`CLAMP_TOL`].
    pub ratio: f64,
    /// `1 - χ̇²/β²`, with round-off negatives at saturation set to zero.
    pub gap: f64,
}

impl Local {
    pub fn at(chi: &dyn ChiAnsatz, env: &dyn Envelope, t: f64) -> Self {
        let beta = env.beta(t);
        let raw_ratio = chi.speed_ratio(t, beta);
        let ratio = if raw_ratio.abs() > 1.0 && raw_ratio.abs() <= 1.0 + CLAMP_TOL {
            raw_ratio.signum()
        } else {
            raw_ratio
        };
        let mut gap = chi.qsl_gap(t, beta);
        if gap < 0.0 && gap >= -2.0 * CLAMP_TOL - 4.0 * f64::EPSILON {
            gap = 0.0;
        }
        Self {
            beta,
            phi: env.phi(t),
            phi_dot: env.phi_dot(t),
            chi: chi.chi(t),
            raw_ratio,
            ratio,
            gap,
        }
    }

    /// `β √gap / sin 2χ`. Zero wherever the speed limit is saturated.
    pub fn xi_integrand(&self) -> f64 {
        if self.gap == 0.0 || self.beta == 0.0 {
            return 0.0;
        }
        self.beta * self.gap.sqrt() / (2.0 * self.chi).sin()
    }

    /// `β √gap cot 2χ`, the part of `b_z` that is not a derivative.
    pub fn cot_term(&self) -> f64 {
        if self.gap == 0.0 || self.beta == 0.0 {
            return 0.0;
        }
        let (s, c) = (2.0 * self.chi).sin_cos();
        self.beta * self.gap.sqrt() * c / s
    }
}
