//! Transverse drive envelopes `β(t) e^{iφ(t)} = b_x + i b_y`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Transverse amplitude `β`, its derivative, its running area
/// `B(t) = ∫₀ᵗ β`, and the drive phase `φ`.
///
/// Implementations must supply analytic derivatives; the solver never
/// differentiates numerically.
pub trait Envelope: Send + Sync + std::fmt::Debug {
    fn beta(&self, t: f64) -> f64;
    fn beta_dot(&self, t: f64) -> f64;
    /// `B(t) = ∫₀ᵗ β(t') dt'`, so `B(0) = 0`.
    fn area(&self, t: f64) -> f64;
    fn phi(&self, _t: f64) -> f64 {
        0.0
    }
    fn phi_dot(&self, _t: f64) -> f64 {
        0.0
    }
    fn name(&self) -> &'static str;
}

/// Drive phase `φ(t)`. Every variant has `φ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PhaseProfile {
    #[default]
    Zero,
    /// `φ = ω t`, a detuned drive.
    Linear { rate: f64 },
    /// `φ = A sin(ω t)`.
    Sine { amplitude: f64, frequency: f64 },
}

impl PhaseProfile {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            PhaseProfile::Zero => 0.0,
            PhaseProfile::Linear { rate } => rate * t,
            PhaseProfile::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * t).sin(),
        }
    }

    pub fn rate(&self, t: f64) -> f64 {
        match *self {
            PhaseProfile::Zero => 0.0,
            PhaseProfile::Linear { rate } => rate,
            PhaseProfile::Sine {
                amplitude,
                frequency,
            } => amplitude * frequency * (frequency * t).cos(),
        }
    }
}

macro_rules! phase_methods {
    () => {
        fn phi(&self, t: f64) -> f64 {
            self.phase.value(t)
        }
        fn phi_dot(&self, t: f64) -> f64 {
            self.phase.rate(t)
        }
    };
}

/// `β(t) = β₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantEnvelope {
    pub beta0: f64,
    pub phase: PhaseProfile,
}

impl ConstantEnvelope {
    pub fn new(beta0: f64) -> Self {
        Self {
            beta0,
            phase: PhaseProfile::Zero,
        }
    }

    pub fn with_phase(mut self, phase: PhaseProfile) -> Self {
        self.phase = phase;
        self
    }
}

impl Envelope for ConstantEnvelope {
    fn beta(&self, _t: f64) -> f64 {
        self.beta0
    }
    fn beta_dot(&self, _t: f64) -> f64 {
        0.0
    }
    fn area(&self, t: f64) -> f64 {
        self.beta0 * t
    }
    phase_methods!();
    fn name(&self) -> &'static str {
        "constant"
    }
}

/// `β(t) = β₀ (1 + sin²(2β₀t)/2)`, the oscillating drive used for the
/// Hadamard design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulatedEnvelope {
    pub beta0: f64,
    pub phase: PhaseProfile,
}

impl ModulatedEnvelope {
    pub fn new(beta0: f64) -> Self {
        Self {
            beta0,
            phase: PhaseProfile::Zero,
        }
    }
}

impl Envelope for ModulatedEnvelope {
    fn beta(&self, t: f64) -> f64 {
        let s = (2.0 * self.beta0 * t).sin();
        self.beta0 * (1.0 + 0.5 * s * s)
    }
    fn beta_dot(&self, t: f64) -> f64 {
        self.beta0 * self.beta0 * (4.0 * self.beta0 * t).sin()
    }
    fn area(&self, t: f64) -> f64 {
        1.25 * self.beta0 * t - (4.0 * self.beta0 * t).sin() / 16.0
    }
    phase_methods!();
    fn name(&self) -> &'static str {
        "modulated"
    }
}

/// Gaussian pulse `β = μν e^{-ν²(t-t₀)²}/√π` whose area is the shifted error
/// function `B = μ[erf(ν(t-t₀)) + erf(νt₀)]/2`, so that `B(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErfEnvelope {
    pub mu: f64,
    pub nu: f64,
    pub t_center: f64,
    pub phase: PhaseProfile,
}

impl ErfEnvelope {
    pub fn new(mu: f64, nu: f64, t_center: f64) -> Result<Self> {
        if mu == 0.0 || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu must be non-zero, got {mu}")));
        }
        if nu <= 0.0 || !nu.is_finite() {
            return Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")));
        }
        Ok(Self {
            mu,
            nu,
            t_center,
            phase: PhaseProfile::Zero,
        })
    }

    /// Total area `B(∞)`.
    pub fn total_area(&self) -> f64 {
        0.5 * self.mu * (1.0 + libm::erf(self.nu * self.t_center))
    }
}

impl Envelope for ErfEnvelope {
    fn beta(&self, t: f64) -> f64 {
        let tau = t - self.t_center;
        self.mu * self.nu * (-(self.nu * tau).powi(2)).exp() / PI.sqrt()
    }
    fn beta_dot(&self, t: f64) -> f64 {
        let tau = t - self.t_center;
        -2.0 * self.nu * self.nu * tau * self.beta(t)
    }
    fn area(&self, t: f64) -> f64 {
        let x = self.nu * (t - self.t_center);
        let x0 = self.nu * self.t_center;
        // erf(x) + erf(x0) without cancellation on the leading tail
        let s = if x < 0.0 && x0 > 0.0 {
            libm::erfc(-x) - libm::erfc(x0)
        } else {
            libm::erf(x) + libm::erf(x0)
        };
        0.5 * self.mu * s
    }
    phase_methods!();
    fn name(&self) -> &'static str {
        "erf"
    }
}

/// `β = β̄ + Σ A_j cos(ω_j t + p_j)`; positive whenever `β̄ > Σ|A_j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierEnvelope {
    pub base: f64,
    /// `(amplitude, angular frequency, phase offset)` triples.
    pub terms: Vec<(f64, f64, f64)>,
    pub phase: PhaseProfile,
}

impl FourierEnvelope {
    pub fn new(base: f64, terms: Vec<(f64, f64, f64)>) -> Result<Self> {
        if terms.iter().any(|&(_, w, _)| w == 0.0) {
            return Err(Error::InvalidParameter("zero frequency in Fourier envelope".into()));
        }
        Ok(Self {
            base,
            terms,
            phase: PhaseProfile::Zero,
        })
    }

    pub fn is_positive(&self) -> bool {
        self.base > self.terms.iter().map(|t| t.0.abs()).sum::<f64>()
    }
}

impl Envelope for FourierEnvelope {
    fn beta(&self, t: f64) -> f64 {
        self.base
            + self
                .terms
                .iter()
                .map(|&(a, w, p)| a * (w * t + p).cos())
                .sum::<f64>()
    }
    fn beta_dot(&self, t: f64) -> f64 {
        -self
            .terms
            .iter()
            .map(|&(a, w, p)| a * w * (w * t + p).sin())
            .sum::<f64>()
    }
    fn area(&self, t: f64) -> f64 {
        self.base * t
            + self
                .terms
                .iter()
                .map(|&(a, w, p)| a * ((w * t + p).sin() - p.sin()) / w)
                .sum::<f64>()
    }
    phase_methods!();
    fn name(&self) -> &'static str {
        "fourier"
    }
}
