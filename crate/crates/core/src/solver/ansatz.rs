//! The free angle function `χ(t)` that generates each exact solution.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::envelope::Envelope;

/// Named real parameters of an ansatz family (`a2`, `mu`, `T`, ...).
pub type Params = BTreeMap<String, f64>;

/// The sign `η` in the exact solution. It fixes the direction in which `χ`
/// leaves zero: `χ̇(0) = -η β(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Eta {
    Plus,
    Minus,
}

impl Eta {
    pub fn sign(self) -> f64 {
        match self {
            Eta::Plus => 1.0,
            Eta::Minus => -1.0,
        }
    }

    pub fn from_sign(x: f64) -> Option<Eta> {
        if x > 0.0 {
            Some(Eta::Plus)
        } else if x < 0.0 {
            Some(Eta::Minus)
        } else {
            None
        }
    }
}

/// A candidate `χ(t)` together with its analytic derivatives.
///
/// The three "derived" methods have defaults computed from `χ̇`, `χ̈` and the
/// envelope, but families that know a cancellation-free form (everything
/// built through `B(t)`) override them. The solver only ever reads `χ̇`
/// through these methods, so an override is all it takes to make the
/// saturation points well conditioned.
pub trait ChiAnsatz: Send + Sync {
    fn chi(&self, t: f64) -> f64;
    fn chi_dot(&self, t: f64) -> f64;
    fn chi_ddot(&self, t: f64) -> f64;
    fn eta(&self) -> Eta;

    fn params(&self) -> Params {
        Params::new()
    }

    fn name(&self) -> &str {
        "custom"
    }

    /// `χ̇/β`, the sine of `κ_I`.
    fn speed_ratio(&self, t: f64, beta: f64) -> f64 {
        self.chi_dot(t) / beta
    }

    /// The QSL gap `1 - χ̇²/β²`.
    fn qsl_gap(&self, t: f64, beta: f64) -> f64 {
        let r = self.speed_ratio(t, beta);
        (1.0 - r) * (1.0 + r)
    }

    /// `(χ̈ - χ̇β̇/β)/β²`, which equals `d²χ/dB²`. The first term of `b_z` is
    /// `β · bend / (2√gap)`.
    fn bend(&self, t: f64, beta: f64, beta_dot: f64) -> f64 {
        (self.chi_ddot(t) - self.chi_dot(t) * beta_dot / beta) / (beta * beta)
    }

    /// `(b_z - φ̇/2)/β` in a cancellation-free form, where the family has one.
    /// The generic expression subtracts two terms that both blow up as the
    /// speed limit is approached.
    fn field_per_beta(&self, _t: f64) -> Option<f64> {
        None
    }

    /// Times at which the family declares `b_z = ±∞` (sweeps starting or
    /// ending infinitely far from the anti-crossing).
    fn divergent_times(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl fmt::Debug for dyn ChiAnsatz + '_ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChiAnsatz")
            .field("name", &self.name())
            .field("eta", &self.eta())
            .field("params", &self.params())
            .finish()
    }
}

/// `χ` as a function of the pulse area `B`. Composed with an envelope this
/// satisfies the QSL constraint automatically whenever `|dχ/dB| ≤ 1`.
pub trait ChiOfB: Send + Sync {
    fn value(&self, b: f64) -> f64;
    /// `dχ/dB`.
    fn slope(&self, b: f64) -> f64;
    /// `d²χ/dB²`.
    fn curvature(&self, b: f64) -> f64;

    /// `1 - (dχ/dB)²`; override when this cancels badly near saturation.
    fn gap(&self, b: f64) -> f64 {
        let s = self.slope(b);
        (1.0 - s) * (1.0 + s)
    }

    /// `d²χ/dB² / (2√gap) - √gap cot 2χ`, if known in a stable form.
    fn field_factor(&self, _b: f64) -> Option<f64> {
        None
    }

    fn eta(&self) -> Eta {
        Eta::Plus
    }

    fn params(&self) -> Params {
        Params::new()
    }

    fn name(&self) -> &str;
}

/// `χ(t) = f(B(t))` for a profile `f` and a given envelope.
#[derive(Clone)]
pub struct BDriven<P> {
    pub profile: P,
    pub envelope: Arc<dyn Envelope>,
}

impl<P: ChiOfB> BDriven<P> {
    pub fn new(profile: P, envelope: Arc<dyn Envelope>) -> Self {
        Self { profile, envelope }
    }
}

impl<P: ChiOfB> ChiAnsatz for BDriven<P> {
    fn chi(&self, t: f64) -> f64 {
        self.profile.value(self.envelope.area(t))
    }
    fn chi_dot(&self, t: f64) -> f64 {
        self.envelope.beta(t) * self.profile.slope(self.envelope.area(t))
    }
    fn chi_ddot(&self, t: f64) -> f64 {
        let b = self.envelope.area(t);
        let beta = self.envelope.beta(t);
        self.envelope.beta_dot(t) * self.profile.slope(b) + beta * beta * self.profile.curvature(b)
    }
    fn eta(&self) -> Eta {
        self.profile.eta()
    }
    fn params(&self) -> Params {
        self.profile.params()
    }
    fn name(&self) -> &str {
        self.profile.name()
    }
    // exact in B, and finite even where β vanishes
    fn speed_ratio(&self, t: f64, _beta: f64) -> f64 {
        self.profile.slope(self.envelope.area(t))
    }
    fn qsl_gap(&self, t: f64, _beta: f64) -> f64 {
        self.profile.gap(self.envelope.area(t))
    }
    fn bend(&self, t: f64, _beta: f64, _beta_dot: f64) -> f64 {
        self.profile.curvature(self.envelope.area(t))
    }
    fn field_per_beta(&self, t: f64) -> Option<f64> {
        let b = self.envelope.area(t);
        // at B = 0 take the limit in the direction the area is moving
        let b = if b == 0.0 {
            f64::MIN_POSITIVE.copysign(self.envelope.beta(t))
        } else {
            b
        };
        self.profile.field_factor(b)
    }
}

/// The saturating profile `χ = -ηB`: the speed limit is met with equality
/// everywhere and the evolution is a pure x-rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saturation {
    pub eta: Eta,
}

impl ChiOfB for Saturation {
    fn value(&self, b: f64) -> f64 {
        -self.eta.sign() * b
    }
    fn slope(&self, _b: f64) -> f64 {
        -self.eta.sign()
    }
    fn curvature(&self, _b: f64) -> f64 {
        0.0
    }
    fn gap(&self, _b: f64) -> f64 {
        0.0
    }
    fn eta(&self) -> Eta {
        self.eta
    }
    fn name(&self) -> &str {
        "saturation"
    }
}

/// `χ = -ηB(t)` for the given envelope.
pub fn saturating(envelope: Arc<dyn Envelope>, eta: Eta) -> BDriven<Saturation> {
    BDriven::new(Saturation { eta }, envelope)
}

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Ansatz from three closures; for ad-hoc experiments and tests.
pub struct FnAnsatz {
    chi: ScalarFn,
    chi_dot: ScalarFn,
    chi_ddot: ScalarFn,
    eta: Eta,
    params: Params,
}

impl FnAnsatz {
    pub fn new<F, G, H>(chi: F, chi_dot: G, chi_ddot: H, eta: Eta) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            chi: Box::new(chi),
            chi_dot: Box::new(chi_dot),
            chi_ddot: Box::new(chi_ddot),
            eta,
            params: Params::new(),
        }
    }

    pub fn with_params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }
}

impl ChiAnsatz for FnAnsatz {
    fn chi(&self, t: f64) -> f64 {
        (self.chi)(t)
    }
    fn chi_dot(&self, t: f64) -> f64 {
        (self.chi_dot)(t)
    }
    fn chi_ddot(&self, t: f64) -> f64 {
        (self.chi_ddot)(t)
    }
    fn eta(&self) -> Eta {
        self.eta
    }
    fn params(&self) -> Params {
        self.params.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::envelope::ModulatedEnvelope;

    #[test]
    fn b_driven_chain_rule_matches_finite_differences() {
        struct Quad;
        impl ChiOfB for Quad {
            fn value(&self, b: f64) -> f64 {
                -b + 0.1 * b * b
            }
            fn slope(&self, b: f64) -> f64 {
                -1.0 + 0.2 * b
            }
            fn curvature(&self, _b: f64) -> f64 {
                0.2
            }
            fn name(&self) -> &str {
                "quad"
            }
        }
        let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
        let chi = BDriven::new(Quad, env.clone());
        let h = 1e-5;
        for t in [0.3, 1.1, 2.7] {
            let fd1 = (chi.chi(t + h) - chi.chi(t - h)) / (2.0 * h);
            let fd2 = (chi.chi_dot(t + h) - chi.chi_dot(t - h)) / (2.0 * h);
            assert!((fd1 - chi.chi_dot(t)).abs() < 1e-8);
            assert!((fd2 - chi.chi_ddot(t)).abs() < 1e-7);
            // the overridden helpers agree with the generic formulas
            let (beta, beta_dot) = (env.beta(t), env.beta_dot(t));
            let generic_bend = (chi.chi_ddot(t) - chi.chi_dot(t) * beta_dot / beta) / (beta * beta);
            assert!((chi.bend(t, beta, beta_dot) - generic_bend).abs() < 1e-12);
            let r = chi.chi_dot(t) / beta;
            assert!((chi.qsl_gap(t, beta) - (1.0 - r * r)).abs() < 1e-12);
        }
    }

    #[test]
    fn saturation_has_zero_gap() {
        let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
        let chi = saturating(env.clone(), Eta::Plus);
        assert_eq!(chi.qsl_gap(0.7, env.beta(0.7)), 0.0);
        assert_eq!(chi.chi(0.7), -env.area(0.7));
        assert_eq!(Eta::from_sign(-0.1), Some(Eta::Minus));
        assert_eq!(Eta::from_sign(0.0), None);
    }
}
