//! Lifting a constant-`β₀` solution to an arbitrary envelope through
//! `χ(t) = χ₀(B(t)/β₀)`.

use std::sync::Arc;

use crate::solver::{ChiAnsatz, Envelope, Eta, Params};

/// `χ₀(B(t)/β₀)` on the envelope `env`, where `χ₀` was valid for `β = β₀`.
/// The speed ratio, the gap and `d²χ/dB²` are inherited unchanged from `χ₀`
/// evaluated at `B/β₀`, so the speed limit carries over by construction.
#[derive(Clone)]
pub struct Lifted<C> {
    pub inner: C,
    pub beta0: f64,
    pub envelope: Arc<dyn Envelope>,
}

pub fn lift_constant_beta<C: ChiAnsatz>(chi0: C, beta0: f64, env: Arc<dyn Envelope>) -> Lifted<C> {
    Lifted {
        inner: chi0,
        beta0,
        envelope: env,
    }
}

impl<C: ChiAnsatz> Lifted<C> {
    fn s(&self, t: f64) -> f64 {
        self.envelope.area(t) / self.beta0
    }
}

impl<C: ChiAnsatz> ChiAnsatz for Lifted<C> {
    fn chi(&self, t: f64) -> f64 {
        self.inner.chi(self.s(t))
    }
    fn chi_dot(&self, t: f64) -> f64 {
        self.inner.chi_dot(self.s(t)) * self.envelope.beta(t) / self.beta0
    }
    fn chi_ddot(&self, t: f64) -> f64 {
        let s = self.s(t);
        let r = self.envelope.beta(t) / self.beta0;
        self.inner.chi_ddot(s) * r * r + self.inner.chi_dot(s) * self.envelope.beta_dot(t) / self.beta0
    }
    fn eta(&self) -> Eta {
        self.inner.eta()
    }
    fn params(&self) -> Params {
        let mut p = self.inner.params();
        p.insert("beta0".into(), self.beta0);
        p
    }
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn speed_ratio(&self, t: f64, _beta: f64) -> f64 {
        self.inner.speed_ratio(self.s(t), self.beta0)
    }
    fn qsl_gap(&self, t: f64, _beta: f64) -> f64 {
        self.inner.qsl_gap(self.s(t), self.beta0)
    }
    fn bend(&self, t: f64, _beta: f64, _beta_dot: f64) -> f64 {
        self.inner.bend(self.s(t), self.beta0, 0.0)
    }
    fn field_per_beta(&self, t: f64) -> Option<f64> {
        self.inner.field_per_beta(self.s(t))
    }
    fn divergent_times(&self) -> Vec<f64> {
        // only the start maps back without inverting B
        self.inner
            .divergent_times()
            .into_iter()
            .filter(|&s| s == 0.0)
            .collect()
    }
}
