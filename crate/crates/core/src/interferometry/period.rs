//! Forward sweep followed by its time-reverse: `U(2T) = U(T)ᵀ U(T)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{compose, PhaseSet, Propagator};
use crate::solver::{evolution, xi_phases, ChiAnsatz, Envelope};

/// Allowed `|χ̇(T)/β(T) + η|` at the turning point.
pub const ENDPOINT_TOL: f64 = 1e-9;

/// One point of a fringe pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FringePoint {
    #[serde(rename = "T")]
    pub t_final: f64,
    pub chi_t: f64,
    pub xi0_t: f64,
    pub p2_bar: f64,
}

fn check_turning_point(chi: &dyn ChiAnsatz, env: &dyn Envelope, t_final: f64) -> Result<()> {
    let ratio = chi.speed_ratio(t_final, env.beta(t_final));
    let mismatch = ratio + chi.eta().sign();
    if !(mismatch.abs() <= ENDPOINT_TOL) {
        return Err(Error::EndpointCondition { mismatch });
    }
    if env.phi(t_final) != 0.0 || env.phi_dot(t_final) != 0.0 {
        return Err(Error::InvalidParameter(
            "retraced sweep needs a real Hamiltonian (phi = 0)".into(),
        ));
    }
    Ok(())
}

/// Closed-form propagator over one full period `[0, 2T]`,
/// `u11 = e^{2iξ₀(T)} cos 2χ(T)`, `u21 = iη sin 2χ(T)`, together with the
/// half-period phases.
pub fn period_evolution(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    t_final: f64,
) -> Result<(Propagator, PhaseSet)> {
    check_turning_point(chi, env, t_final)?;
    let phases = xi_phases(chi, env, t_final)?;
    let two_chi = 2.0 * chi.chi(t_final);
    let u11 = Complex64::from_polar(two_chi.cos(), 2.0 * phases.xi_zero);
    let u21 = Complex64::new(0.0, chi.eta().sign() * two_chi.sin());
    Ok((Propagator::new(u11, u21)?, phases))
}

/// Same period propagator built by composing the half-period evolution with
/// its transpose. Used to cross-check the closed form.
pub fn period_evolution_composed(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    t_final: f64,
) -> Result<Propagator> {
    check_turning_point(chi, env, t_final)?;
    let half = evolution(chi, env, t_final)?;
    Ok(compose(&half.transpose(), &half))
}

/// `P̄₂ = [2 + 2 cot²(2χ) sin²(2ξ₀)]⁻¹` for a period that ends at `χ(T)`
/// with mean phase `ξ₀(T)`; exactly zero when `sin 2χ(T)` vanishes.
pub fn average_p2(chi_t: f64, xi0_t: f64) -> f64 {
    let (s, c) = (2.0 * chi_t).sin_cos();
    if s.abs() <= 4.0 * f64::EPSILON {
        return 0.0;
    }
    let q = (2.0 * xi0_t).sin();
    // s²/(2s² + 2c²q²) avoids overflowing cot near the zeros of sin 2χ
    s * s / (2.0 * s * s + 2.0 * c * c * q * q)
}

/// Long-time average of the transition probability under repetition of the
/// period.
pub fn time_avg_p2(chi: &dyn ChiAnsatz, env: &dyn Envelope, t_final: f64) -> Result<FringePoint> {
    let (_, phases) = period_evolution(chi, env, t_final)?;
    let chi_t = chi.chi(t_final);
    Ok(FringePoint {
        t_final,
        chi_t,
        xi0_t: phases.xi_zero,
        p2_bar: average_p2(chi_t, phases.xi_zero),
    })
}

/// Running mean of `|(Uⁿ)₂₁|²` over `n = 1..=periods`, by repeated
/// multiplication; the brute-force counterpart of [`average_p2`].
pub fn monodromy_average(period: &Propagator, periods: usize) -> f64 {
    let mut u = Propagator::identity();
    let mut sum = 0.0;
    for _ in 0..periods {
        u = compose(period, &u);
        sum += u.transition_probability();
    }
    if periods == 0 {
        0.0
    } else {
        sum / periods as f64
    }
}
