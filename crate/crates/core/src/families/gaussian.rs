//! `χ = -½ acos(e^{-2B²})`: a smooth Gaussian-like pulse for any `β`.

use std::sync::Arc;

use crate::error::Result;
use crate::solver::{BDriven, ChiOfB, Envelope, ErfEnvelope, Eta, Params};

/// `[1 - (1+y)e^{-y}]/y²`, accurate (and free of underflow) for small `y`.
fn gap_numerator_ratio(y: f64) -> f64 {
    if y >= 0.5 {
        return (1.0 - (1.0 + y) * (-y).exp()) / (y * y);
    }
    // Σ_{n≥2} (-1)^n (n-1) y^{n-2}/n!
    let mut term = 0.5; // y^{n-2}/n! at n = 2
    let mut sum = 0.0;
    for n in 2..40 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let add = sign * (n as f64 - 1.0) * term;
        sum += add;
        if add.abs() <= 1e-18 * sum.abs() {
            break;
        }
        term *= y / (n as f64 + 1.0);
    }
    sum
}

/// `(1 - e^{-y} - y) / (y (1 - e^{-y}))`, tends to `-1/2` as `y → 0`.
fn curvature_factor(y: f64) -> f64 {
    if y >= 0.5 {
        let e = -(-y).exp_m1();
        return (e - y) / (y * e);
    }
    // numerator / y² = -Σ_{n≥2} (-y)^{n-2}/n!
    let mut term = 0.5;
    let mut num = 0.0;
    for n in 2..40 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        num -= sign * term;
        if term <= 1e-18 {
            break;
        }
        term *= y / (n as f64 + 1.0);
    }
    let den = -(-y).exp_m1() / y;
    num / den
}

/// The Gaussian-like profile as a function of `B`, extended oddly to
/// negative `B` so that `η = +1` on both signs of the pulse area.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaussianProfile;

impl GaussianProfile {
    fn y(b: f64) -> f64 {
        4.0 * b * b
    }
}

impl ChiOfB for GaussianProfile {
    fn value(&self, b: f64) -> f64 {
        // sin²χ = (1 - e^{-2B²})/2
        let s2 = -0.5 * (-2.0 * b * b).exp_m1();
        -b.signum() * s2.sqrt().asin()
    }

    fn slope(&self, b: f64) -> f64 {
        let y = Self::y(b);
        if y == 0.0 {
            return -1.0;
        }
        -(y * (-y).exp() / -(-y).exp_m1()).sqrt()
    }

    fn curvature(&self, b: f64) -> f64 {
        4.0 * b * self.slope(b) * curvature_factor(Self::y(b))
    }

    fn gap(&self, b: f64) -> f64 {
        let y = Self::y(b);
        if y == 0.0 {
            return 0.0;
        }
        (y * gap_numerator_ratio(y) / (-(-y).exp_m1() / y)).min(1.0)
    }

    // the two terms of b_z combine to sgn(B) e^{-2B²} y / √(1 - (1+y)e^{-y}),
    // which tends to ±√2 as B → 0
    fn field_factor(&self, b: f64) -> Option<f64> {
        if b == 0.0 {
            return None;
        }
        let y = Self::y(b);
        Some(b.signum() * (-2.0 * b * b).exp() / gap_numerator_ratio(y).sqrt())
    }

    fn eta(&self) -> Eta {
        Eta::Plus
    }

    fn name(&self) -> &str {
        "gaussian"
    }
}

/// Parameters of the erf-area pulse `β = μν e^{-ν²(t-t₀)²}/√π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFamily {
    pub mu: f64,
    pub nu: f64,
    pub t_center: f64,
}

impl GaussianFamily {
    pub fn new(mu: f64, nu: f64, t_center: f64) -> Result<Self> {
        ErfEnvelope::new(mu, nu, t_center)?;
        Ok(Self { mu, nu, t_center })
    }

    pub fn envelope(&self) -> ErfEnvelope {
        ErfEnvelope::new(self.mu, self.nu, self.t_center).expect("validated in new")
    }

    pub fn params(&self) -> Params {
        Params::from([
            ("mu".to_string(), self.mu),
            ("nu".to_string(), self.nu),
            ("t0".to_string(), self.t_center),
        ])
    }

    /// `χ(t → ∞)`.
    pub fn asymptotic_chi(&self) -> f64 {
        GaussianProfile.value(self.envelope().total_area())
    }

    /// The ansatz on its own erf envelope.
    pub fn chi(&self) -> BDriven<GaussianProfile> {
        gaussian_chi(Arc::new(self.envelope()))
    }
}

/// The Gaussian-like ansatz on an arbitrary envelope.
pub fn gaussian_chi(env: Arc<dyn Envelope>) -> BDriven<GaussianProfile> {
    BDriven::new(GaussianProfile, env)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_match_the_defining_formula() {
        let p = GaussianProfile;
        for b in [1e-6_f64, 0.01, 0.2, 0.35, 0.5, 1.0, 2.5, -0.3] {
            let literal = -0.5 * (-2.0 * b * b).exp().acos();
            let literal = if b < 0.0 { -literal } else { literal };
            assert!((p.value(b) - literal).abs() < 1e-9 * (1.0 + literal.abs()), "b={b}");
            let h = 1e-6 * (1.0 + b.abs());
            let fd = (p.value(b + h) - p.value(b - h)) / (2.0 * h);
            assert!((fd - p.slope(b)).abs() < 1e-7, "slope b={b}");
            let fd2 = (p.slope(b + h) - p.slope(b - h)) / (2.0 * h);
            assert!((fd2 - p.curvature(b)).abs() < 1e-6, "curvature b={b}");
            let s = p.slope(b);
            assert!((p.gap(b) - (1.0 - s * s)).abs() < 1e-14, "gap b={b}");
        }
    }

    #[test]
    fn series_and_direct_branches_agree() {
        for y in [0.4999999_f64, 0.5] {
            let direct = (1.0 - (1.0 + y) * (-y).exp()) / (y * y);
            assert!((gap_numerator_ratio(y) - direct).abs() < 1e-14);
            let e = -(-y).exp_m1();
            assert!((curvature_factor(y) - (e - y) / (y * e)).abs() < 1e-14);
        }
        assert!((curvature_factor(1e-12) + 0.5).abs() < 1e-11);
    }

    #[test]
    fn starts_saturated_and_respects_speed_limit() {
        let p = GaussianProfile;
        assert_eq!(p.value(0.0), 0.0);
        assert_eq!(p.slope(0.0), -1.0);
        assert_eq!(p.gap(0.0), 0.0);
        for i in 1..200 {
            let b = i as f64 * 0.02;
            assert!(p.gap(b) > 0.0 && p.gap(b) <= 1.0);
        }
        // small-B gap ≈ 2B² (leading order y²/2 / y)
        let b = 1e-5;
        assert!((p.gap(b) / (2.0 * b * b) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn stable_field_factor() {
        let p = GaussianProfile;
        for b in [0.05_f64, 0.3, 0.8, 1.7, -0.4] {
            let g = p.gap(b);
            let generic = p.curvature(b) / (2.0 * g.sqrt()) - g.sqrt() / (2.0 * p.value(b)).tan();
            assert!((p.field_factor(b).unwrap() - generic).abs() < 1e-10, "b={b}");
        }
        let s2 = std::f64::consts::SQRT_2;
        for b in [1e-300, 1e-120, 1e-30] {
            assert!((p.field_factor(b).unwrap() - s2).abs() < 1e-14);
            assert!((p.field_factor(-b).unwrap() + s2).abs() < 1e-14);
            assert!(p.gap(b) > 0.0 || b < 1e-154);
        }
    }

    #[test]
    fn asymptote_uses_total_area() {
        let fam = GaussianFamily::new(0.25, 3.0, 5.0).unwrap();
        let b_inf = 0.5 * 0.25 * (1.0 + libm::erf(15.0));
        let expect = -0.5 * (-2.0 * b_inf * b_inf as f64).exp().acos();
        assert!((fam.asymptotic_chi() - expect).abs() < 1e-12);
    }
}
