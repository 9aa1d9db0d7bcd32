//! The LMSZ sweep `χ = b_x t - (a b_x T/2) t² + (a b_x/3) t³` on a constant
//! transverse field. `b_z` starts at `-∞` and ends at `+∞`: the sweep runs
//! from far below the anti-crossing to far above it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SweepBound};
use crate::solver::{ChiAnsatz, ConstantEnvelope, Eta, Params};

/// `16/(3T²)`, the largest sweep rate that keeps `χ > 0` on `(0, T]`.
pub fn max_sweep_rate(t_final: f64) -> f64 {
    16.0 / (3.0 * t_final * t_final)
}

/// `a(T) = 6[b_x T - χ(T)]/(b_x T³)`, the sweep rate that lands on
/// `χ(T) = chi_t`. Accepts exactly `b_x T ∈ [χ(T), 9χ(T)]` (up to a few ulps
/// of round-off) and returns a value clamped into `[0, 16/(3T²)]`.
pub fn solve_sweep_rate(chi_t: f64, bx: f64, t_final: f64) -> Result<f64> {
    if !(chi_t > 0.0 && chi_t <= std::f64::consts::FRAC_PI_2 * (1.0 + 4.0 * f64::EPSILON)) {
        return Err(Error::InvalidParameter(format!("chi(T) = {chi_t} outside (0, pi/2]")));
    }
    if !(bx > 0.0 && bx.is_finite() && t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need b_x > 0 and T > 0, got b_x = {bx}, T = {t_final}"
        )));
    }
    let x = bx * t_final;
    let slack = 8.0 * f64::EPSILON;
    if x < chi_t * (1.0 - slack) {
        return Err(Error::OutOfBounds {
            bound: SweepBound::SpeedLimit,
        });
    }
    if x > 9.0 * chi_t * (1.0 + slack) {
        return Err(Error::OutOfBounds {
            bound: SweepBound::CubicUpper,
        });
    }
    let a = 6.0 * (x - chi_t) / (bx * t_final.powi(3));
    Ok(a.clamp(0.0, max_sweep_rate(t_final)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicFamily {
    pub a: f64,
    pub bx: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub chi_t: f64,
}

impl CubicFamily {
    /// From the sweep rate directly.
    pub fn new(a: f64, bx: f64, t_final: f64) -> Result<Self> {
        if !(bx > 0.0 && t_final > 0.0 && bx.is_finite() && t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need b_x > 0 and T > 0, got b_x = {bx}, T = {t_final}"
            )));
        }
        if a < 0.0 {
            return Err(Error::OutOfBounds {
                bound: SweepBound::SpeedLimit,
            });
        }
        if a > max_sweep_rate(t_final) * (1.0 + 8.0 * f64::EPSILON) {
            return Err(Error::OutOfBounds {
                bound: SweepBound::CubicUpper,
            });
        }
        let chi_t = bx * t_final - a * bx * t_final.powi(3) / 6.0;
        Ok(Self {
            a,
            bx,
            t_final,
            chi_t,
        })
    }

    /// The member that reaches `χ(T) = chi_t`.
    pub fn for_target(chi_t: f64, bx: f64, t_final: f64) -> Result<Self> {
        let a = solve_sweep_rate(chi_t, bx, t_final)?;
        Ok(Self {
            a,
            bx,
            t_final,
            chi_t,
        })
    }

    pub fn envelope(&self) -> ConstantEnvelope {
        ConstantEnvelope::new(self.bx)
    }

    /// `T_QSL = χ(T)/b_x`.
    pub fn qsl_time(&self) -> f64 {
        self.chi_t / self.bx
    }

    /// Value of `χ` at its interior local minimum, if it has one. Zero on the
    /// upper boundary `a = 16/(3T²)`, where the profile touches `χ = 0`.
    pub fn interior_minimum(&self) -> Option<f64> {
        let t = self.t_final;
        let disc = t * t / 4.0 - 1.0 / self.a;
        if !(self.a > 0.0 && disc > 0.0) {
            return None;
        }
        let tm = t / 2.0 + disc.sqrt();
        Some(cubic_chi(*self).chi(tm))
    }

    pub fn params(&self) -> Params {
        Params::from([
            ("a".to_string(), self.a),
            ("bx".to_string(), self.bx),
            ("T".to_string(), self.t_final),
            ("chi_T".to_string(), self.chi_t),
        ])
    }
}

/// The cubic ansatz. `η = -1`; the envelope is the constant `b_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicChi {
    pub family: CubicFamily,
}

pub fn cubic_chi(family: CubicFamily) -> CubicChi {
    CubicChi { family }
}

impl CubicChi {
    /// `w = a t (T - t)`, so that `χ̇ = b_x (1 - w)`.
    fn w(&self, t: f64) -> f64 {
        self.family.a * t * (self.family.t_final - t)
    }
}

impl ChiAnsatz for CubicChi {
    fn chi(&self, t: f64) -> f64 {
        let CubicFamily {
            a, bx, t_final, ..
        } = self.family;
        bx * t * (1.0 - a * t_final * t / 2.0 + a * t * t / 3.0)
    }

    fn chi_dot(&self, t: f64) -> f64 {
        self.family.bx * (1.0 - self.w(t))
    }

    fn chi_ddot(&self, t: f64) -> f64 {
        let CubicFamily {
            a, bx, t_final, ..
        } = self.family;
        bx * a * (2.0 * t - t_final)
    }

    fn eta(&self) -> Eta {
        Eta::Minus
    }

    fn params(&self) -> Params {
        self.family.params()
    }

    fn name(&self) -> &str {
        "cubic"
    }

    fn speed_ratio(&self, t: f64, beta: f64) -> f64 {
        if beta == self.family.bx {
            1.0 - self.w(t)
        } else {
            self.chi_dot(t) / beta
        }
    }

    fn qsl_gap(&self, t: f64, beta: f64) -> f64 {
        if beta == self.family.bx {
            let w = self.w(t);
            w * (2.0 - w)
        } else {
            let r = self.chi_dot(t) / beta;
            (1.0 - r) * (1.0 + r)
        }
    }

    fn bend(&self, t: f64, beta: f64, beta_dot: f64) -> f64 {
        (self.chi_ddot(t) - self.chi_dot(t) * beta_dot / beta) / (beta * beta)
    }

    fn divergent_times(&self) -> Vec<f64> {
        if self.family.a > 0.0 {
            vec![0.0, self.family.t_final]
        } else {
            Vec::new()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn boundary_rates() {
        let t = 1.7;
        let chi_t = PI / 2.1;
        assert_eq!(solve_sweep_rate(chi_t, chi_t / t, t).unwrap(), 0.0);
        let top = solve_sweep_rate(chi_t, 9.0 * chi_t / t, t).unwrap();
        assert!((top - 16.0 / (3.0 * t * t)).abs() <= 1e-12);
        assert!(matches!(
            solve_sweep_rate(chi_t, 0.99 * chi_t / t, t),
            Err(Error::OutOfBounds {
                bound: SweepBound::SpeedLimit
            })
        ));
        assert!(matches!(
            solve_sweep_rate(chi_t, 9.01 * chi_t / t, t),
            Err(Error::OutOfBounds {
                bound: SweepBound::CubicUpper
            })
        ));
    }

    #[test]
    fn narp_rate_for_bxt_two() {
        // χ(T) = π/2, b_x T = 2 → a T² = 3(2 - π/2)
        for t in [0.5, 1.0, 3.0] {
            let a = solve_sweep_rate(PI / 2.0, 2.0 / t, t).unwrap();
            assert!((a * t * t - 1.287_611_019_615_31).abs() < 1e-12);
        }
    }

    #[test]
    fn hits_target_angle() {
        for (chi_t, x) in [(PI / 2.0, 1.8), (PI / 2.1, 2.0), (PI / 4.0, 3.0 * PI / 4.0)] {
            let t = 1.3;
            let fam = CubicFamily::for_target(chi_t, x / t, t).unwrap();
            let chi = cubic_chi(fam);
            assert!((chi.chi(t) - chi_t).abs() < 1e-12);
            assert_eq!(chi.chi(0.0), 0.0);
            // endpoints saturate
            assert_eq!(chi.qsl_gap(0.0, fam.bx), 0.0);
            assert_eq!(chi.qsl_gap(t, fam.bx), 0.0);
            assert_eq!(chi.chi_dot(t), fam.bx);
        }
    }

    #[test]
    fn upper_boundary_touches_zero() {
        let t = 2.0;
        let fam = CubicFamily::for_target(PI / 2.1, 9.0 * PI / (2.1 * t), t).unwrap();
        assert!(fam.interior_minimum().unwrap().abs() < 1e-12);
        let inside = CubicFamily::for_target(PI / 2.1, 4.0 * PI / (2.1 * t), t).unwrap();
        assert!(inside.interior_minimum().unwrap() > 0.1);
    }

    #[test]
    fn zero_rate_saturates() {
        let fam = CubicFamily::new(0.0, 1.2, 2.0).unwrap();
        let chi = cubic_chi(fam);
        assert!((chi.chi(1.5) - 1.8).abs() < 1e-15);
        assert!((fam.chi_t - 2.4).abs() < 1e-15);
        assert!(chi.divergent_times().is_empty());
    }
}
