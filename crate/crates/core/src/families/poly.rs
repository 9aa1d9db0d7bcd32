//! `χ = -B [1 + (a₂B)² + (a₄B)⁴ + … + (a_k B)^k]^{-1/k}`: near-QSL pulses
//! with arbitrarily many shape parameters.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{BDriven, ChiOfB, Envelope, Eta, Params};

/// What the coefficients multiply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PolyConvention {
    /// `a_i t` with constant `β₀` (so `a_i` has units of 1/time). The pulse
    /// choice is `a_k = 4β₀/π`.
    PerTime,
    /// `a_i B` (dimensionless per radian). The pulse choice is `a_k = 4/π`.
    #[default]
    PerB,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyFamily {
    pub k: usize,
    /// `a₂, a₄, …, a_k`.
    pub a: Vec<f64>,
    pub beta0: f64,
    pub convention: PolyConvention,
}

impl PolyFamily {
    pub fn new(k: usize, a: Vec<f64>, beta0: f64, convention: PolyConvention) -> Result<Self> {
        if k == 0 || k % 2 != 0 {
            return Err(Error::InvalidParameter(format!("k must be even and positive, got {k}")));
        }
        if a.len() != k / 2 {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients a2..a{k}, got {}",
                k / 2,
                a.len()
            )));
        }
        if a.iter().any(|x| !x.is_finite()) || a[a.len() - 1] < 0.0 {
            return Err(Error::InvalidParameter("coefficients must be finite with a_k >= 0".into()));
        }
        if !(beta0 > 0.0 && beta0.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta0 must be positive, got {beta0}")));
        }
        Ok(Self {
            k,
            a,
            beta0,
            convention,
        })
    }

    /// The pulse choice: all `a_{i<k} = 0` and `a_k` set so that `χ → -π/4`.
    pub fn pulse(k: usize, beta0: f64, convention: PolyConvention) -> Result<Self> {
        let mut a = vec![0.0; k / 2];
        if let Some(last) = a.last_mut() {
            *last = match convention {
                PolyConvention::PerTime => 4.0 * beta0 / PI,
                PolyConvention::PerB => 4.0 / PI,
            };
        }
        Self::new(k, a, beta0, convention)
    }

    /// Coefficients rescaled to multiply `B`.
    pub fn coefficients_per_b(&self) -> Vec<f64> {
        match self.convention {
            PolyConvention::PerB => self.a.clone(),
            PolyConvention::PerTime => self.a.iter().map(|a| a / self.beta0).collect(),
        }
    }

    pub fn profile(&self) -> PolyProfile {
        PolyProfile::new(self.k, self.coefficients_per_b())
    }

    pub fn params(&self) -> Params {
        let mut p = Params::from([("k".to_string(), self.k as f64), ("beta0".to_string(), self.beta0)]);
        for (j, a) in self.a.iter().enumerate() {
            p.insert(format!("a{}", 2 * (j + 1)), *a);
        }
        p
    }

    /// Exact `b_z(0)`: `√(6/k) a₂` times `β₀` for the per-B convention.
    pub fn initial_bz(&self) -> f64 {
        let scale = match self.convention {
            PolyConvention::PerB => self.beta0,
            PolyConvention::PerTime => 1.0,
        };
        (6.0 / self.k as f64).sqrt() * self.a[0].abs() * scale
    }
}

/// The profile in `B` with coefficients `a_i` multiplying `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyProfile {
    k: usize,
    /// `(i, a_i)` with non-zero `a_i` only.
    terms: Vec<(i32, f64)>,
    params: Params,
}

/// `S = 1 + Σc_i`, `P = 1 + Σ(1-i/k)c_i` with `c_i = (a_i B)^i`, and their
/// `B`-derivatives, all divided by `S` so they stay bounded for huge `B`.
struct Scaled {
    /// `ln S`.
    ln_s: f64,
    /// `s = S - 1`, kept separately for precision when small.
    s: f64,
    q: f64,
    p_over_s: f64,
    ds_over_s: f64,
    dq_over_s: f64,
}

impl PolyProfile {
    pub fn new(k: usize, a: Vec<f64>) -> Self {
        let mut params = Params::from([("k".to_string(), k as f64)]);
        let mut terms = Vec::new();
        for (j, &aj) in a.iter().enumerate() {
            let i = 2 * (j as i32 + 1);
            params.insert(format!("a{i}"), aj);
            if aj != 0.0 {
                terms.push((i, aj));
            }
        }
        Self { k, terms, params }
    }

    fn p(&self) -> f64 {
        1.0 + 1.0 / self.k as f64
    }

    fn scaled(&self, b: f64) -> Scaled {
        let kf = self.k as f64;
        let (mut s, mut q, mut ds, mut dq) = (0.0, 0.0, 0.0, 0.0);
        for &(i, a) in &self.terms {
            let fi = i as f64;
            let ab = a * b;
            let w = 1.0 - fi / kf;
            let c = ab.powi(i);
            // i c_i / B without dividing by B
            let dc = fi * a * ab.powi(i - 1);
            s += c;
            q += w * c;
            ds += dc;
            dq += w * dc;
        }
        if s < 1.0 {
            let inv = 1.0 / (1.0 + s);
            return Scaled {
                ln_s: s.ln_1p(),
                s,
                q,
                p_over_s: (1.0 + q) * inv,
                ds_over_s: ds * inv,
                dq_over_s: dq * inv,
            };
        }
        // log-sum-exp over the terms; B ≠ 0 here
        let logs: Vec<(f64, f64, f64)> = self
            .terms
            .iter()
            .map(|&(i, a)| (i as f64, i as f64 * (a * b).abs().ln(), 1.0 - i as f64 / kf))
            .collect();
        let m = logs.iter().map(|l| l.1).fold(0.0, f64::max);
        let ln_s = m + ((-m).exp() + logs.iter().map(|l| (l.1 - m).exp()).sum::<f64>()).ln();
        let mut out = Scaled {
            ln_s,
            s,
            q,
            p_over_s: (-ln_s).exp(),
            ds_over_s: 0.0,
            dq_over_s: 0.0,
        };
        for &(fi, li, w) in &logs {
            let c_over_s = (li - ln_s).exp();
            out.p_over_s += w * c_over_s;
            out.ds_over_s += fi * c_over_s / b;
            out.dq_over_s += w * fi * c_over_s / b;
        }
        out
    }

    /// `P S^{-p}`, which equals `-χ'`.
    fn ratio(&self, x: &Scaled) -> f64 {
        x.p_over_s * (-x.ln_s / self.k as f64).exp()
    }
}

impl ChiOfB for PolyProfile {
    fn value(&self, b: f64) -> f64 {
        -b * (-self.scaled(b).ln_s / self.k as f64).exp()
    }

    fn slope(&self, b: f64) -> f64 {
        -self.ratio(&self.scaled(b))
    }

    fn curvature(&self, b: f64) -> f64 {
        let x = self.scaled(b);
        let shrink = (-x.ln_s / self.k as f64).exp();
        shrink * (-x.dq_over_s + self.p() * x.p_over_s * x.ds_over_s)
    }

    fn gap(&self, b: f64) -> f64 {
        let x = self.scaled(b);
        let r = self.ratio(&x);
        if x.s < 1.0 {
            // 1 - P S^{-p} = (S^p - P)/S^p with S^p - P = expm1(p ln S) - q
            let lp = self.p() * x.ln_s;
            (lp.exp_m1() - x.q) * (-lp).exp() * (1.0 + r)
        } else {
            (1.0 - r) * (1.0 + r)
        }
    }

    fn eta(&self) -> Eta {
        Eta::Plus
    }

    fn params(&self) -> Params {
        self.params.clone()
    }

    fn name(&self) -> &str {
        "poly"
    }
}

/// The polynomial ansatz on `env`. With the per-time convention this is the
/// constant-`β₀` solution lifted through `B(t)/β₀`.
pub fn poly_chi(fam: &PolyFamily, env: Arc<dyn Envelope>) -> BDriven<PolyProfile> {
    BDriven::new(fam.profile(), env)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn literal(k: usize, a: &[f64], b: f64) -> f64 {
        let s: f64 = a
            .iter()
            .enumerate()
            .map(|(j, &aj)| (aj * b).powi(2 * (j as i32 + 1)))
            .sum();
        -b * (1.0 + s).powf(-1.0 / k as f64)
    }

    #[test]
    fn closed_forms_match_literal_and_finite_differences() {
        let a = [0.7, -0.3, 4.0 / PI];
        let p = PolyProfile::new(6, a.to_vec());
        for b in [1e-4, 0.1, 0.6, 1.3, 4.0, -0.8] {
            assert!((p.value(b) - literal(6, &a, b)).abs() < 1e-14);
            let h = 1e-6;
            let fd = (literal(6, &a, b + h) - literal(6, &a, b - h)) / (2.0 * h);
            assert!((fd - p.slope(b)).abs() < 1e-8, "slope b={b}");
            let fd2 = (p.slope(b + h) - p.slope(b - h)) / (2.0 * h);
            assert!((fd2 - p.curvature(b)).abs() < 1e-7, "curvature b={b}");
            let s = p.slope(b);
            assert!((p.gap(b) - (1.0 - s * s)).abs() < 1e-13, "gap b={b}");
            assert!(p.gap(b) >= 0.0);
        }
    }

    #[test]
    fn large_powers_do_not_overflow() {
        let p = PolyProfile::new(200, {
            let mut a = vec![0.0; 100];
            a[99] = 4.0 / PI;
            a
        });
        let v = p.value(500.0);
        assert!((v + PI / 4.0).abs() < 1e-12, "{v}");
        assert!(p.slope(500.0).abs() < 1e-200);
        assert!((p.gap(500.0) - 1.0).abs() < 1e-15);
        // both evaluation paths agree across s = 1
        let b = PI / 4.0;
        for x in [b * (1.0 - 1e-9), b * (1.0 + 1e-9)] {
            let s = p.slope(x);
            assert!((p.gap(x) - (1.0 - s * s)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_coefficients_saturate() {
        let p = PolyProfile::new(4, vec![0.0, 0.0]);
        assert_eq!(p.value(1.7), -1.7);
        assert_eq!(p.slope(1.7), -1.0);
        assert_eq!(p.gap(1.7), 0.0);
    }

    #[test]
    fn pulse_choice_tends_to_minus_quarter_pi() {
        let fam = PolyFamily::pulse(6, 1.0, PolyConvention::PerB).unwrap();
        let p = fam.profile();
        assert!((p.value(1e6) + PI / 4.0).abs() < 1e-6);
        let fam_t = PolyFamily::pulse(6, 2.0, PolyConvention::PerTime).unwrap();
        assert!((fam_t.a[2] - 8.0 / PI).abs() < 1e-15);
        // per-time coefficients divided by β₀ give the per-B profile
        assert_eq!(fam_t.coefficients_per_b(), fam.a);
    }

    #[test]
    fn rejects_malformed_families() {
        assert!(PolyFamily::new(3, vec![1.0], 1.0, PolyConvention::PerB).is_err());
        assert!(PolyFamily::new(4, vec![1.0], 1.0, PolyConvention::PerB).is_err());
        assert!(PolyFamily::new(2, vec![-1.0], 1.0, PolyConvention::PerB).is_err());
        assert!(PolyFamily::new(2, vec![1.0], 0.0, PolyConvention::PerB).is_err());
    }
}
