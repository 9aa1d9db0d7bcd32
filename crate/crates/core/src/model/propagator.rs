use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::UNITARITY_TOL;
use crate::error::{Error, Result};

/// Dense 2x2 complex matrix, row-major. Used where a global phase outside
/// SU(2) matters (e.g. the Hadamard matrix or `e^{iγ} U`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Matrix2([[one, zero], [zero, one]])
    }

    /// `(σ_x + σ_z)/√2`.
    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Matrix2([[h, h], [h, -h]])
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }

    pub fn dagger(&self) -> Matrix2 {
        let a = &self.0;
        Matrix2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, z: Complex64) -> Matrix2 {
        let a = &self.0;
        Matrix2([[a[0][0] * z, a[0][1] * z], [a[1][0] * z, a[1][1] * z]])
    }

    pub fn frobenius_distance(&self, other: &Matrix2) -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += (self.0[i][j] - other.0[i][j]).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// SU(2) evolution operator stored as its first column,
///
/// ```text
/// U = | u11  -u21* |
///     | u21   u11* |
/// ```
///
/// The second column is always reconstructed, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Propagator {
    pub u11: Complex64,
    pub u21: Complex64,
}

impl Propagator {
    /// Checked constructor; rejects columns off the unit sphere by more than
    /// [`UNITARITY_TOL`].
    pub fn new(u11: Complex64, u21: Complex64) -> Result<Self> {
        let p = Self { u11, u21 };
        let defect = p.unitarity_defect();
        if defect.is_nan() || defect > UNITARITY_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(p)
    }

    /// No unitarity check. Oracle trajectories use this so drift stays
    /// visible instead of being rejected.
    pub const fn new_unchecked(u11: Complex64, u21: Complex64) -> Self {
        Self { u11, u21 }
    }

    pub const fn identity() -> Self {
        Self {
            u11: Complex64 { re: 1.0, im: 0.0 },
            u21: Complex64 { re: 0.0, im: 0.0 },
        }
    }

    /// `exp(-i θ n·σ / 2)` for a unit (or unnormalized, non-zero) axis `n`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let [nx, ny, nz] = axis.map(|c| c / norm);
        let (s, c) = (0.5 * angle).sin_cos();
        // first column of cos(θ/2) 1 - i sin(θ/2) n·σ
        Self {
            u11: Complex64::new(c, -s * nz),
            u21: Complex64::new(s * ny, -s * nx),
        }
    }

    pub fn x_rotation(angle: f64) -> Self {
        Self::rotation([1.0, 0.0, 0.0], angle)
    }

    pub fn z_rotation(angle: f64) -> Self {
        Self::rotation([0.0, 0.0, 1.0], angle)
    }

    /// The Hadamard gate as an SU(2) element: a π rotation about x̂+ẑ, equal
    /// to `-i (σ_x + σ_z)/√2`.
    pub fn hadamard() -> Self {
        Self::rotation([1.0, 0.0, 1.0], std::f64::consts::PI)
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.u11.norm_sqr() + self.u21.norm_sqr() - 1.0).abs()
    }

    pub fn u12(&self) -> Complex64 {
        -self.u21.conj()
    }

    pub fn u22(&self) -> Complex64 {
        self.u11.conj()
    }

    pub fn matrix(&self) -> Matrix2 {
        Matrix2([[self.u11, self.u12()], [self.u21, self.u22()]])
    }

    pub fn dagger(&self) -> Self {
        Self {
            u11: self.u11.conj(),
            u21: -self.u21,
        }
    }

    /// `Uᵀ`: the propagator of the time-reversed path of a real Hamiltonian.
    pub fn transpose(&self) -> Self {
        Self {
            u11: self.u11,
            u21: -self.u21.conj(),
        }
    }

    /// Multiply the first column by `e^{iγ}` on `|1⟩` and `e^{-iγ}` on `|2⟩`,
    /// i.e. left-multiply by `diag(e^{iγ}, e^{-iγ})`.
    pub fn frame_phase(&self, gamma: f64) -> Self {
        let p = Complex64::from_polar(1.0, gamma);
        Self {
            u11: self.u11 * p,
            u21: self.u21 * p.conj(),
        }
    }

    pub fn frobenius_distance(&self, other: &Propagator) -> f64 {
        // both columns contribute the same amount
        (2.0 * ((self.u11 - other.u11).norm_sqr() + (self.u21 - other.u21).norm_sqr())).sqrt()
    }

    /// Population of `|2⟩` after starting in `|1⟩`.
    pub fn transition_probability(&self) -> f64 {
        self.u21.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.u11.is_finite() && self.u21.is_finite()
    }
}

impl Default for Propagator {
    fn default() -> Self {
        Self::identity()
    }
}

/// Matrix product `left · right`.
pub fn compose(left: &Propagator, right: &Propagator) -> Propagator {
    let (a, b) = (left.u11, left.u21);
    let (c, d) = (right.u11, right.u21);
    Propagator {
        u11: a * c - b.conj() * d,
        u21: b * c + a.conj() * d,
    }
}

/// `|tr(a† b)| / 2`; equals 1 iff the two agree up to a global phase.
pub fn gate_fidelity(a: &Propagator, b: &Propagator) -> f64 {
    gate_fidelity_matrix(&a.matrix(), &b.matrix())
}

pub fn gate_fidelity_matrix(a: &Matrix2, b: &Matrix2) -> f64 {
    (0.5 * a.dagger().mul(b).trace().norm()).min(1.0)
}

/// Phases `ξ₋`, `ξ₊` of the exact solution, kept unwrapped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSet {
    pub xi_minus: f64,
    pub xi_plus: f64,
    pub xi_zero: f64,
}

impl PhaseSet {
    pub fn new(xi_minus: f64, xi_plus: f64) -> Self {
        Self {
            xi_minus,
            xi_plus,
            xi_zero: 0.5 * (xi_plus + xi_minus),
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: &Propagator, b: &Propagator, tol: f64) -> bool {
        a.frobenius_distance(b) <= tol
    }

    fn arb_unitary() -> impl Strategy<Value = Propagator> {
        (0.0..PI, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(theta, p1, p2)| {
            let (s, c) = (0.5 * theta).sin_cos();
            Propagator::new(
                Complex64::from_polar(c, p1),
                Complex64::from_polar(s, p2),
            )
            .unwrap()
        })
    }

    #[test]
    fn identity_is_neutral() {
        let u = Propagator::rotation([0.3, -1.0, 0.7], 1.234);
        assert!(close(&compose(&Propagator::identity(), &u), &u, 0.0));
        assert!(close(&compose(&u, &Propagator::identity()), &u, 0.0));
    }

    #[test]
    fn inverse_composes_to_identity() {
        let u = Propagator::rotation([0.3, -1.0, 0.7], 1.234);
        assert!(close(&compose(&u, &u.dagger()), &Propagator::identity(), 1e-12));
    }

    #[test]
    fn x_rotations_add_against_dense_product() {
        let (t1, t2) = (0.37, 2.11);
        let composed = compose(&Propagator::x_rotation(t1), &Propagator::x_rotation(t2));
        // independent route: explicit 2x2 products
        let dense = Propagator::x_rotation(t1)
            .matrix()
            .mul(&Propagator::x_rotation(t2).matrix());
        assert!(composed.matrix().frobenius_distance(&dense) < 1e-15);
        assert!(close(&composed, &Propagator::x_rotation(t1 + t2), 1e-15));
    }

    #[test]
    fn fidelity_examples() {
        let u = Propagator::rotation([1.0, 2.0, -0.5], 0.9);
        assert!((gate_fidelity(&u, &u) - 1.0).abs() < 1e-15);
        let phased = u.matrix().scale(Complex64::from_polar(1.0, PI / 7.0));
        assert!((gate_fidelity_matrix(&u.matrix(), &phased) - 1.0).abs() < 1e-15);
        // tr(-i σ_x) = 0
        let f = gate_fidelity(&Propagator::identity(), &Propagator::x_rotation(PI));
        assert!(f.abs() < 1e-15);
    }

    #[test]
    fn hadamard_matches_dense_matrix_up_to_phase() {
        let f = gate_fidelity_matrix(&Propagator::hadamard().matrix(), &Matrix2::hadamard());
        assert!((f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn checked_constructor_rejects_non_unitary() {
        let r = Propagator::new(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0));
        assert!(matches!(r, Err(Error::NotUnitary { .. })));
    }

    proptest! {
        #[test]
        fn compose_is_associative(a in arb_unitary(), b in arb_unitary(), c in arb_unitary()) {
            let l = compose(&compose(&a, &b), &c);
            let r = compose(&a, &compose(&b, &c));
            prop_assert!(l.frobenius_distance(&r) <= 1e-12);
            prop_assert!(l.unitarity_defect() <= 1e-12);
        }

        #[test]
        fn compose_matches_matrix_product(a in arb_unitary(), b in arb_unitary()) {
            let dense = a.matrix().mul(&b.matrix());
            prop_assert!(compose(&a, &b).matrix().frobenius_distance(&dense) <= 1e-14);
        }

        #[test]
        fn fidelity_is_symmetric(a in arb_unitary(), b in arb_unitary()) {
            let d = gate_fidelity(&a, &b) - gate_fidelity(&b, &a);
            prop_assert!(d.abs() <= 1e-15);
            prop_assert!((0.0..=1.0).contains(&gate_fidelity(&a, &b)));
        }
    }
}
