//! Concrete ansatz families and pulse design.
//!
//! * [`GaussianFamily`]: `χ = -½ acos(e^{-2B²})`, valid for any envelope.
//! * [`PolyFamily`]: `χ = -B[1 + Σ(a_iB)^i]^{-1/k}` with an arbitrary number
//!   of shape parameters; with `a_k = 4/π` it is a gate-making pulse.
//! * [`CubicFamily`]: the LMSZ sweep on a constant transverse field.
//! * [`lift_constant_beta`]: carries any constant-`β₀` solution over to an
//!   arbitrary envelope.
//! * [`design_hadamard`]: solves for the gate time of the polynomial pulse.

mod cubic;
mod gaussian;
mod hadamard;
mod lift;
mod poly;

pub use cubic::{cubic_chi, max_sweep_rate, solve_sweep_rate, CubicChi, CubicFamily};
pub use gaussian::{gaussian_chi, GaussianFamily, GaussianProfile};
pub use hadamard::{design_hadamard, time_to_reach, HadamardDesign, HADAMARD_PHASE, PHASE_TOL};
pub use lift::{lift_constant_beta, Lifted};
pub use poly::{poly_chi, PolyConvention, PolyFamily, PolyProfile};
