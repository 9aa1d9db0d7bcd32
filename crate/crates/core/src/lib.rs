//! Exactly solvable driven two-level systems.
//!
//! The Hamiltonian `H = b_x σ_x + b_y σ_y + b_z σ_z` is split into a freely
//! chosen transverse part (amplitude `β`, phase `φ`) and a longitudinal field
//! `b_z` that is *synthesized* from a user-chosen angle function `χ(t)`. For
//! every admissible `χ` the propagator is known in closed form up to a single
//! quadrature, which makes the crate useful for analytic pulse design and for
//! Landau-Zener interferometry near the quantum speed limit.
//!
//! Module map:
//!
//! * [`model`]: time grids, SU(2) propagators, field samples, gate fidelity.
//! * [`solver`]: envelopes, `χ` ansätze, validation, phase integrals, exact
//!   evolution, field synthesis and the `κ` cross-check path.
//! * [`families`]: the concrete Gaussian, polynomial and cubic ansätze, the
//!   constant-`β` lift, and Hadamard pulse design.
//! * [`interferometry`]: sweep probabilities, QSL times, one-period evolution,
//!   time-averaged populations and fringe scans.
//! * [`oracle`]: an independent adaptive Runge-Kutta integrator of the
//!   Schrödinger equation in the lab and rotating frames.

pub mod error;
pub mod exec;
pub mod families;
pub mod interferometry;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod root;
pub mod solver;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{
    compose, gate_fidelity, gate_fidelity_matrix, DrivingFields, FieldSample, Matrix2, PhaseSet,
    Propagator, TimeGrid,
};
