//! Shared value types: time grids, SU(2) propagators, phase sets and field
//! samples.

mod fields;
mod grid;
mod propagator;

pub use fields::{DrivingFields, FieldSample};
pub use grid::TimeGrid;
pub use propagator::{compose, gate_fidelity, gate_fidelity_matrix, Matrix2, PhaseSet, Propagator};

/// Tolerance on `| |u11|^2 + |u21|^2 - 1 |` for every propagator handed out.
pub const UNITARITY_TOL: f64 = 1e-10;
