//! Single sweeps and Landau–Zener–Stückelberg–Majorana interferometry.
//!
//! A period is a sweep over `[0, T]` followed by its time-reverse. With the
//! turning-point condition `χ̇(T) = -η β(T)` the period propagator and the
//! long-time average of the transition probability are closed-form.

mod fringe;
mod period;
mod sweep;

pub use fringe::{fringe_peaks, fringe_scan, FringeScan, SkippedPoint};
pub use period::{
    average_p2, monodromy_average, period_evolution, period_evolution_composed, time_avg_p2,
    FringePoint, ENDPOINT_TOL,
};
pub use sweep::{narp_probability, qsl_time, SweepResult};
