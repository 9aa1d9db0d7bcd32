use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which side of the sweep-rate window was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepBound {
    /// `b_x T < χ(T)`: the quantum speed limit.
    SpeedLimit,
    /// `b_x T > 9 χ(T)`: the cubic profile would dip through zero.
    CubicUpper,
}

impl std::fmt::Display for SweepBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepBound::SpeedLimit => write!(f, "b_x T < chi(T) (quantum speed limit)"),
            SweepBound::CubicUpper => write!(f, "b_x T > 9 chi(T) (cubic upper bound)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("propagator is not unitary (| |u11|^2+|u21|^2 - 1 | = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("ansatz rejected: {0}")]
    InvalidAnsatz(String),

    #[error("quadrature on [{a}, {b}] stalled at error estimate {estimate:e} (tolerance {tolerance:e})")]
    QuadratureFailure {
        a: f64,
        b: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("non-integrable singularity in phase integrand near t = {t}")]
    SingularIntegrand { t: f64 },

    #[error("driving field diverges at t = {t} (sign {sign})")]
    DivergentField { t: f64, sign: f64 },

    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("sweep rate out of bounds: {bound}")]
    OutOfBounds { bound: SweepBound },

    #[error("target {target} unreachable: integral saturates at {reached} by t = {horizon}")]
    Unreachable {
        target: f64,
        reached: f64,
        horizon: f64,
    },

    #[error("endpoint condition chi_dot(T) = -eta beta(T) violated by {mismatch:e}")]
    EndpointCondition { mismatch: f64 },

    #[error("initial phase phi(0) = {phi0} must vanish")]
    InitialPhase { phi0: f64 },

    #[error("integrator step underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },

    #[error("trajectories are sampled on different grids")]
    GridMismatch,

    #[error("kappa parametrization undefined at t = {t} (chi = {chi})")]
    KappaDomain { t: f64, chi: f64 },
}
