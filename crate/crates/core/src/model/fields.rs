use serde::{Deserialize, Serialize};

/// Lab-frame fields at one instant. `bz` may be `±inf` at endpoints where the
/// synthesized field diverges by construction (LMSZ sweeps).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub t: f64,
    pub bx: f64,
    pub by: f64,
    pub bz: f64,
}

impl FieldSample {
    pub fn transverse_amplitude(&self) -> f64 {
        self.bx.hypot(self.by)
    }
}

/// Sampled Hamiltonian `b_x σ_x + b_y σ_y + b_z σ_z`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DrivingFields {
    pub samples: Vec<FieldSample>,
}

impl DrivingFields {
    pub fn new(samples: Vec<FieldSample>) -> Self {
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FieldSample> {
        self.samples.iter()
    }

    /// Largest finite `|b_z|`, ignoring the declared-infinite endpoints.
    pub fn peak_bz(&self) -> Option<&FieldSample> {
        self.samples
            .iter()
            .filter(|s| s.bz.is_finite())
            .max_by(|a, b| a.bz.abs().total_cmp(&b.bz.abs()))
    }

    pub fn peak_bx(&self) -> Option<&FieldSample> {
        self.samples
            .iter()
            .max_by(|a, b| a.bx.abs().total_cmp(&b.bx.abs()))
    }
}
