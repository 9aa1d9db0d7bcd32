use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing sample times; the first and last samples are the
/// interval endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    samples: Vec<f64>,
}

impl TimeGrid {
    /// `n` equally spaced samples on `[t0, t_end]`, endpoints included.
    pub fn uniform(t0: f64, t_end: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {n}")));
        }
        if !(t0.is_finite() && t_end.is_finite()) || t_end <= t0 {
            return Err(Error::InvalidGrid(format!("empty interval [{t0}, {t_end}]")));
        }
        let step = (t_end - t0) / (n - 1) as f64;
        let mut samples: Vec<f64> = (0..n).map(|i| t0 + step * i as f64).collect();
        samples[n - 1] = t_end;
        Self::from_samples(samples)
    }

    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        if let Some(w) = samples.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "samples not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        Ok(Self { samples })
    }

    pub fn t0(&self) -> f64 {
        self.samples[0]
    }

    pub fn t_end(&self) -> f64 {
        self.samples[self.samples.len() - 1]
    }

    pub fn span(&self) -> f64 {
        self.t_end() - self.t0()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_hits_endpoints() {
        let g = TimeGrid::uniform(0.0, 1.0, 7).unwrap();
        assert_eq!(g.t0(), 0.0);
        assert_eq!(g.t_end(), 1.0);
        assert_eq!(g.len(), 7);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::uniform(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::uniform(1.0, 1.0, 3).is_err());
        assert!(TimeGrid::from_samples(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(TimeGrid::from_samples(vec![0.0, f64::NAN]).is_err());
    }
}
