use serde::Serialize;

use super::{compare, integrate_lab, Comparison, ExactDrive, IntegratorConfig, Trajectory};
use crate::error::Result;
use crate::exec::Exec;
use crate::model::{compose, TimeGrid};
use crate::solver::{evolution_on_grid, synthesize_bz, ChiAnsatz, Envelope};

/// Analytic-vs-numeric discrepancy on `[t0, t1]`, with the endpoint clip
/// that was applied and, when clipping was needed, the same comparison
/// repeated with the clip halved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub interval: (f64, f64),
    pub clip: f64,
    pub comparison: Comparison,
    pub halved_clip: Option<Comparison>,
}

impl OracleReport {
    /// Worst discrepancy over both clip settings.
    pub fn max_frobenius(&self) -> f64 {
        self.halved_clip
            .map_or(0.0, |c| c.max_frobenius)
            .max(self.comparison.max_frobenius)
    }

    /// Ratio of discrepancies after and before halving the clip.
    pub fn clip_sensitivity(&self) -> Option<f64> {
        self.halved_clip
            .map(|c| c.max_frobenius / self.comparison.max_frobenius)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_frobenius() <= tol
    }
}

fn diverges_at(chi: &dyn ChiAnsatz, env: &dyn Envelope, t: f64) -> bool {
    chi.divergent_times().iter().any(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
        || !synthesize_bz(chi, env, t).is_ok_and(f64::is_finite)
}

fn run(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    (t0, t1): (f64, f64),
    samples: usize,
    cfg: &IntegratorConfig,
    exec: Exec,
) -> Result<Comparison> {
    let grid = TimeGrid::uniform(t0, t1, samples)?;
    let absolute = evolution_on_grid(chi, env, &grid, exec)?;
    let back = absolute[0].dagger();
    let analytic = Trajectory {
        grid: grid.clone(),
        propagators: absolute.iter().map(|u| compose(u, &back)).collect(),
    };
    let numeric = integrate_lab(&ExactDrive { chi, env }, &grid, cfg)?;
    compare(&analytic, &numeric)
}

/// Compare the closed-form evolution of `chi` against direct integration of
/// the synthesized fields on `samples` points of `[0, t_end]`. Endpoints
/// where `b_z` diverges are clipped by `cfg.endpoint_clip · t_end`; both
/// sides then start from the identity at the clipped start.
pub fn check_against_oracle(
    chi: &dyn ChiAnsatz,
    env: &dyn Envelope,
    t_end: f64,
    samples: usize,
    cfg: &IntegratorConfig,
    exec: Exec,
) -> Result<OracleReport> {
    cfg.validate()?;
    let (clip_lo, clip_hi) = (diverges_at(chi, env, 0.0), diverges_at(chi, env, t_end));
    let delta = cfg.endpoint_clip * t_end;
    let interval = |d: f64| {
        (
            if clip_lo { d } else { 0.0 },
            if clip_hi { t_end - d } else { t_end },
        )
    };
    let comparison = run(chi, env, interval(delta), samples, cfg, exec)?;
    let halved_clip = if clip_lo || clip_hi {
        Some(run(chi, env, interval(0.5 * delta), samples, cfg, exec)?)
    } else {
        None
    };
    Ok(OracleReport {
        interval: interval(delta),
        clip: if clip_lo || clip_hi { delta } else { 0.0 },
        comparison,
        halved_clip,
    })
}
