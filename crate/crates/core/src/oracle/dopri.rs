//! Dormand–Prince 5(4) with step-size control, for a two-component complex
//! state. Steps land exactly on every requested output time.

use num_complex::Complex64;

use super::IntegratorConfig;
use crate::error::{Error, Result};

pub(crate) type State = [Complex64; 2];

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 5_000_000;

fn combine(y: &State, h: f64, k: &[State; 7], w: &[f64]) -> State {
    let mut out = *y;
    for (kj, &wj) in k.iter().zip(w) {
        if wj != 0.0 {
            out[0] += kj[0] * (h * wj);
            out[1] += kj[1] * (h * wj);
        }
    }
    out
}

fn finite(y: &State) -> bool {
    y.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Integrate `y' = f(t, y)` from `times[0]` with `y(times[0]) = y0` and
/// return the state at every entry of `times` (sorted ascending).
pub(crate) fn solve<F>(f: F, times: &[f64], y0: State, cfg: &IntegratorConfig) -> Result<Vec<State>>
where
    F: Fn(f64, &State) -> State,
{
    let span = times.last().unwrap() - times[0];
    let mut out = Vec::with_capacity(times.len());
    out.push(y0);
    let mut t = times[0];
    let mut y = y0;
    let mut h = (span / 100.0).min(cfg.max_step);
    let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
    k[0] = f(t, &y);
    let mut steps = 0;

    for &target in &times[1..] {
        while t < target {
            let last = target - t <= h;
            let step = if last { target - t } else { h };
            for s in 1..7 {
                k[s] = f(t + C[s] * step, &combine(&y, step, &k, &A[s][..s]));
            }
            let y_new = combine(&y, step, &k, &A[6]);
            let err_vec = combine(&[Complex64::new(0.0, 0.0); 2], step, &k, &E);
            let mut err: f64 = 0.0;
            for i in 0..2 {
                let scale = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y_new[i].norm());
                err = err.max(err_vec[i].norm() / scale);
            }
            if !finite(&y_new) || err.is_nan() {
                err = f64::INFINITY;
            }

            if err <= 1.0 {
                t = if last { target } else { t + step };
                y = y_new;
                // FSAL: the last stage is f at the new point
                k[0] = k[6];
                if !finite(&k[0]) {
                    k[0] = f(t, &y);
                }
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || step >= h {
                    h = (step * fac).min(cfg.max_step);
                }
            } else {
                let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
                h = step * fac;
            }
            steps += 1;
            if h < 1e-14 * t.abs().max(span) || steps > MAX_STEPS {
                return Err(Error::StepFailure { t, h });
            }
        }
        out.push(y);
    }
    Ok(out)
}
