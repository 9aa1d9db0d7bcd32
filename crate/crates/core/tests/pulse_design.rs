use std::f64::consts::PI;
use std::sync::Arc;

use exact_twolevel::exec::Exec;
use exact_twolevel::families::*;
use exact_twolevel::interferometry::qsl_time;
use exact_twolevel::model::{gate_fidelity, Propagator, TimeGrid};
use exact_twolevel::oracle::*;
use exact_twolevel::solver::*;

#[test]
fn constant_drive_hadamard() {
    let beta0 = 1.7;
    let fam = PolyFamily::pulse(6, beta0, PolyConvention::PerTime).unwrap();
    let env: Arc<dyn Envelope> = Arc::new(ConstantEnvelope::new(beta0));
    let d = design_hadamard(&fam, env.clone(), 51, Exec::Parallel).unwrap();
    let u = d.propagator;
    let r = 0.5f64.sqrt();
    assert!((u.u11.norm() - r).abs() < 1e-5 && (u.u21.norm() - r).abs() < 1e-5, "{u:?}");

    let chi = poly_chi(&fam, env.clone());
    let grid = TimeGrid::uniform(0.0, d.duration, 2).unwrap();
    let tr = integrate_lab(&ExactDrive { chi: &chi, env: env.as_ref() }, &grid, &IntegratorConfig::default())
        .unwrap();
    assert!(tr.propagators[1].frobenius_distance(&u) < 1e-7);
    assert!(gate_fidelity(&tr.propagators[1], &Propagator::hadamard()) > 0.999);
}

#[test]
fn gate_time_scales_with_drive_strength() {
    let mut durations = Vec::new();
    for beta0 in [0.5, 1.0, 2.0] {
        let fam = PolyFamily::pulse(6, beta0, PolyConvention::PerTime).unwrap();
        let env: Arc<dyn Envelope> = Arc::new(ConstantEnvelope::new(beta0));
        durations.push(beta0 * design_hadamard(&fam, env, 11, Exec::Sequential).unwrap().duration);
    }
    assert!((durations[0] - durations[1]).abs() < 1e-8 && (durations[2] - durations[1]).abs() < 1e-8);
}

#[test]
fn large_powers_approach_the_speed_limit() {
    // time to come within ε of χ = -π/4, relative to the speed-limit time for
    // the same angle; the excess shrinks as k grows
    let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
    let target = 0.99 * PI / 4.0;
    let t_qsl = qsl_time(env.as_ref(), target).unwrap();
    let mut excess = Vec::new();
    for k in [2, 6, 20, 80] {
        let fam = PolyFamily::pulse(k, 1.0, PolyConvention::PerB).unwrap();
        let t = time_to_reach(&poly_chi(&fam, env.clone()), -target, 50.0).unwrap();
        assert!(t >= t_qsl);
        excess.push(t / t_qsl - 1.0);
    }
    assert!(excess.windows(2).all(|w| w[1] < w[0]), "{excess:?}");
    assert!(excess[3] < 0.05, "{excess:?}");
}

#[test]
fn design_returns_fields_on_the_gate_interval() {
    let fam = PolyFamily::pulse(6, 1.0, PolyConvention::PerB).unwrap();
    let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
    let d = design_hadamard(&fam, env, 61, Exec::Parallel).unwrap();
    let samples: Vec<_> = d.fields.iter().collect();
    assert_eq!(samples.first().unwrap().t, 0.0);
    assert_eq!(samples.last().unwrap().t, d.duration);
    assert!((samples[0].bz - fam.initial_bz()).abs() < 1e-9);
    // b_z decays as χ settles at -π/4
    assert!(samples.last().unwrap().bz.abs() < samples[0].bz.abs().max(0.2));
    assert!((d.chi_final + PI / 4.0).abs() < 1e-4);
}

#[test]
fn gaussian_pulse_settles() {
    for (mu, nu) in [(0.25, 3.0), (3.0, 0.5)] {
        let fam = GaussianFamily::new(mu, nu, 5.0).unwrap();
        let chi = fam.chi();
        assert!((chi.chi(40.0) - fam.asymptotic_chi()).abs() < 1e-12);
        assert_eq!(chi.chi(0.0), 0.0);
    }
}
