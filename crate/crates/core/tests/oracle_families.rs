use std::f64::consts::PI;
use std::sync::Arc;

use exact_twolevel::exec::Exec;
use exact_twolevel::families::*;
use exact_twolevel::model::TimeGrid;
use exact_twolevel::oracle::*;
use exact_twolevel::solver::*;

const TOL: f64 = 1e-6;

fn check(chi: &dyn ChiAnsatz, env: &dyn Envelope, t_end: f64) -> OracleReport {
    let r = check_against_oracle(chi, env, t_end, 41, &IntegratorConfig::default(), Exec::Parallel)
        .unwrap();
    assert!(r.passes(TOL), "{r:?}");
    assert!(r.comparison.max_unitarity_drift < 1e-9, "{r:?}");
    r
}

#[test]
fn cubic_with_clipped_endpoints() {
    let t = 1.0;
    let fam = CubicFamily::for_target(PI / 2.0, 1.8 / t, t).unwrap();
    let r = check(&cubic_chi(fam), &fam.envelope(), t);
    assert!(r.clip > 0.0);
    assert_eq!(r.interval, (1e-6, 1.0 - 1e-6));
    assert!(r.halved_clip.is_some());
}

#[test]
fn gaussian_reference_pulse() {
    let fam = GaussianFamily::new(0.25, 3.0, 5.0).unwrap();
    let r = check(&fam.chi(), &fam.envelope(), 10.0);
    assert_eq!(r.clip, 0.0);
}

#[test]
fn polynomial_on_modulated_drive() {
    let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
    let fam = PolyFamily::pulse(6, 1.0, PolyConvention::PerB).unwrap();
    check(&poly_chi(&fam, env.clone()), env.as_ref(), 3.6);
}

#[test]
fn polynomial_on_constant_drive() {
    let env: Arc<dyn Envelope> = Arc::new(ConstantEnvelope::new(1.0));
    let fam = PolyFamily::new(4, vec![0.3, 4.0 / PI], 1.0, PolyConvention::PerTime).unwrap();
    check(&poly_chi(&fam, env.clone()), env.as_ref(), 4.0);
}

#[test]
fn lifted_cubic() {
    let fam = CubicFamily::for_target(PI / 2.1, 2.0, 1.0).unwrap();
    let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(2.0));
    let lifted = lift_constant_beta(cubic_chi(fam), 2.0, env.clone());
    // B(t)/β₀ reaches T = 1 before t = 1
    check(&lifted, env.as_ref(), 0.75);
}

#[test]
fn corrupted_phase_is_detected() {
    let fam = GaussianFamily::new(0.25, 3.0, 5.0).unwrap();
    let (chi, env) = (fam.chi(), fam.envelope());
    let grid = TimeGrid::uniform(0.0, 10.0, 21).unwrap();
    let exact = evolution_on_grid(&chi, &env, &grid, Exec::Parallel).unwrap();
    let corrupted = Trajectory {
        grid: grid.clone(),
        propagators: grid
            .iter()
            .map(|t| {
                let p = xi_phases(&chi, &env, t).unwrap();
                let (s, c) = chi.chi(t).sin_cos();
                exact_twolevel::model::Propagator::new(
                    num_complex::Complex64::from_polar(c, p.xi_minus),
                    num_complex::Complex64::new(0.0, s * chi.eta().sign())
                        * num_complex::Complex64::from_polar(1.0, p.xi_plus + 1e-3),
                )
                .unwrap()
            })
            .collect(),
    };
    let numeric = integrate_lab(&ExactDrive { chi: &chi, env: &env }, &grid, &IntegratorConfig::default())
        .unwrap();
    let base = compare(
        &Trajectory {
            grid: grid.clone(),
            propagators: exact,
        },
        &numeric,
    )
    .unwrap();
    let bad = compare(&corrupted, &numeric).unwrap();
    assert!(base.max_frobenius < TOL);
    // a phase error ε on u21 costs √2 ε |sin χ| in Frobenius norm
    let expect = 2f64.sqrt() * 1e-3 * chi.chi(bad.worst_t).sin().abs();
    assert!((bad.max_frobenius - expect).abs() < 0.01 * expect, "{bad:?}");
}

#[test]
fn tighter_tolerances_shrink_the_discrepancy() {
    let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
    let fam = PolyFamily::pulse(4, 1.0, PolyConvention::PerB).unwrap();
    let chi = poly_chi(&fam, env.clone());
    let err = |tol: f64| {
        let cfg = IntegratorConfig {
            rel_tol: tol,
            abs_tol: 1e-2 * tol,
            ..IntegratorConfig::default()
        };
        check_against_oracle(&chi, env.as_ref(), 3.0, 11, &cfg, Exec::Sequential)
            .unwrap()
            .max_frobenius()
    };
    let (coarse, fine) = (err(1e-5), err(1e-8));
    assert!(coarse > 30.0 * fine, "{coarse:e} vs {fine:e}");
}
