use std::f64::consts::PI;

use exact_twolevel::families::{cubic_chi, design_hadamard};
use exact_twolevel::interferometry::{fringe_scan, narp_probability};
use exact_twolevel::model::TimeGrid;
use exact_twolevel::oracle::{check_against_oracle, IntegratorConfig};
use exact_twolevel::solver::{evolution_on_grid, synthesize_fields, validate};
use exact_twolevel::Exec;
use serde_json::json;

use crate::config::RunConfig;
use crate::output::{emit, json_num, pretty, Table};
use crate::CliError;

/// Largest `||u11|² + |u21|² - 1|` the writer accepts.
const UNITARITY_BOUND: f64 = 1e-9;

const NARP_SETS: [(f64, [f64; 6]); 2] = [
    (PI / 2.0, [PI / 2.0, 1.6, 1.7, 1.8, 1.9, 2.0]),
    (PI / 4.0, [PI / 4.0, 0.8, 0.9, 1.0, 1.1, 1.2]),
];

fn write(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    emit(text, cfg.out.as_deref()).map_err(|e| CliError::Io(e.to_string()))
}

pub fn solve(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.problem()?;
    let grid = TimeGrid::uniform(0.0, p.t_end, cfg.samples())?;
    let report = validate(p.chi.as_ref(), p.env.as_ref(), &grid);
    if !report.ok {
        return Err(CliError::Failed(json!({
            "status": "invalid",
            "family": p.name,
            "validation": report,
        })));
    }
    let exec = Exec::default();
    let fields = synthesize_fields(p.chi.as_ref(), p.env.as_ref(), &grid, exec)?;
    let props = evolution_on_grid(p.chi.as_ref(), p.env.as_ref(), &grid, exec)?;

    let mut table = Table::new(&["t", "bx", "by", "bz", "re_u11", "im_u11", "re_u21", "im_u21", "p2"]);
    for (f, u) in fields.iter().zip(&props) {
        let defect = u.unitarity_defect();
        assert!(defect <= UNITARITY_BOUND, "propagator at t = {} off unitarity by {defect:e}", f.t);
        table.push(vec![
            f.t,
            f.bx,
            f.by,
            f.bz,
            u.u11.re,
            u.u11.im,
            u.u21.re,
            u.u21.im,
            u.transition_probability(),
        ]);
    }
    write(cfg, &table.render(cfg.format))
}

pub fn design(cfg: &RunConfig) -> Result<(), CliError> {
    let mut cfg = cfg.clone();
    cfg.family.get_or_insert_with(|| "poly".into());
    let p = cfg.problem()?;
    let fam = p
        .poly
        .ok_or_else(|| CliError::Malformed(format!("design-hadamard needs the poly family, not {}", p.name)))?;
    let d = design_hadamard(&fam, p.env.clone(), cfg.samples(), Exec::default())?;
    assert!(d.propagator.unitarity_defect() <= UNITARITY_BOUND);

    let summary = json!({
        "family": p.name,
        "k": fam.k,
        "beta0": fam.beta0,
        "T": d.duration,
        "fidelity": d.fidelity,
        "chi_final": d.chi_final,
        "phase_error": d.phase_error,
        "u11": [d.propagator.u11.re, d.propagator.u11.im],
        "u21": [d.propagator.u21.re, d.propagator.u21.im],
    });
    emit(&pretty(&summary), None).map_err(|e| CliError::Io(e.to_string()))?;
    if cfg.out.is_some() {
        let mut table = Table::new(&["t", "bx", "by", "bz"]);
        for f in d.fields.iter() {
            table.push(vec![f.t, f.bx, f.by, f.bz]);
        }
        write(&cfg, &table.render(cfg.format))?;
    }
    Ok(())
}

/// `sin² χ(t)` across each sweep. Without `--bx`, the two standard sets of
/// `b_x T` for `χ(T) = π/2` and `π/4` (or the set matching `--chi-final`).
pub fn narp(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.family.as_deref().is_some_and(|f| f != "cubic") {
        return Err(CliError::Malformed("narp sweeps use the cubic family".into()));
    }
    let t_final = cfg.t_final.unwrap_or(1.0);
    let sweeps: Vec<(f64, f64)> = match (cfg.bx, cfg.chi_final) {
        (Some(bx), chi) => vec![(chi.unwrap_or(PI / 2.0), bx * t_final)],
        (None, Some(chi)) => match NARP_SETS.iter().find(|(c, _)| (c - chi).abs() < 1e-12) {
            Some((_, set)) => set.iter().map(|&x| (chi, x)).collect(),
            None => vec![(chi, 1.8_f64.max(chi))],
        },
        (None, None) => NARP_SETS
            .iter()
            .flat_map(|(c, set)| set.iter().map(move |&x| (*c, x)))
            .collect(),
    };
    let grid = TimeGrid::uniform(0.0, t_final, cfg.samples())?;
    let mut table = Table::new(&["chi_T", "bxT", "t", "p2"]);
    for (chi_t, bx_t) in sweeps {
        let mut run = cfg.clone();
        run.chi_final = Some(chi_t);
        run.bx = Some(bx_t / t_final);
        run.t_final = Some(t_final);
        let chi = cubic_chi(run.cubic(chi_t, bx_t)?);
        for t in grid.iter() {
            table.push(vec![chi_t, bx_t, t, narp_probability(&chi, t).p2]);
        }
    }
    write(cfg, &table.render(cfg.format))
}

pub fn fringe(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.family.as_deref().is_some_and(|f| f != "cubic") {
        return Err(CliError::Malformed("fringe scans use the cubic family".into()));
    }
    if !cfg.params.is_empty() {
        return Err(CliError::Malformed("fringe scans solve for the sweep rate; drop --param".into()));
    }
    let chi_t = cfg.chi_final.unwrap_or(PI / 2.1);
    let bx = cfg.bx.unwrap_or(1.0);
    let range = (cfg.t_min.unwrap_or(chi_t / bx), cfg.t_max.unwrap_or(9.0 * chi_t / bx));
    let scan = fringe_scan(chi_t, bx, range, cfg.steps.unwrap_or(200), Exec::default())?;
    if !scan.skipped.is_empty() {
        eprint!("{}", pretty(&json!({ "skipped": scan.skipped })));
    }
    let mut table = Table::new(&["T", "xi0", "p2_bar"]);
    for p in &scan.points {
        table.push(vec![p.t_final, p.xi0_t, p.p2_bar]);
    }
    write(cfg, &table.render(cfg.format))
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.problem()?;
    let tol = cfg.tol();
    let grid = TimeGrid::uniform(0.0, p.t_end, cfg.samples())?;
    let validation = validate(p.chi.as_ref(), p.env.as_ref(), &grid);
    let report = if validation.ok {
        Some(check_against_oracle(
            p.chi.as_ref(),
            p.env.as_ref(),
            p.t_end,
            cfg.samples(),
            &IntegratorConfig::default(),
            Exec::default(),
        )?)
    } else {
        None
    };
    let passed = report.is_some_and(|r| r.passes(tol));
    let doc = json!({
        "status": if passed { "pass" } else { "fail" },
        "family": p.name,
        "t_end": p.t_end,
        "tol": tol,
        "validation": validation,
        "max_frobenius": report.map(|r| json_num(r.max_frobenius())),
        "max_unitarity_drift": report.map(|r| json_num(r.comparison.max_unitarity_drift)),
        "worst_t": report.map(|r| r.comparison.worst_t),
        "clip": report.map(|r| r.clip),
        "clip_sensitivity": report.and_then(|r| r.clip_sensitivity()),
    });
    // the report is JSON whatever --format says
    write(cfg, &pretty(&doc))?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(doc))
    }
}
