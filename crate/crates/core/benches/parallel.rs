use std::f64::consts::PI;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exact_twolevel::exec::Exec;
use exact_twolevel::families::{poly_chi, PolyConvention, PolyFamily};
use exact_twolevel::interferometry::fringe_scan;
use exact_twolevel::model::TimeGrid;
use exact_twolevel::solver::{evolution_on_grid, synthesize_fields, Envelope, ModulatedEnvelope};

fn modes() -> Vec<(&'static str, Exec)> {
    let mut m = vec![("sequential", Exec::Sequential)];
    if Exec::parallel_available() {
        m.push(("parallel", Exec::Parallel));
    }
    m
}

fn fringe(c: &mut Criterion) {
    let mut g = c.benchmark_group("fringe_scan");
    g.sample_size(10);
    let chi_t = PI / 2.1;
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::new(name, 200), |b| {
            b.iter(|| fringe_scan(chi_t, 1.0, (chi_t, 8.9 * chi_t), 200, exec).unwrap())
        });
    }
    g.finish();
}

fn grid_sweeps(c: &mut Criterion) {
    let env: Arc<dyn Envelope> = Arc::new(ModulatedEnvelope::new(1.0));
    let fam = PolyFamily::pulse(6, 1.0, PolyConvention::PerB).unwrap();
    let chi = poly_chi(&fam, env.clone());
    let grid = TimeGrid::uniform(0.0, 3.6, 2001).unwrap();
    let mut g = c.benchmark_group("grid");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::new("evolution", name), |b| {
            b.iter(|| evolution_on_grid(&chi, env.as_ref(), &grid, exec).unwrap())
        });
        g.bench_function(BenchmarkId::new("fields", name), |b| {
            b.iter(|| synthesize_fields(&chi, env.as_ref(), &grid, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, fringe, grid_sweeps);
criterion_main!(benches);
