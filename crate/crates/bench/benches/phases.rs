use abflux_bench::{capacitor, solenoid, Fixture};
use abflux_core::holonomy::{flux_phase, potential_phase, Coupling, PathCheck};
use abflux_core::{ruled_surface_equal_time, QuadratureSpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn routes(c: &mut Criterion, name: &str, make: fn(f64) -> Fixture, betas: &[f64], tol: f64) {
    let spec = QuadratureSpec { tol, ..Default::default() };
    let coupling = Coupling::unit();
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    for &beta in betas {
        let f = make(beta);
        group.bench_with_input(BenchmarkId::new("potential", beta), &f, |b, f| {
            b.iter(|| potential_phase(black_box(&f.pair), &f.cfg, &coupling, &spec, PathCheck::Off).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("flux", beta), &f, |b, f| {
            let srf = ruled_surface_equal_time(&f.pair);
            b.iter(|| flux_phase(black_box(&srf), &f.cfg, &coupling, &spec).unwrap())
        });
    }
    group.finish();
}

fn solenoid_routes(c: &mut Criterion) {
    routes(c, "solenoid", solenoid, &[0.0, 0.6], 1e-9);
}

fn capacitor_routes(c: &mut Criterion) {
    routes(c, "capacitor", capacitor, &[0.0, 0.6], 1e-7);
}

criterion_group!(benches, solenoid_routes, capacitor_routes);
criterion_main!(benches);
