use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ncosc_core::infotheory::{closed_forms, info_from_state};
use ncosc_core::validation::{schrodinger_residual, EffectiveHamiltonianSpec, ResidualOptions};
use ncosc_core::wavefunctions::default_grid;
use ncosc_core::{Dim, DriveField, DynamicsSettings, Evolution, NcSpace, OscillatorConfig, QuantumState, Signal};

fn driven() -> OscillatorConfig {
    OscillatorConfig::natural().with_drive(DriveField::new(vec![Signal::sin(0.3, 1.3), Signal::cos(0.2, 0.7)]).unwrap())
}

fn kernels(c: &mut Criterion) {
    let cfg = driven();
    let space = NcSpace::natural(1.0, 0.5, Dim::Two).unwrap();

    c.bench_function("closed_forms 2d", |b| b.iter(|| closed_forms(black_box(&cfg), black_box(&space))));

    c.bench_function("classical solve t=2", |b| {
        b.iter(|| Evolution::solve(&cfg, &space, &DynamicsSettings::until(black_box(2.0))).unwrap())
    });

    let state = QuantumState::ground(Evolution::from_rest(&cfg, &space, 2.0).unwrap());
    let mut slow = c.benchmark_group("grids");
    slow.sample_size(10);
    slow.bench_function("info_from_state 2d 512", |b| {
        b.iter(|| info_from_state(&state, black_box(1.3), &default_grid(Dim::Two)).unwrap())
    });
    let ham = EffectiveHamiltonianSpec::new(&cfg, &space).unwrap();
    slow.bench_function("schrodinger_residual 2d 512", |b| {
        b.iter(|| schrodinger_residual(&state, &ham, &ResidualOptions::at(black_box(1.3), Dim::Two)).unwrap())
    });
    slow.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
