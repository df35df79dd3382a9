use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use nanofiber_bench::{fiber, surface_atom};
use nanofiber_core::fiber::{solve_beta, ModeKind};
use nanofiber_core::rates::{gamma_radiation, RadiationOptions};
use nanofiber_core::units::angular_frequency;
use nanofiber_core::RateEngine;

fn solve(c: &mut Criterion) {
    let geom = fiber(400.0);
    let omega = angular_frequency(780e-9);
    let mut group = c.benchmark_group("solve_beta");
    for kind in [ModeKind::HE11, ModeKind::TM01, ModeKind::HE21] {
        group.bench_function(kind.to_string(), |b| b.iter(|| solve_beta(black_box(&geom), omega, kind).unwrap()));
    }
    group.finish();
}

fn guided(c: &mut Criterion) {
    let engine = RateEngine::default();
    let cfg = surface_atom();
    engine.guided_report(&cfg).unwrap();
    c.bench_function("guided_report (cached modes)", |b| b.iter(|| engine.guided_report(black_box(&cfg)).unwrap()));
}

fn radiation(c: &mut Criterion) {
    let cfg = surface_atom();
    let mut group = c.benchmark_group("radiation");
    group.sample_size(10);
    for (name, opts) in [("default", RadiationOptions::default()), ("coarse", RadiationOptions::coarse())] {
        group.bench_function(name, |b| b.iter(|| gamma_radiation(black_box(&cfg), &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, solve, guided, radiation);
criterion_main!(benches);
