use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hardy_core::convex::{convex_form, convex_weighted_norm, ConvexBody};
use hardy_core::halfspace::{form_ep, TestFunction};
use hardy_core::parallel::Parallelism;
use hardy_core::{EngineConfig, HardyParams};

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("rayon", Parallelism::Rayon)];

fn config(mode: Parallelism) -> EngineConfig {
    EngineConfig { parallelism: mode, ..EngineConfig::default() }.with_samples(100_000)
}

fn diagonal_form(c: &mut Criterion) {
    let u = TestFunction::hat(0.5, 1.0, 2.0).unwrap();
    let params = HardyParams::new(1, 2.0, 1.5).unwrap();
    let mut group = c.benchmark_group("form_1d");
    group.sample_size(10);
    for (name, mode) in MODES {
        let cfg = config(mode);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| form_ep(black_box(&u), &params, cfg).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo_form(c: &mut Criterion) {
    let disk = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
    let u = TestFunction::radial_bump(&[0.0, 0.0], 0.8).unwrap();
    let mut group = c.benchmark_group("form_mc_disk");
    group.sample_size(10);
    for (name, mode) in MODES {
        let cfg = config(mode);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| convex_form(black_box(&u), &disk, 2.0, 1.5, cfg).unwrap())
        });
    }
    group.finish();
}

fn pseudo_distance_norm(c: &mut Criterion) {
    let square = ConvexBody::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let u = TestFunction::radial_bump(&[0.5, 0.5], 0.4).unwrap();
    let mut group = c.benchmark_group("m_alpha_norm_square");
    group.sample_size(10);
    for (name, mode) in MODES {
        let cfg = config(mode);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| convex_weighted_norm(black_box(&u), &square, 2.0, 1.5, true, cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, diagonal_form, monte_carlo_form, pseudo_distance_norm);
criterion_main!(benches);
