//! Criterion benches comparing the rayon data-parallel paths against the
//! always-available sequential fallback. Built with the default `parallel`
//! feature both series are meaningful; without it they coincide.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ias_core::exec::ExecMode;
use ias_core::gallery::{self, ExampleName};
use ias_core::verify;

fn bench_eval_surface(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_surface");
    for n in [64usize, 128] {
        let data = gallery::get_example(ExampleName::Rotational, &gallery::Params::default())
            .unwrap()
            .with_resolution(n, n);
        group.bench_with_input(BenchmarkId::new("parallel", n), &data, |b, d| {
            b.iter(|| ias_core::weier::eval_surface_with(d, ExecMode::Auto).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &data, |b, d| {
            b.iter(|| ias_core::weier::eval_surface_with(d, ExecMode::Sequential).unwrap())
        });
    }
    group.finish();
}

fn bench_hessian_residual(c: &mut Criterion) {
    let mut group = c.benchmark_group("hessian_residual");
    group.sample_size(20);
    let data = gallery::get_example(ExampleName::Paraboloid, &gallery::Params::default())
        .unwrap()
        .with_resolution(128, 128);
    let mesh = ias_core::weier::eval_surface(&data).unwrap();
    let opts = verify::VerifyOptions::default();
    group.bench_function("parallel", |b| {
        b.iter(|| verify::hessian_residual_with(&mesh, &opts, ExecMode::Auto).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| verify::hessian_residual_with(&mesh, &opts, ExecMode::Sequential).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_eval_surface, bench_hessian_residual);
criterion_main!(benches);
