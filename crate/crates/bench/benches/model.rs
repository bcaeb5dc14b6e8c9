use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rectenna_bench::{filtered, scenario, FC};
use rectenna_core::{
    build_series, eval_filtered, fourier_coefficient, optimize_capacitance, quad_coefficient,
    sweep_cutoff, Grid, RectifierKind, RippleMetric, Spacing,
};

fn coefficients(c: &mut Criterion) {
    c.bench_function("fourier_coefficient/k<=1024", |b| {
        b.iter(|| (0..=1024).map(|k| fourier_coefficient(RectifierKind::FullWave, black_box(k))).sum::<f64>())
    });
    let mut g = c.benchmark_group("build_series");
    for k in [64usize, 256, 1024] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| build_series(RectifierKind::FullWave, k, 1.0, FC).unwrap())
        });
    }
    g.finish();
    c.bench_function("quad_coefficient/k=16", |b| {
        b.iter(|| quad_coefficient(RectifierKind::HalfWave, black_box(16), FC))
    });
}

fn evaluation(c: &mut Criterion) {
    let mut g = c.benchmark_group("eval_filtered");
    for k in [64usize, 256, 1024] {
        let fs = filtered(k, 1e9);
        g.bench_with_input(BenchmarkId::from_parameter(k), &fs, |b, fs| {
            b.iter(|| eval_filtered(fs, black_box(3.7e-10)))
        });
    }
    g.finish();

    let fs = filtered(256, 1e9);
    c.bench_function("sample_period/65536", |b| b.iter(|| fs.sample_period(black_box(1 << 16)).unwrap()));

    let s = scenario(1 << 16);
    let f = s.filter_for_cutoff(1e9).unwrap();
    c.bench_function("output_stats/65536", |b| b.iter(|| s.output_stats(black_box(&f)).unwrap()));
}

fn design(c: &mut Criterion) {
    let mut g = c.benchmark_group("design");
    g.sample_size(10);
    let s = scenario(4096);
    let grid = Grid::new(1e8, 1e11, 100, Spacing::Log).unwrap();
    g.bench_function("sweep_cutoff/100", |b| b.iter(|| sweep_cutoff(&s, &grid).unwrap()));
    g.bench_function("optimize_capacitance/sampled", |b| {
        b.iter(|| optimize_capacitance(&s, black_box(0.1), RippleMetric::SampledPtp).unwrap())
    });
    g.bench_function("optimize_capacitance/analytic", |b| {
        b.iter(|| optimize_capacitance(&s, black_box(0.1), RippleMetric::Analytic).unwrap())
    });
    g.finish();
}

criterion_group!(benches, coefficients, evaluation, design);
criterion_main!(benches);
