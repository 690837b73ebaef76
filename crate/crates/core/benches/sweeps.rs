use std::hint::black_box;

use cespdc::comb::f_quadrature_series;
use cespdc::single_mode::scan;
use cespdc::{g2_comb, squeezing_spectrum, CavityParams, Execution, GainSetting, KMax};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn comparison_scan(c: &mut Criterion) {
    let axis = linspace(0.5, 0.99, 8);
    let fracs = linspace(0.01, 0.95, 6);
    let mut group = c.benchmark_group("comparison_scan_8x8x6");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| scan(black_box(&axis), &axis, &fracs, exec).unwrap())
        });
    }
    group.finish();
}

fn lorentzian_render(c: &mut Criterion) {
    let cavity = CavityParams::normalized(0.9, 0.95).unwrap();
    let gain = GainSetting::fraction_of_threshold(&cavity, 0.5).unwrap();
    let comb = g2_comb(&cavity, &gain, KMax::default()).unwrap();
    let grid = linspace(-5.0, 50.0, 20_000);
    let mut group = c.benchmark_group("render_20k_points");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| comb.render_lorentzian(0.01, black_box(&grid), exec).unwrap())
        });
    }
    group.finish();
}

fn quadrature_sweep(c: &mut Criterion) {
    let points: Vec<(f64, f64)> = linspace(0.3, 0.99, 16).into_iter().map(|r| (r, 0.95)).collect();
    let mut group = c.benchmark_group("fourier_quadrature_16_cavities");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec.map(&points, |&(r1, r2)| {
                    let cavity = CavityParams::normalized(r1, r2).unwrap();
                    let gain = GainSetting::fraction_of_threshold(&cavity, 0.5).unwrap();
                    f_quadrature_series(&cavity, &gain, 20).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn squeezing_grid(c: &mut Criterion) {
    let cavity = CavityParams::normalized(0.9, 0.95).unwrap();
    let gain = GainSetting::fraction_of_threshold(&cavity, 0.9).unwrap();
    let omegas = linspace(-cavity.fsr(), cavity.fsr(), 10_000);
    let mut group = c.benchmark_group("squeezing_10k_frequencies");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec.map(black_box(&omegas), |&w| {
                    squeezing_spectrum(&cavity, &gain, w, 0.0).unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    comparison_scan,
    lorentzian_render,
    quadrature_sweep,
    squeezing_grid
);
criterion_main!(benches);
