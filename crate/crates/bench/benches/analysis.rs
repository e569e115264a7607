use std::f64::consts::PI;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qcomplexity::{
    analyze, sample_trajectory, AnalysisConfig, AveragingMode, EvolutionProblem, SubOptimalParams,
};

fn bench_trajectory(c: &mut Criterion) {
    let p = EvolutionProblem::canonical(1.0).unwrap();
    let q = SubOptimalParams::new(PI / 16.0).unwrap();
    c.bench_function("sample_trajectory_4097", |b| {
        b.iter(|| sample_trajectory(black_box(&p), black_box(&q), 4097).unwrap())
    });
}

fn bench_analyze(c: &mut Criterion) {
    let p = EvolutionProblem::canonical(1.0).unwrap();
    let mut group = c.benchmark_group("analyze");
    for mode in [AveragingMode::Uniform, AveragingMode::AppendixPiecewise] {
        let cfg = AnalysisConfig {
            mode,
            ..AnalysisConfig::default()
        };
        for k in [1u32, 4, 8] {
            let q = SubOptimalParams::new(k as f64 * PI / 16.0).unwrap();
            group.bench_function(format!("{mode}_{k}pi16"), |b| {
                b.iter(|| analyze(black_box(&p), black_box(&q), &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_table_sweep(c: &mut Criterion) {
    let p = EvolutionProblem::canonical(1.0).unwrap();
    let cfg = AnalysisConfig::default();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("table_grid_9", |b| {
        b.iter(|| {
            (0..=8)
                .map(|k| {
                    let q = SubOptimalParams::new(k as f64 * PI / 16.0).unwrap();
                    analyze(&p, &q, &cfg).unwrap().report.l_c
                })
                .sum::<f64>()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_trajectory, bench_analyze, bench_table_sweep);
criterion_main!(benches);
