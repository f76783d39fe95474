//! Sequential against rayon execution for the data-parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use singular_flat::causality::{MeasureConfig, VolumeSampler};
use singular_flat::model::TubeRegion;
use singular_flat::surfaces::{extend_boundary_complete, BoundaryCurve, SamplingGrid};
use singular_flat::verify::developing_residuals;
use singular_flat::{ConeAngle, Exec, ModelPoint};

const PATHS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn volume_time(c: &mut Criterion) {
    let region = TubeRegion::new(ConeAngle::BTZ, 1.0, Some(0.0), Some(2.0)).unwrap();
    let p = ModelPoint::btz(1.0, 0.3, 0.5).unwrap();
    let mut group = c.benchmark_group("volume_time");
    group.sample_size(10);
    for n in [100_000usize, 1_000_000] {
        let cfg = MeasureConfig::new(1.0, 1.0, n, 7).unwrap();
        for (name, exec) in PATHS {
            group.bench_with_input(BenchmarkId::new(format!("sample+evaluate/{name}"), n), &n, |b, _| {
                b.iter(|| {
                    let s = VolumeSampler::with_exec(&region, &cfg, exec).unwrap();
                    black_box(s.evaluate(&p).unwrap())
                })
            });
            let sampler = VolumeSampler::with_exec(&region, &cfg, exec).unwrap();
            group.bench_with_input(BenchmarkId::new(format!("evaluate/{name}"), n), &n, |b, _| {
                b.iter(|| black_box(sampler.evaluate(black_box(&p)).unwrap()))
            });
        }
    }
    group.finish();
}

fn grid_scan(c: &mut Criterion) {
    let b = BoundaryCurve::new(0.3, vec![0.5, -0.2, 0.1], vec![0.1, 0.4, -0.3]).unwrap();
    let s = extend_boundary_complete(&b, 1.0).unwrap();
    let mut group = c.benchmark_group("grid_scan");
    for n in [128usize, 512] {
        let grid = SamplingGrid::uniform(n, n);
        for (name, exec) in PATHS {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |bch, _| {
                bch.iter(|| black_box(s.spacelike_check(&grid, exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn developing(c: &mut Criterion) {
    let mut group = c.benchmark_group("developing_residuals");
    for (name, exec) in PATHS {
        group.bench_function(name, |b| {
            b.iter(|| black_box(developing_residuals(10_000, 7, 1e-4, exec)))
        });
    }
    group.finish();
}

criterion_group!(benches, volume_time, grid_scan, developing);
criterion_main!(benches);
