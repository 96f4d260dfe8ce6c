//! Compares the batch potential-evaluation path (rayon when the `parallel`
//! feature is on) against the always-available sequential reference.
//!
//! Run with `cargo bench -p potlab` (parallel) or
//! `cargo bench -p potlab --no-default-features` (both arms sequential).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use potlab::geometry::{volume_quadrature, DomainSpec, Vec3};
use potlab::par;
use potlab::potentials::{
    helmholtz_volume_with_rule, newtonian_direct_with_rule, Wavenumber,
};

fn sample_points(n: usize, radius: f64) -> Vec<Vec3> {
    // deterministic spiral of exterior points
    (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            let z = 2.0 * t - 1.0;
            let phi = 10.0 * std::f64::consts::PI * t;
            let s = (1.0 - z * z).sqrt();
            [radius * s * phi.cos(), radius * s * phi.sin(), radius * z]
        })
        .collect()
}

fn bench_newtonian_batch(c: &mut Criterion) {
    let d = DomainSpec::ball([0.0; 3], 1.0).unwrap();
    let rule = volume_quadrature(&d, 16).unwrap();
    let mut group = c.benchmark_group("newtonian_batch");
    for n in [64usize, 512] {
        let pts = sample_points(n, 3.0);
        group.bench_with_input(BenchmarkId::new("data_parallel", n), &pts, |b, pts| {
            b.iter(|| par::map_collect(pts, |x| newtonian_direct_with_rule(&rule, *x)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &pts, |b, pts| {
            b.iter(|| par::map_collect_seq(pts, |x| newtonian_direct_with_rule(&rule, *x)))
        });
    }
    group.finish();
}

fn bench_helmholtz_batch(c: &mut Criterion) {
    let d = DomainSpec::ball([0.0; 3], 2.0).unwrap();
    let rule = volume_quadrature(&d, 16).unwrap();
    let k = Wavenumber::new(1.0).unwrap();
    let mut group = c.benchmark_group("helmholtz_batch");
    for n in [64usize, 512] {
        let pts = sample_points(n, 6.0);
        group.bench_with_input(BenchmarkId::new("data_parallel", n), &pts, |b, pts| {
            b.iter(|| par::map_collect(pts, |x| helmholtz_volume_with_rule(&rule, k, *x)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &pts, |b, pts| {
            b.iter(|| par::map_collect_seq(pts, |x| helmholtz_volume_with_rule(&rule, k, *x)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_newtonian_batch, bench_helmholtz_batch);
criterion_main!(benches);
