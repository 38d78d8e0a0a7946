//! Microbenchmarks of the analytic layer: the dilogarithm, the limiting
//! survival curve on each of its three branches, its density, and the
//! quadrature-backed first-branch bracket.

use criterion::{criterion_group, criterion_main, Criterion};
use lorentzgas::limitdist::{density, h1_bracket, repartition};
use lorentzgas::special::dilog;
use std::hint::black_box;

fn bench_dilog(c: &mut Criterion) {
    c.bench_function("dilog(0.37)", |b| b.iter(|| dilog(black_box(0.37)).unwrap()));
}

fn bench_survival(c: &mut Criterion) {
    let mut group = c.benchmark_group("survival G(2, ·)");
    for (name, lambda) in [("first branch", 0.3), ("middle branch", 0.8), ("tail", 2.5)] {
        group.bench_function(name, |b| {
            b.iter(|| repartition(black_box(2), black_box(lambda)).unwrap())
        });
    }
    group.finish();
}

fn bench_density(c: &mut Criterion) {
    let mut group = c.benchmark_group("density g(2, ·)");
    for (name, lambda) in [("middle branch", 0.8), ("tail", 2.5)] {
        group.bench_function(name, |b| {
            b.iter(|| density(black_box(2), black_box(lambda)).unwrap())
        });
    }
    group.finish();
}

fn bench_bracket(c: &mut Criterion) {
    c.bench_function("first-branch bracket quadrature", |b| {
        b.iter(|| h1_bracket(black_box(0.3)).unwrap())
    });
}

criterion_group!(curves, bench_dilog, bench_survival, bench_density, bench_bracket);
criterion_main!(curves);
