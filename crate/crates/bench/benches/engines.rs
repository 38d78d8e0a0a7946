//! Benchmarks of the exact free-path engines on fixed direction batches:
//! the structural fast path against the brute scan it must agree with, the
//! disc-lattice march, and the reflective vs unfolded billiard engines.

use criterion::{criterion_group, criterion_main, Criterion};
use lorentzgas::billiards::{reflective_exit_time, unfolded_exit_time_hex};
use lorentzgas::freepath::{
    exit_time_disc, horizontal_free_path_brute, horizontal_free_path_farey,
};
use lorentzgas::{BilliardTable, Geometry, LatticeConfig, TableShape};
use std::f64::consts::TAU;
use std::hint::black_box;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Deterministic low-discrepancy batch in (0, 1).
fn unit_batch(n: u64) -> Vec<f64> {
    (1..=n).map(|k| (k as f64 * GOLDEN).fract()).collect()
}

fn bench_segment_engines(c: &mut Criterion) {
    let cfg = LatticeConfig::new(2, 1e-3, Geometry::VerticalSegment).unwrap();
    let slopes = unit_batch(256);
    let horizon = 8.0;
    let horizon_cols = (horizon * cfg.order() as f64) as u64;
    let mut group = c.benchmark_group("segment free path, 256 slopes at eps 1e-3");
    group.bench_function("structural", |b| {
        b.iter(|| {
            for &slope in &slopes {
                // A boundary slope has measure zero in this batch; ignore it
                // the way the sweep's fallback does.
                if let Ok(sample) = horizontal_free_path_farey(&cfg, black_box(slope), horizon) {
                    black_box(sample);
                }
            }
        })
    });
    group.bench_function("brute scan", |b| {
        b.iter(|| {
            for &slope in &slopes {
                black_box(
                    horizontal_free_path_brute(&cfg, black_box(slope), horizon_cols).unwrap(),
                );
            }
        })
    });
    group.finish();
}

fn bench_disc_march(c: &mut Criterion) {
    let cfg = LatticeConfig::new(3, 1e-2, Geometry::Disc).unwrap();
    let omegas: Vec<f64> = unit_batch(64).into_iter().map(|u| u * TAU).collect();
    c.bench_function("disc march, 64 directions at eps 1e-2", |b| {
        b.iter(|| {
            for &omega in &omegas {
                black_box(exit_time_disc(&cfg, black_box(omega), 10.0).unwrap());
            }
        })
    });
}

fn bench_billiard_engines(c: &mut Criterion) {
    let table = BilliardTable::new(TableShape::Hexagon, 0.01).unwrap();
    let omegas: Vec<f64> = unit_batch(64).into_iter().map(|u| u * TAU).collect();
    let mut group = c.benchmark_group("hexagon exit time, 64 directions at eps 1e-2");
    group.bench_function("reflective", |b| {
        b.iter(|| {
            for &omega in &omegas {
                black_box(reflective_exit_time(&table, black_box(omega), 5.0).unwrap());
            }
        })
    });
    group.bench_function("unfolded", |b| {
        b.iter(|| {
            for &omega in &omegas {
                black_box(unfolded_exit_time_hex(0.01, black_box(omega), 5.0).unwrap());
            }
        })
    });
    group.finish();
}

criterion_group!(
    name = engines;
    config = Criterion::default().sample_size(20);
    targets = bench_segment_engines, bench_disc_march, bench_billiard_engines
);
criterion_main!(engines);
