//! Deterministic stratified sampling and histogram reduction for the
//! empirical distribution sweeps.
//!
//! Reproducibility contract: the direction domain is divided into `n`
//! equal strata, one sample per stratum, jittered by a counter-based
//! generator keyed on (seed, batch index). Samples are processed in fixed
//! batches whose integer histograms are combined by exact addition, an
//! associative and commutative reduction — so the output is byte-identical
//! for any worker count and any completion order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples per deterministic batch; each batch owns one generator stream.
pub const BATCH: u64 = 4096;

/// Stratified sweep over [lo, hi): evaluates `value` at n jittered sample
/// points and returns the bin counts of the results against `grid`
/// (ascending). Slot j counts results v with grid[j−1] ≤ v < … — precisely,
/// slot j is the number of v whose strict-lower-bound index
/// `grid.partition_point(g < v)` equals j, so slot `grid.len()` holds
/// everything above the last grid point, including infinite values.
///
/// `value` must be a pure function of its argument for the determinism
/// guarantee to hold.
pub fn sweep_counts<F>(lo: f64, hi: f64, n: u64, seed: u64, grid: &[f64], value: F) -> Vec<u64>
where
    F: Fn(f64) -> f64 + Sync,
{
    assert!(hi > lo, "empty sample domain");
    assert!(n > 0, "need at least one sample");
    let width = hi - lo;
    let batches = n.div_ceil(BATCH);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let mut counts = vec![0u64; grid.len() + 1];
            for i in b * BATCH..n.min((b + 1) * BATCH) {
                let u: f64 = rng.random();
                let x = lo + width * ((i as f64 + u) / n as f64);
                let v = value(x);
                let idx = grid.partition_point(|&g| g < v);
                counts[idx] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; grid.len() + 1],
            |mut acc, c| {
                for (a, b) in acc.iter_mut().zip(c) {
                    *a += b;
                }
                acc
            },
        )
}

/// Survival counts from bin counts: out[j] = number of samples strictly
/// above grid[j] (suffix sums of the slots past j).
pub fn survival_from_counts(counts: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; counts.len() - 1];
    let mut acc = 0u64;
    for j in (0..out.len()).rev() {
        acc += counts[j + 1];
        out[j] = acc;
    }
    out
}
