//! Cross-engine and cross-model checks that need more machinery than a
//! unit test: the disc and segment geometries against each other, the
//! reflective billiard against its unfolded march, table symmetries probed
//! without the folding shortcuts, and a file round trip of a real sweep.

use lorentzgas::billiards::{
    self, fold_unfold_agreement, reflective_exit_time, BilliardTable, TableShape,
};
use lorentzgas::freepath::{
    empirical_repartition, exit_time_disc, horizontal_free_path_brute, Geometry, LatticeConfig,
    PathOutcome,
};
use lorentzgas::limitdist::{repartition, repartition_limit};
use lorentzgas::output;
use lorentzgas::sampling;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

struct Lcg(u64);

impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

/// |m·tan ω − n| ≤ ε′ ⇔ perpendicular distance ≤ ε′·cos ω, so a disc of
/// radius ε must produce the same first hit as vertical segments of
/// half-length ε/cos ω. Exact model equivalence, checked on the hit point.
#[test]
fn matched_radius_disc_equals_segment_oracle() {
    let eps = 1e-2;
    let ell = 3;
    let disc_cfg = LatticeConfig::new(ell, eps, Geometry::Disc).unwrap();
    let mut rng = Lcg(0xD15C);
    let mut finite = 0;
    for _ in 0..1000 {
        let omega = FRAC_PI_4 * rng.next_f64();
        let seg_cfg =
            LatticeConfig::new(ell, eps / omega.cos(), Geometry::VerticalSegment).unwrap();
        let from_disc = exit_time_disc(&disc_cfg, omega, 40.0).unwrap();
        let from_seg =
            horizontal_free_path_brute(&seg_cfg, omega.tan(), (41.0 / eps) as u64).unwrap();
        match (from_disc.outcome, from_seg.outcome) {
            (
                PathOutcome::Finite { value, hit },
                PathOutcome::Finite { value: q, hit: seg_hit },
            ) => {
                assert_eq!(hit, seg_hit, "models disagree on the hit point at ω={omega}");
                // τ lands within ε of the column crossing q/cos ω.
                assert!(
                    (value - q / omega.cos()).abs() <= eps / omega.cos() + 1e-12,
                    "τ={value} vs q/cosω={} at ω={omega}",
                    q / omega.cos()
                );
                finite += 1;
            }
            (PathOutcome::Escaped, PathOutcome::Escaped) => {}
            (d, s) => panic!("one model escaped at ω={omega}: disc {d:?}, segment {s:?}"),
        }
    }
    // At ε=1e-2 and horizon 40/ε the escape set is tiny; nearly every
    // direction must have produced a comparable finite pair.
    assert!(finite > 950, "only {finite} finite comparisons");
}

/// The distributions of ε·τ (disc) and ε·q/cos ω (segment) over the first
/// octant stay within sup-distance 0.03 of each other at ε = 1e-3: the
/// free path is the exit column up to the secant factor.
#[test]
fn disc_and_segment_distributions_agree() {
    let eps = 1e-3;
    let n = 100_000;
    let grid = linspace(0.1, 4.0, 100);
    let lambda_max = 4.0 * 4.0;
    let disc_cfg = LatticeConfig::new(2, eps, Geometry::Disc).unwrap();
    let disc_table = {
        let counts = sampling::sweep_counts(0.0, FRAC_PI_4, n, 7, &grid, |omega| {
            eps * exit_time_disc(&disc_cfg, omega, lambda_max).unwrap().value_or_infinity()
        });
        sampling::survival_from_counts(&counts)
    };
    let horizon = (lambda_max / eps) as u64;
    let seg_table = {
        let counts = sampling::sweep_counts(0.0, FRAC_PI_4, n, 7, &grid, |omega| {
            // The ray crosses column q at path length q/cos ω, and the disc
            // subtends the same column window as a vertical segment of
            // half-length ε/cos ω — the matched width makes the two models
            // agree path by path up to ±ε.
            let seg_cfg =
                LatticeConfig::new(2, eps / omega.cos(), Geometry::VerticalSegment).unwrap();
            let q = horizontal_free_path_brute(&seg_cfg, omega.tan(), horizon)
                .unwrap()
                .value_or_infinity();
            eps * q / omega.cos()
        });
        sampling::survival_from_counts(&counts)
    };
    let sup = disc_table
        .iter()
        .zip(&seg_table)
        .map(|(&d, &s)| ((d as f64 - s as f64) / n as f64).abs())
        .fold(0.0, f64::max);
    assert!(sup <= 0.03, "octant sup-distance {sup} between disc and segment models");
}

/// The reflective engine knows nothing about the sixfold symmetry the
/// unfolded engine exploits, so agreement of τ at ω, ω + π/3, and the
/// mirror π/3 − ω is an independent check of both the table geometry and
/// the folding reductions layered on top of it.
#[test]
fn reflective_hexagon_has_sixfold_symmetry() {
    let table = BilliardTable::new(TableShape::Hexagon, 0.03).unwrap();
    let lambda_max = 10.0;
    let cap = lambda_max / table.epsilon();
    let mut rng = Lcg(0x6E1);
    let clamp = |omega: f64| {
        reflective_exit_time(&table, omega, lambda_max).unwrap().value_or_infinity().min(cap)
    };
    for _ in 0..200 {
        let omega = FRAC_PI_3 * rng.next_f64();
        let base = clamp(omega);
        let rotated = clamp(omega + FRAC_PI_3);
        let mirrored = clamp(FRAC_PI_3 - omega);
        assert!((base - rotated).abs() <= 1e-9, "rotation broke τ at ω={omega}");
        assert!((base - mirrored).abs() <= 1e-9, "mirror broke τ at ω={omega}");
    }
}

/// Square analogue: τ at ω, ω + π/2, and −ω agree for the reflective
/// engine, and the unfolded square march reproduces the reflective result
/// on a thousand directions.
#[test]
fn square_symmetry_and_fold_unfold() {
    let table = BilliardTable::new(TableShape::Square, 0.04).unwrap();
    let lambda_max = 10.0;
    let cap = lambda_max / table.epsilon();
    let mut rng = Lcg(0x5a);
    let clamp = |omega: f64| {
        reflective_exit_time(&table, omega, lambda_max).unwrap().value_or_infinity().min(cap)
    };
    for _ in 0..200 {
        let omega = std::f64::consts::FRAC_PI_2 * rng.next_f64();
        let base = clamp(omega);
        assert!((base - clamp(omega + std::f64::consts::FRAC_PI_2)).abs() <= 1e-9);
        assert!((base - clamp(-omega)).abs() <= 1e-9);
    }
    let dev = fold_unfold_agreement(&table, 1000, 99, lambda_max).unwrap();
    assert!(dev <= 1e-9, "square fold/unfold deviation {dev:.3e}");
}

/// The limit curve is the uniform limit of the finite-modulus curves: at a
/// large prime modulus the two stay within O(1/ℓ) across the kink region
/// and the (vanishing) tail.
#[test]
fn limit_curve_caps_large_moduli() {
    for k in 1..=60 {
        let l = k as f64 * 0.02; // (0, 1.2]
        let finite = repartition(997, l).unwrap();
        let limit = repartition_limit(l).unwrap();
        assert!(
            (finite - limit).abs() <= 0.01,
            "modulus 997 strays from the limit curve at λ={l}"
        );
    }
}

/// A real sweep written to disk and read back: CSV reproduces the table
/// bit for bit, the JSON sidecar carries the run metadata, and the SVG is
/// a self-contained two-curve plot.
#[test]
fn sweep_artifacts_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let grid = linspace(0.2, 2.0, 40);
    let cfg = LatticeConfig::new(2, 0.02, Geometry::Disc).unwrap();
    let table = empirical_repartition(&cfg, &grid, 2000, 5).unwrap();

    let csv_path = dir.path().join("sweep.csv");
    output::write_distribution_csv(&csv_path, &table).unwrap();
    let rows = output::read_distribution_csv(&csv_path).unwrap();
    assert_eq!(rows.len(), table.grid.len());
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.lambda, table.grid[i]);
        assert_eq!(row.empirical, table.empirical[i]);
        assert_eq!(row.theory, table.theory[i]);
        assert_eq!(row.abs_err, table.abs_err[i]);
    }

    let summary = output::RunSummary {
        ell: 2,
        epsilon: 0.02,
        n_samples: table.n_samples,
        seed: table.seed,
        sup_error: table.sup_error(),
        runtime_seconds: 0.0,
        table: None,
    };
    let json_path = dir.path().join("sweep.json");
    output::write_json(&json_path, &summary).unwrap();
    let text = std::fs::read_to_string(&json_path).unwrap();
    let parsed: output::RunSummary = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed, summary);

    let svg_path = dir.path().join("sweep.svg");
    output::write_survival_plot_svg(&svg_path, &table, "sweep").unwrap();
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"), "not an inline SVG document");
    // Self-contained: the xmlns namespace is fine, fetched assets are not.
    for needle in ["href", "url(", "<script", "<image"] {
        assert!(!svg.contains(needle), "SVG references an external asset via {needle:?}");
    }
}

/// Empirical sweeps are honest survival functions: non-increasing, inside
/// [0,1], and indistinguishable from certainty at λ far below the nearest
/// scatterer distance.
#[test]
fn sweeps_are_survival_functions() {
    let grid = [1e-3, 0.5, 1.0, 2.0, 5.0];
    let cfg = LatticeConfig::new(3, 1e-2, Geometry::Disc).unwrap();
    let table = empirical_repartition(&cfg, &grid, 50_000, 3).unwrap();
    assert!(table.empirical.windows(2).all(|w| w[1] <= w[0]));
    assert!(table.empirical.iter().all(|&p| (0.0..=1.0).contains(&p)));
    assert!(table.empirical[0] >= 0.999, "survival at λ=1e-3 is {}", table.empirical[0]);
    let hex =
        billiards::empirical_hex_repartition(1e-2, (0.0, 2.0 * PI), &grid, 20_000, 3).unwrap();
    assert!(hex.empirical.windows(2).all(|w| w[1] <= w[0]));
    assert!(hex.empirical[0] >= 0.999);
}
