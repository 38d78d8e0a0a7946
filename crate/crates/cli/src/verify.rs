//! Self-check suites behind `lorentzgas verify`: closed-form identities of
//! the limiting curves, fraction-bracketing structure, enumerated sums
//! against their limits, and billiard engine agreement.

use crate::{internal, usage, with_workers, CliError, CliResult, Suite, VerifyArgs};
use lorentzgas::arith::{self, SummandFunction};
use lorentzgas::billiards;
use lorentzgas::farey::{self, FareyPair, ReducedFraction};
use lorentzgas::freepath::{horizontal_free_path_brute, horizontal_free_path_farey};
use lorentzgas::limitdist::{
    constant_a, constant_c, density, g1_partial, h1_bracket, repartition,
};
use lorentzgas::special::{dilog, zeta2};
use lorentzgas::{quad, BilliardTable, Geometry, LatticeConfig, TableShape};
use std::f64::consts::{LN_2, TAU};

/// One named check with its verdict and a human-readable measurement.
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

impl Check {
    fn against(name: impl Into<String>, dev: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            pass: dev <= tol,
            detail: format!("dev {dev:.2e} (tol {tol:.0e})"),
        }
    }
}

/// Deterministic low-discrepancy points in (0, 1): the golden-ratio
/// rotation, so the suites need no RNG.
fn golden(k: u64) -> f64 {
    (k as f64 * 0.618_033_988_749_894_9).fract()
}

pub(crate) fn run(args: &VerifyArgs) -> CliResult<()> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut checks = Vec::new();
    if matches!(args.suite, Suite::Identities | Suite::All) {
        checks.extend(identities());
    }
    if matches!(args.suite, Suite::Farey | Suite::All) {
        checks.extend(farey_structure());
    }
    if matches!(args.suite, Suite::Sums | Suite::All) {
        checks.extend(sums(args.q)?);
    }
    if matches!(args.suite, Suite::Billiards | Suite::All) {
        checks.extend(billiard_checks(args)?);
    }

    let mut failed = 0usize;
    for check in &checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        println!("{status}  {:<52} {}", check.name, check.detail);
        if !check.pass {
            failed += 1;
        }
    }
    println!("{} checks run, {failed} failed", checks.len());
    if failed > 0 {
        Err(CliError::Internal(format!("{failed} verification check(s) failed")))
    } else {
        Ok(())
    }
}

/// Closed-form identities: dilogarithm values, seam continuity of the
/// survival curve and its density, the value at λ = 1, the first-branch
/// bracket collapse, and the piecewise assembly identity.
fn identities() -> Vec<Check> {
    let mut checks = Vec::new();

    let dev = (dilog(0.5).unwrap() - (zeta2() - LN_2 * LN_2) / 2.0).abs();
    checks.push(Check::against("dilog(1/2) = (ζ(2) − ln²2)/2", dev, 1e-14));
    let dev = (dilog(1.0).unwrap() - zeta2()).abs();
    checks.push(Check::against("dilog(1) = ζ(2)", dev, 1e-15));

    let h = 1e-8;
    let mut worst_seam = 0.0f64;
    let mut worst_value = 0.0f64;
    let mut worst_density_seam = 0.0f64;
    for ell in 2..=12 {
        for b in [0.5, 1.0] {
            let jump = (repartition(ell, b - h).unwrap() - repartition(ell, b + h).unwrap()).abs();
            worst_seam = worst_seam.max(jump);
            let d = 1e-12;
            let gap = (density(ell, b - d).unwrap() - density(ell, b + d).unwrap()).abs();
            worst_density_seam = worst_density_seam.max(gap);
        }
        let closed = 2.0 * constant_c(ell).unwrap() / ell as f64 * (zeta2() - 1.0);
        worst_value = worst_value.max((repartition(ell, 1.0).unwrap() - closed).abs());
    }
    checks.push(Check::against("survival seam continuity at λ = 1/2, 1 (ℓ ≤ 12)", worst_seam, 10.0 * h));
    checks.push(Check::against("survival value at λ = 1 closed form (ℓ ≤ 12)", worst_value, 1e-12));
    checks.push(Check::against("density seam continuity at λ = 1/2, 1 (ℓ ≤ 12)", worst_density_seam, 1e-9));

    // The density is −1 times the survival slope; probe both sides of each
    // seam and the tail.
    let fd_h = 1e-6;
    let mut worst_fd = 0.0f64;
    for ell in [2u64, 3] {
        for l in [0.1, 0.2, 0.3, 0.45, 0.55, 0.7, 0.85, 0.95, 1.1, 1.5, 2.0, 5.0] {
            let fd = (repartition(ell, l - fd_h).unwrap() - repartition(ell, l + fd_h).unwrap())
                / (2.0 * fd_h);
            worst_fd = worst_fd.max((density(ell, l).unwrap() - fd).abs());
        }
    }
    checks.push(Check::against("density matches centered differences (ℓ = 2, 3)", worst_fd, 1e-6));

    // Mass: quadrature over (0, 10⁴] plus the closed-form tail must give 1.
    let pts = [1e-12, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0, 1e4];
    let mass = quad::integrate_segments(|x| density(2, x).unwrap(), &pts, 1e-9);
    let dev = (mass + repartition(2, 1e4).unwrap() - 1.0).abs();
    checks.push(Check::against("density total mass (ℓ = 2)", dev, 1e-4));

    let mut worst_bracket = 0.0f64;
    for k in 1..=20 {
        let l = k as f64 / 42.0;
        worst_bracket = worst_bracket.max((h1_bracket(l).unwrap() + l).abs());
    }
    checks.push(Check::against("first-branch bracket collapses to −λ", worst_bracket, 1e-8));

    let mut worst_assembly = 0.0f64;
    for ell in [2u64, 3, 5, 6] {
        let a = constant_a(ell).unwrap();
        let c = constant_c(ell).unwrap();
        for k in 1..=50 {
            let l = k as f64 / 50.0;
            let assembled = a * g1_partial(l).unwrap() + 2.0 * c / ell as f64 * (zeta2() - l);
            worst_assembly = worst_assembly.max((assembled - repartition(ell, l).unwrap()).abs());
        }
    }
    checks.push(Check::against("piecewise assembly identity on (0, 1]", worst_assembly, 1e-9));

    checks
}

/// Consecutive-fraction structure and the equivalence of the structural
/// free-path engine with the brute scan.
fn farey_structure() -> Vec<Check> {
    let mut checks = Vec::new();

    // Exhaustive pair validation for every order up to 120: unimodularity,
    // the order window, and congruence-class exclusivity.
    let mut pairs = 0u64;
    let mut violations = 0u64;
    for order in 2..=120u64 {
        let mut prev: Option<ReducedFraction> = None;
        for f in farey::enumerate(order, 0.0, 1.0).unwrap() {
            if let Some(p) = prev {
                let det = f.numerator() as i64 * p.denominator() as i64
                    - p.numerator() as i64 * f.denominator() as i64;
                let window = p.denominator() + f.denominator() > order;
                let exclusive = ![2u64, 3, 5]
                    .iter()
                    .any(|&ell| p.in_congruence_class(ell) && f.in_congruence_class(ell));
                if det != 1 || !window || !exclusive {
                    violations += 1;
                }
                pairs += 1;
            }
            prev = Some(f);
        }
    }
    checks.push(Check {
        name: "consecutive-pair structure (orders ≤ 120)".into(),
        pass: violations == 0,
        detail: format!("{pairs} pairs, {violations} violations"),
    });

    // Bracketing agrees with one streamed enumeration on sorted queries.
    let order = 3000u64;
    let mut queries: Vec<f64> = (1..=300).map(golden).collect();
    queries.sort_by(f64::total_cmp);
    let mut mismatches = 0u64;
    let mut left = ReducedFraction::new(0, 1).unwrap();
    let mut right = ReducedFraction::new(1, order).unwrap();
    for &x in &queries {
        while right.value() <= x {
            let pair = FareyPair::new(left, right, order).unwrap();
            left = right;
            right = farey::next_in_sequence(&pair).unwrap();
        }
        let b = farey::bracket(x, order).unwrap();
        if (b.left(), b.right()) != (left, right) {
            mismatches += 1;
        }
    }
    checks.push(Check {
        name: "bracketing vs streamed enumeration (Q = 3000)".into(),
        pass: mismatches == 0,
        detail: format!("300 queries, {mismatches} mismatches"),
    });

    // The structural engine and the brute scan agree ray for ray.
    let lambda_max = 8.0;
    let mut checked = 0u64;
    let mut disagreements = 0u64;
    for (ell, eps) in [(2u64, 1e-2), (3u64, 1e-3)] {
        let cfg = LatticeConfig::new(ell, eps, Geometry::VerticalSegment).unwrap();
        let horizon_cols = (lambda_max * cfg.order() as f64).floor() as u64;
        for k in 1..=1000u64 {
            let mut slope = golden(k * ell);
            let fast = loop {
                match horizontal_free_path_farey(&cfg, slope, lambda_max) {
                    Ok(s) => break s,
                    // Exact band boundary: measure zero, perturb off it.
                    Err(_) => slope = (slope + 1e-13).min(1.0 - 1e-16),
                }
            };
            let scan = horizontal_free_path_brute(&cfg, slope, horizon_cols).unwrap();
            if fast.outcome != scan.outcome {
                disagreements += 1;
            }
            checked += 1;
        }
    }
    checks.push(Check {
        name: "structural engine ≡ brute scan".into(),
        pass: disagreements == 0,
        detail: format!("{checked} slopes, {disagreements} disagreements"),
    });

    checks
}

/// Averaged totient residuals and the enumerated sums, echoed as a table.
fn sums(q: u64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();

    let frozen_k = 60.0;
    let n = 10_000u64;
    let bound = frozen_k * (n as f64).ln();
    let mut worst_ratio = 0.0f64;
    for ell in [2u64, 3, 6] {
        let v = SummandFunction::new(|_| 1.0, 1.0, 0.0);
        for check in
            [arith::coprime_totient_sum(ell, n, &v), arith::scaled_totient_sum(ell, n, &v)]
        {
            worst_ratio = worst_ratio.max(usage(check)?.residual.abs() / bound);
        }
    }
    checks.push(Check {
        name: "averaged totient residuals ≤ 60·ln N (N = 10⁴)".into(),
        pass: worst_ratio <= 1.0,
        detail: format!("worst at {:.1}% of the bound", 100.0 * worst_ratio),
    });

    println!("sum,Q,lambda,ell,enumerated,predicted,rel_err");
    let interval = (0.0, 1.0);
    let mut worst = 0.0f64;
    for ell in [2u64, 3] {
        for lambda in [0.4, 0.6, 0.8] {
            for (name, check) in [
                ("A", farey::sum_a(interval, q, lambda, ell)),
                ("B", farey::sum_b(interval, q, lambda, ell)),
                ("C", farey::sum_c(interval, q, lambda, ell)),
            ] {
                let check = usage(check)?;
                println!(
                    "{name},{q},{lambda},{ell},{},{},{:.4e}",
                    check.enumerated,
                    check.predicted,
                    check.rel_err()
                );
                worst = worst.max(check.rel_err());
            }
        }
        for lambda in [1.2, 1.5, 2.0] {
            let check = usage(farey::sum_sink(interval, q, lambda, ell))?;
            println!(
                "sink,{q},{lambda},{ell},{},{},{:.4e}",
                check.enumerated,
                check.predicted,
                check.rel_err()
            );
            worst = worst.max(check.rel_err());
        }
    }
    checks.push(Check {
        name: format!("enumerated sums within 5% of their limits (Q = {q})"),
        pass: worst <= 0.05,
        detail: format!("worst rel err {worst:.2e}"),
    });
    Ok(checks)
}

/// Billiard engine agreement and empirical survival against the limits.
fn billiard_checks(args: &VerifyArgs) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();

    // Fold/unfold agreement at a short horizon, where the reflective
    // engine's per-reflection float drift stays far below the tolerance.
    for (shape, name) in [
        (TableShape::Hexagon, "hexagon fold/unfold agreement"),
        (TableShape::Square, "square fold/unfold agreement"),
    ] {
        let table = usage(BilliardTable::new(shape, 1e-3))?;
        let dev = internal(billiards::fold_unfold_agreement(&table, 300, args.seed, 0.5))?;
        checks.push(Check::against(name, dev, 1e-9));
    }

    let grid: Vec<f64> = (0..60).map(|i| 0.05 + i as f64 * (3.0 - 0.05) / 59.0).collect();
    let sector = (0.0, TAU);
    let (hex, square) = with_workers(args.workers, || {
        (
            billiards::empirical_hex_repartition(1e-3, sector, &grid, args.samples, args.seed),
            billiards::empirical_square_repartition(1e-3, sector, &grid, args.samples, args.seed),
        )
    })?;
    for (name, table) in
        [("hexagon survival vs limit curve", internal(hex)?), ("square survival vs limit curve", internal(square)?)]
    {
        checks.push(Check {
            name: name.into(),
            pass: table.sup_error() <= 0.02,
            detail: format!(
                "sup error {:.4} (tol 0.02) on {} directions",
                table.sup_error(),
                args.samples
            ),
        });
    }
    Ok(checks)
}
