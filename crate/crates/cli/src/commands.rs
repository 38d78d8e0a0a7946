//! The four data-producing subcommands: curve tabulation, single rays,
//! lattice sweeps, and billiard sweeps.

use crate::grid::GridSpec;
use crate::{
    internal, usage, with_workers, BilliardArgs, CliError, CliResult, DistArgs, EngineChoice,
    FreepathArgs, SweepArgs, TableChoice,
};
use lorentzgas::freepath::{
    exit_time_disc, horizontal_free_path_brute, horizontal_free_path_farey,
};
use lorentzgas::output::{self, RunSummary};
use lorentzgas::{billiards, BilliardTable, CongruenceModulus, Geometry, LatticeConfig, LimitCurve, PathSample, TableShape};
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Single rays longer than this many normalized units count as escaped.
const FREEPATH_HORIZON: f64 = 10.0;

/// Materialize a grid spec, rejecting counts so large that adjacent points
/// collide in floating point.
fn build_grid(spec: &GridSpec) -> CliResult<Vec<f64>> {
    let grid = spec.build();
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!(
            "grid spacing collapses at {} points over [{}, {}]; use fewer points",
            spec.count, spec.min, spec.max
        )));
    }
    Ok(grid)
}

/// `out.csv` → `out.json`.
fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// `out.csv` → `out_summary.json`.
fn summary_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    csv.with_file_name(format!("{stem}_summary.json"))
}

/// `out.csv` + ε → `out_eps0.001.csv`.
fn tagged_path(csv: &Path, eps: f64) -> PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let ext = csv.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    csv.with_file_name(format!("{stem}_eps{eps}.{ext}"))
}

fn write_file(r: lorentzgas::Result<()>, path: &Path) -> CliResult<()> {
    r.map_err(|e| CliError::Usage(format!("writing {}: {e}", path.display())))
}

pub(crate) fn dist(args: &DistArgs) -> CliResult<()> {
    let modulus = usage(CongruenceModulus::new(args.ell))?;
    let grid = build_grid(&args.grid)?;
    let curve = usage(LimitCurve::new(modulus, grid))?;
    let rows = curve.rows();
    match &args.out {
        None => print!("{}", output::limit_csv(&rows)),
        Some(csv_path) => {
            write_file(output::write_limit_csv(csv_path, &rows), csv_path)?;
            let sidecar = args.json.clone().unwrap_or_else(|| sidecar_path(csv_path));
            let echo = serde_json::json!({
                "ell": args.ell,
                "grid": args.grid.to_string(),
                "rows": rows.len(),
            });
            write_file(output::write_json(&sidecar, &echo), &sidecar)?;
            println!("wrote {} and {}", csv_path.display(), sidecar.display());
        }
    }
    Ok(())
}

/// Re-parse the library's single-line sample JSON so it can be embedded in
/// a larger object without double encoding.
fn sample_value(sample: &PathSample) -> serde_json::Value {
    serde_json::from_str(&output::path_sample_json(sample))
        .expect("the sample serializer emits valid JSON")
}

pub(crate) fn freepath(args: &FreepathArgs) -> CliResult<()> {
    match (args.omega, args.slope) {
        (Some(_), Some(_)) => {
            Err(CliError::Usage("pass exactly one of --omega and --slope".into()))
        }
        (None, None) => Err(CliError::Usage(
            "pass --omega (disc model) or --slope (segment model)".into(),
        )),
        (Some(omega), None) => {
            match args.engine {
                None | Some(EngineChoice::Disc) => {}
                Some(_) => {
                    return Err(CliError::Usage(
                        "--omega rays use the disc engine; farey/brute/both take --slope".into(),
                    ))
                }
            }
            let cfg = usage(LatticeConfig::new(args.ell, args.eps, Geometry::Disc))?;
            let sample = usage(exit_time_disc(&cfg, omega, FREEPATH_HORIZON))?;
            println!("{}", output::path_sample_json(&sample));
            Ok(())
        }
        (None, Some(slope)) => {
            let cfg = usage(LatticeConfig::new(args.ell, args.eps, Geometry::VerticalSegment))?;
            let horizon_cols = (FREEPATH_HORIZON * cfg.order() as f64).floor() as u64;
            match args.engine.unwrap_or(EngineChoice::Farey) {
                EngineChoice::Disc => Err(CliError::Usage(
                    "the disc engine takes --omega, not --slope".into(),
                )),
                EngineChoice::Farey => {
                    let sample = usage(horizontal_free_path_farey(&cfg, slope, FREEPATH_HORIZON))?;
                    println!("{}", output::path_sample_json(&sample));
                    Ok(())
                }
                EngineChoice::Brute => {
                    let sample = usage(horizontal_free_path_brute(&cfg, slope, horizon_cols))?;
                    println!("{}", output::path_sample_json(&sample));
                    Ok(())
                }
                EngineChoice::Both => {
                    let fast = usage(horizontal_free_path_farey(&cfg, slope, FREEPATH_HORIZON))?;
                    let scan = usage(horizontal_free_path_brute(&cfg, slope, horizon_cols))?;
                    let matched = fast == scan;
                    let line = serde_json::json!({
                        "farey": sample_value(&fast),
                        "brute": sample_value(&scan),
                        "match": matched,
                    });
                    println!("{line}");
                    if matched {
                        Ok(())
                    } else {
                        Err(CliError::Internal(format!(
                            "engines disagree at slope {slope}: farey {} vs brute {}",
                            output::path_sample_json(&fast),
                            output::path_sample_json(&scan),
                        )))
                    }
                }
            }
        }
    }
}

pub(crate) fn sweep(args: &SweepArgs) -> CliResult<()> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if args.eps.is_empty() {
        return Err(CliError::Usage("--eps needs at least one radius".into()));
    }
    let grid = build_grid(&args.grid)?;
    let multi = args.eps.len() > 1;
    let mut summaries = Vec::with_capacity(args.eps.len());
    for &eps in &args.eps {
        let cfg = usage(LatticeConfig::new(args.ell, eps, Geometry::Disc))?;
        let started = Instant::now();
        let table = internal(with_workers(args.workers, || {
            lorentzgas::freepath::empirical_repartition(&cfg, &grid, args.samples, args.seed)
        })?)?;
        let runtime_seconds = started.elapsed().as_secs_f64();
        let csv_path = if multi { tagged_path(&args.out, eps) } else { args.out.clone() };
        write_file(output::write_distribution_csv(&csv_path, &table), &csv_path)?;
        let summary = RunSummary {
            ell: args.ell,
            epsilon: eps,
            n_samples: args.samples,
            seed: args.seed,
            sup_error: table.sup_error(),
            runtime_seconds,
            table: None,
        };
        let sidecar = sidecar_path(&csv_path);
        write_file(output::write_json(&sidecar, &summary), &sidecar)?;
        println!("wrote {} (sup_error {:.6})", csv_path.display(), summary.sup_error);
        summaries.push(summary);
    }
    let summary = args.json.clone().unwrap_or_else(|| summary_path(&args.out));
    write_file(output::write_json(&summary, &summaries), &summary)?;
    println!("wrote {}", summary.display());
    Ok(())
}

pub(crate) fn billiard(args: &BilliardArgs) -> CliResult<()> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let grid = build_grid(&args.grid)?;
    let (shape, ell, label) = match args.table {
        TableChoice::Hex => (TableShape::Hexagon, 3, "hex"),
        TableChoice::Square => (TableShape::Square, 2, "square"),
    };
    // Validate the table geometry up front so a bad ε exits as a usage
    // error; failures after this point are internal cross-check trips.
    usage(BilliardTable::new(shape, args.eps))?;
    let sector = (0.0, TAU);
    let started = Instant::now();
    let table = internal(with_workers(args.workers, || match args.table {
        TableChoice::Hex => {
            billiards::empirical_hex_repartition(args.eps, sector, &grid, args.samples, args.seed)
        }
        TableChoice::Square => billiards::empirical_square_repartition(
            args.eps,
            sector,
            &grid,
            args.samples,
            args.seed,
        ),
    })?)?;
    let runtime_seconds = started.elapsed().as_secs_f64();
    write_file(output::write_distribution_csv(&args.out, &table), &args.out)?;
    let summary = RunSummary {
        ell,
        epsilon: args.eps,
        n_samples: args.samples,
        seed: args.seed,
        sup_error: table.sup_error(),
        runtime_seconds,
        table: Some(label.to_string()),
    };
    let sidecar = args.json.clone().unwrap_or_else(|| sidecar_path(&args.out));
    write_file(output::write_json(&sidecar, &summary), &sidecar)?;
    println!("wrote {} (sup_error {:.6})", args.out.display(), summary.sup_error);
    if let Some(svg_path) = &args.svg {
        let title = format!("{label} pockets: empirical survival vs limit");
        write_file(output::write_survival_plot_svg(svg_path, &table, &title), svg_path)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}
