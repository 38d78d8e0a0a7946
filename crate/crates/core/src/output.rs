//! File artifacts: CSV tables that round-trip exactly, JSON run
//! summaries, and self-contained SVG survival plots.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! parsing an emitted CSV reproduces the in-memory values bit for bit.

use crate::freepath::{DistributionTable, PathOutcome, PathSample};
use crate::{Error, Result};

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Sidecar summary written next to every experiment CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    /// Congruence modulus of the theory column (3 for the hexagon table,
    /// 2 for the square).
    pub ell: u64,
    pub epsilon: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub sup_error: f64,
    pub runtime_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<String>,
}

/// One parsed row of a survival CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionRow {
    pub lambda: f64,
    pub empirical: f64,
    pub theory: f64,
    pub abs_err: f64,
}

pub const DISTRIBUTION_HEADER: &str = "lambda,empirical,theory,abs_err";

/// Render a survival table as CSV.
pub fn distribution_csv(table: &DistributionTable) -> String {
    let mut out = String::with_capacity(32 * table.grid.len() + 32);
    out.push_str(DISTRIBUTION_HEADER);
    out.push('\n');
    for i in 0..table.grid.len() {
        writeln!(
            out,
            "{},{},{},{}",
            table.grid[i], table.empirical[i], table.theory[i], table.abs_err[i]
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn write_distribution_csv(path: impl AsRef<Path>, table: &DistributionTable) -> Result<()> {
    std::fs::write(path, distribution_csv(table))?;
    Ok(())
}

/// Parse CSV text produced by [`distribution_csv`].
pub fn parse_distribution_csv(text: &str) -> Result<Vec<DistributionRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == DISTRIBUTION_HEADER => {}
        other => {
            return Err(Error::Domain(format!("unexpected CSV header {other:?}")));
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Domain(format!("row {}: expected 4 fields", i + 2)));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Domain(format!("row {}: {e}", i + 2)))
        };
        rows.push(DistributionRow {
            lambda: parse(fields[0])?,
            empirical: parse(fields[1])?,
            theory: parse(fields[2])?,
            abs_err: parse(fields[3])?,
        });
    }
    Ok(rows)
}

pub fn read_distribution_csv(path: impl AsRef<Path>) -> Result<Vec<DistributionRow>> {
    parse_distribution_csv(&std::fs::read_to_string(path)?)
}

pub const LIMIT_HEADER: &str = "lambda,G,g";

/// Render (λ, G, g) rows as CSV.
pub fn limit_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::with_capacity(32 * rows.len() + 16);
    out.push_str(LIMIT_HEADER);
    out.push('\n');
    for (l, big_g, dens) in rows {
        writeln!(out, "{l},{big_g},{dens}").expect("writing to a String cannot fail");
    }
    out
}

pub fn write_limit_csv(path: impl AsRef<Path>, rows: &[(f64, f64, f64)]) -> Result<()> {
    std::fs::write(path, limit_csv(rows))?;
    Ok(())
}

/// Serialize any summary value as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Single-line JSON for one path computation: a finite outcome carries
/// its hit point, an escape prints as the string "inf" with no hit.
pub fn path_sample_json(sample: &PathSample) -> String {
    let value = match sample.outcome {
        PathOutcome::Finite { value, hit } => serde_json::json!({
            "outcome": value,
            "hit": [hit.0, hit.1],
        }),
        PathOutcome::Escaped => serde_json::json!({
            "outcome": "inf",
            "hit": null,
        }),
    };
    value.to_string()
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 45.0;

/// Self-contained 800×500 SVG overlay: the theory curve as a polyline,
/// the empirical survival as a step curve.
pub fn survival_plot_svg(table: &DistributionTable, title: &str) -> String {
    let x_max = table.grid.last().copied().unwrap_or(1.0);
    let y_max = table
        .empirical
        .iter()
        .chain(&table.theory)
        .fold(1e-9f64, |m, &v| m.max(v))
        * 1.05;
    let px = |l: f64| MARGIN_LEFT + l / x_max * (SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT);
    let py = |v: f64| SVG_HEIGHT - MARGIN_BOTTOM - v / y_max * (SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);

    let mut theory_pts = String::new();
    for (l, v) in table.grid.iter().zip(&table.theory) {
        write!(theory_pts, "{:.2},{:.2} ", px(*l), py(*v)).unwrap();
    }
    let mut step = String::new();
    for (i, (l, v)) in table.grid.iter().zip(&table.empirical).enumerate() {
        if i == 0 {
            write!(step, "M {:.2} {:.2}", px(*l), py(*v)).unwrap();
        } else {
            write!(step, " H {:.2} V {:.2}", px(*l), py(*v)).unwrap();
        }
    }

    let mut axes = String::new();
    for i in 0..=5 {
        let l = x_max * i as f64 / 5.0;
        let x = px(l);
        write!(
            axes,
            r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#999" stroke-width="0.5"/><text x="{x:.2}" y="{ty:.2}" font-size="12" text-anchor="middle" fill="#333">{l:.2}</text>"##,
            y0 = py(0.0),
            y1 = py(0.0) + 5.0,
            ty = py(0.0) + 20.0,
        )
        .unwrap();
        let v = y_max / 1.05 * i as f64 / 5.0;
        let y = py(v);
        write!(
            axes,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#ddd" stroke-width="0.5"/><text x="{tx:.2}" y="{typ:.2}" font-size="12" text-anchor="end" fill="#333">{v:.2}</text>"##,
            x0 = px(0.0),
            x1 = px(x_max),
            tx = px(0.0) - 6.0,
            typ = y + 4.0,
        )
        .unwrap();
    }

    format!(
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">
<rect width="{w}" height="{h}" fill="white"/>
<text x="{tx:.2}" y="20" font-size="15" text-anchor="middle" fill="#111">{title}</text>
{axes}
<polyline points="{theory_pts}" fill="none" stroke="#1f77b4" stroke-width="1.8"/>
<path d="{step}" fill="none" stroke="#d62728" stroke-width="1.2"/>
<line x1="{lx0}" y1="12" x2="{lx1}" y2="12" stroke="#1f77b4" stroke-width="1.8"/>
<text x="{lx2}" y="16" font-size="12" fill="#333">theory</text>
<line x1="{lx3}" y1="12" x2="{lx4}" y2="12" stroke="#d62728" stroke-width="1.2"/>
<text x="{lx5}" y="16" font-size="12" fill="#333">empirical</text>
</svg>
"##,
        w = SVG_WIDTH,
        h = SVG_HEIGHT,
        tx = (MARGIN_LEFT + SVG_WIDTH - MARGIN_RIGHT) / 2.0,
        lx0 = SVG_WIDTH - 230.0,
        lx1 = SVG_WIDTH - 205.0,
        lx2 = SVG_WIDTH - 200.0,
        lx3 = SVG_WIDTH - 130.0,
        lx4 = SVG_WIDTH - 105.0,
        lx5 = SVG_WIDTH - 100.0,
    )
}

pub fn write_survival_plot_svg(
    path: impl AsRef<Path>,
    table: &DistributionTable,
    title: &str,
) -> Result<()> {
    std::fs::write(path, survival_plot_svg(table, title))?;
    Ok(())
}
