//! `lorentzgas` — free path statistics among lattice scatterers.
//!
//! Subcommands: `dist` tabulates the limiting survival curve and its
//! density, `freepath` fires a single ray with a chosen engine, `sweep`
//! runs Monte Carlo surveys of the scatterer lattice over one or more
//! radii, `billiard` does the same for polygonal tables with corner
//! pockets, and `verify` runs the self-check suites.
//!
//! Every flag can also be set through an environment variable with the
//! `LORENTZGAS_` prefix (useful in CI). Exit codes: 0 on success, 2 on a
//! usage or configuration error, 3 on an internal consistency failure
//! (engine disagreement or a failed verification check).

mod commands;
mod grid;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grid::GridSpec;
use std::path::PathBuf;
use std::process::ExitCode;

/// Default RNG seed — a fixed constant, so runs are reproducible unless a
/// seed is chosen explicitly.
pub(crate) const DEFAULT_SEED: u64 = 1729;

/// Failures split by exit discipline: usage/config errors exit with 2,
/// internal consistency failures with 3.
pub(crate) enum CliError {
    Usage(String),
    Internal(String),
}

pub(crate) type CliResult<T> = Result<T, CliError>;

/// Map a library error onto the usage/config exit path.
pub(crate) fn usage<T>(r: lorentzgas::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}

/// Map a library error onto the internal-consistency exit path.
pub(crate) fn internal<T>(r: lorentzgas::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Internal(e.to_string()))
}

/// Run `f` on a dedicated pool of `workers` threads (0 = library default).
/// Sweeps aggregate deterministically, so the worker count never changes
/// any output byte.
pub(crate) fn with_workers<T: Send>(
    workers: usize,
    f: impl FnOnce() -> T + Send,
) -> CliResult<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Parser)]
#[command(
    name = "lorentzgas",
    version,
    about = "Free path statistics among lattice scatterers",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the limiting survival curve G_ℓ and its density g_ℓ
    Dist(DistArgs),
    /// Compute a single free path with a chosen engine
    Freepath(FreepathArgs),
    /// Monte Carlo survival sweep over one or more scatterer radii
    Sweep(SweepArgs),
    /// Monte Carlo survival sweep for a billiard table with corner pockets
    Billiard(BilliardArgs),
    /// Run a self-check suite
    Verify(VerifyArgs),
}

/// Which engine computes a single free path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum EngineChoice {
    /// Structural fast path over slope brackets (--slope input).
    Farey,
    /// Column-by-column oracle scan (--slope input).
    Brute,
    /// Straight-ray march through disc scatterers (--omega input).
    Disc,
    /// Run farey and brute and compare (--slope input).
    Both,
}

/// Billiard table shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum TableChoice {
    /// Regular hexagon with pockets at the six corners.
    Hex,
    /// Unit square with pockets at the four corners.
    Square,
}

/// Verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Suite {
    /// Closed-form identities of the limiting curves.
    Identities,
    /// Fraction-bracketing structure and engine equivalence.
    Farey,
    /// Averaged totient residuals and enumerated sums vs their limits.
    Sums,
    /// Fold/unfold agreement and billiard survival curves.
    Billiards,
    /// Everything above.
    All,
}

#[derive(Args)]
pub(crate) struct DistArgs {
    /// Congruence modulus ℓ of the scatterer lattice (≥ 2)
    #[arg(long, default_value_t = 2, env = "LORENTZGAS_ELL")]
    pub ell: u64,
    /// λ-grid as min:max:count[:log]
    #[arg(long, default_value = "0.01:5:200", env = "LORENTZGAS_GRID")]
    pub grid: GridSpec,
    /// Write the CSV here instead of stdout (a JSON sidecar lands next to it)
    #[arg(long, env = "LORENTZGAS_OUT")]
    pub out: Option<PathBuf>,
    /// Sidecar JSON path (default: CSV path with a .json extension)
    #[arg(long, env = "LORENTZGAS_JSON")]
    pub json: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct FreepathArgs {
    /// Congruence modulus ℓ of the scatterer lattice (≥ 2)
    #[arg(long, default_value_t = 2, env = "LORENTZGAS_ELL")]
    pub ell: u64,
    /// Scatterer radius ε ∈ (0, 1/2)
    #[arg(long, default_value_t = 1e-3, env = "LORENTZGAS_EPS")]
    pub eps: f64,
    /// Direction angle in radians — selects the disc-scatterer model
    #[arg(long, env = "LORENTZGAS_OMEGA")]
    pub omega: Option<f64>,
    /// Ray slope in [0, 1) — selects the segment-scatterer model
    #[arg(long, env = "LORENTZGAS_SLOPE")]
    pub slope: Option<f64>,
    /// Engine (default: disc for --omega, farey for --slope)
    #[arg(long, value_enum, env = "LORENTZGAS_ENGINE")]
    pub engine: Option<EngineChoice>,
}

#[derive(Args)]
pub(crate) struct SweepArgs {
    /// Congruence modulus ℓ of the scatterer lattice (≥ 2)
    #[arg(long, default_value_t = 2, env = "LORENTZGAS_ELL")]
    pub ell: u64,
    /// Scatterer radii, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0.001", env = "LORENTZGAS_EPS")]
    pub eps: Vec<f64>,
    /// λ-grid as min:max:count[:log]
    #[arg(long, default_value = "0.01:5:200", env = "LORENTZGAS_GRID")]
    pub grid: GridSpec,
    /// Directions per sweep
    #[arg(long, default_value_t = 100_000, env = "LORENTZGAS_SAMPLES")]
    pub samples: u64,
    /// RNG seed
    #[arg(long, default_value_t = DEFAULT_SEED, env = "LORENTZGAS_SEED")]
    pub seed: u64,
    /// Worker threads (0 = all cores); never affects output bytes
    #[arg(long, default_value_t = 0, env = "LORENTZGAS_WORKERS")]
    pub workers: usize,
    /// CSV path; several radii tag it as stem_eps<value>.csv
    #[arg(long, default_value = "sweep.csv", env = "LORENTZGAS_OUT")]
    pub out: PathBuf,
    /// Summary JSON path (default: CSV stem + _summary.json)
    #[arg(long, env = "LORENTZGAS_JSON")]
    pub json: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct BilliardArgs {
    /// Table shape
    #[arg(long, value_enum, default_value_t = TableChoice::Hex, env = "LORENTZGAS_TABLE")]
    pub table: TableChoice,
    /// Pocket radius ε
    #[arg(long, default_value_t = 1e-3, env = "LORENTZGAS_EPS")]
    pub eps: f64,
    /// λ-grid as min:max:count[:log]
    #[arg(long, default_value = "0.01:5:200", env = "LORENTZGAS_GRID")]
    pub grid: GridSpec,
    /// Directions per sweep
    #[arg(long, default_value_t = 100_000, env = "LORENTZGAS_SAMPLES")]
    pub samples: u64,
    /// RNG seed
    #[arg(long, default_value_t = DEFAULT_SEED, env = "LORENTZGAS_SEED")]
    pub seed: u64,
    /// Worker threads (0 = all cores); never affects output bytes
    #[arg(long, default_value_t = 0, env = "LORENTZGAS_WORKERS")]
    pub workers: usize,
    /// CSV path
    #[arg(long, default_value = "billiard.csv", env = "LORENTZGAS_OUT")]
    pub out: PathBuf,
    /// Sidecar JSON path (default: CSV path with a .json extension)
    #[arg(long, env = "LORENTZGAS_JSON")]
    pub json: Option<PathBuf>,
    /// Also write an SVG overlay plot (empirical steps vs theory curve)
    #[arg(long, env = "LORENTZGAS_SVG")]
    pub svg: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct VerifyArgs {
    /// Suite to run
    #[arg(value_enum)]
    pub suite: Suite,
    /// Enumeration order for the sums suite
    #[arg(long = "Q", default_value_t = 2000, env = "LORENTZGAS_Q")]
    pub q: u64,
    /// Directions per billiard survival check
    #[arg(long, default_value_t = 100_000, env = "LORENTZGAS_SAMPLES")]
    pub samples: u64,
    /// RNG seed
    #[arg(long, default_value_t = DEFAULT_SEED, env = "LORENTZGAS_SEED")]
    pub seed: u64,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0, env = "LORENTZGAS_WORKERS")]
    pub workers: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist(args) => commands::dist(&args),
        Command::Freepath(args) => commands::freepath(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Billiard(args) => commands::billiard(&args),
        Command::Verify(args) => verify::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
