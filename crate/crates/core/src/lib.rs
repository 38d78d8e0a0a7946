//! Free path statistics of a planar Lorentz gas whose scatterers are placed
//! on the congruence-constrained lattice `{(m, n) ∈ ℤ²: m ≢ n (mod ℓ)}`.
//!
//! The crate has three layers:
//!
//! * analytic: [`special`] (dilogarithm), [`limitdist`] (the limiting
//!   repartition function `G_ℓ` of the normalized free path length, its
//!   density, and the auxiliary curves it is assembled from), and [`arith`]
//!   (totient/Möbius machinery with the averaged sums the lattice counts
//!   rely on);
//! * combinatorial: [`farey`] (Farey fractions, mediant chains toward
//!   congruence sinks, and the intermediate sums that connect lattice
//!   geometry to the analytic curves);
//! * dynamical: [`freepath`] (exact first-exit engines for the segment and
//!   disc scatterer models plus Monte Carlo survival tables) and
//!   [`billiards`] (hexagonal/square tables with corner pockets and their
//!   unfoldings onto scatterer lattices).
//!
//! [`quad`], [`sampling`] and [`output`] are small shared helpers
//! (adaptive quadrature, deterministic direction sampling, CSV/JSON/SVG
//! writers).

pub mod arith;
pub mod billiards;
pub mod farey;
pub mod freepath;
pub mod limitdist;
pub mod output;
pub mod quad;
pub mod sampling;
pub mod special;

pub use arith::{EquidistributionCheck, Sieve, SummandFunction, TotientSumCheck};
pub use billiards::{BilliardTable, TableShape, UnfoldingMap};
pub use farey::{FareyPair, FareySequence, MediantChain, ReducedFraction, SinkExit, SumCheck};
pub use freepath::{DistributionTable, Geometry, LatticeConfig, PathOutcome, PathSample};
pub use limitdist::{CongruenceModulus, LimitCurve};
pub use output::{DistributionRow, RunSummary};
pub use special::AccuracyContract;

/// Errors shared across the crate's fallible operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside an operation's documented domain.
    #[error("domain violation: {0}")]
    Domain(String),
    /// `mod_inverse` was asked for an inverse that does not exist.
    #[error("{value} has no inverse modulo {modulus} (gcd != 1)")]
    NoInverse { value: i64, modulus: u64 },
    /// `next_in_sequence` was called on a pair whose right member is 1/1.
    #[error("1/1 ends the sequence; no successor exists")]
    EndOfSequence,
    /// A query slope coincides exactly with a scattering band boundary, so
    /// the band index is ambiguous at working precision.
    #[error("slope lies exactly on a band boundary")]
    AtBoundary,
    /// A chain walk left the tracked path-length horizon without exiting;
    /// the path counts as escaped at every tracked length.
    #[error("the chain exceeds every tracked path length")]
    BeyondHorizon,
    /// Reading or writing an artifact file failed.
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    /// JSON (de)serialization failed.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
