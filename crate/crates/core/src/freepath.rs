//! Free path length in the congruence-constrained lattice: the set of
//! integer points (m,n) with m ≢ n (mod ℓ) carries a scatterer each —
//! a vertical segment of half-length ε for the horizontal model, or a
//! disc of radius ε for the full geometric model — and a ray from the
//! origin travels until it first touches one.
//!
//! Three engines compute the same quantity at different cost:
//! a literal column-by-column brute scan (the oracle), a Farey-structural
//! fast path that classifies the slope inside its bracket cell in
//! O(log Q) (the workhorse for million-sample sweeps), and a geometric
//! disc march for arbitrary directions. The empirical repartition tables
//! built on top are deterministic in the seed regardless of worker count.

use crate::farey;
use crate::limitdist::CongruenceModulus;
use crate::sampling;
use crate::{Error, Result};

/// Scatterer shape at each admissible lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// {0} × [−ε, ε] translated to the point; the horizontal model.
    VerticalSegment,
    /// A disc of radius ε; the full model, valid for every direction.
    Disc,
}

/// The scatterer configuration: modulus ℓ, size ε, shape, and the derived
/// Farey order Q = ⌊1/ε⌋.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    ell: u64,
    epsilon: f64,
    geometry: Geometry,
    order: u64,
}

impl LatticeConfig {
    pub fn new(ell: u64, epsilon: f64, geometry: Geometry) -> Result<Self> {
        if ell < 2 {
            return Err(Error::Domain(format!("modulus must be ≥ 2, got {ell}")));
        }
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::Domain(format!("ε must lie in (0, 1/2), got {epsilon}")));
        }
        let order = derive_order(epsilon);
        debug_assert!(order >= 2);
        Ok(Self { ell, epsilon, geometry, order })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Q = ⌊1/ε⌋.
    pub fn order(&self) -> u64 {
        self.order
    }
}

/// ⌊1/ε⌋ with a guard for quotients that miss an integer by float noise
/// (1/0.001 evaluates below 1000): within 1e−6 of an integer, take it.
fn derive_order(epsilon: f64) -> u64 {
    let r = 1.0 / epsilon;
    if (r - r.round()).abs() < 1e-6 {
        r.round() as u64
    } else {
        r.floor() as u64
    }
}

/// What happened to one ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathOutcome {
    /// First scatterer touched: the path value (columns for the horizontal
    /// model, euclidean length for discs) and the lattice point hit.
    Finite { value: f64, hit: (i64, i64) },
    /// No scatterer within the horizon.
    Escaped,
}

/// One sampled direction with its outcome. `direction` is the slope for
/// the horizontal model and the angle in radians for the disc model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub direction: f64,
    pub outcome: PathOutcome,
}

impl PathSample {
    /// The path value, with escape mapped to +∞ (it exceeds every λ).
    pub fn value_or_infinity(&self) -> f64 {
        match self.outcome {
            PathOutcome::Finite { value, .. } => value,
            PathOutcome::Escaped => f64::INFINITY,
        }
    }
}

fn check_segment(cfg: &LatticeConfig) -> Result<()> {
    if cfg.geometry != Geometry::VerticalSegment {
        return Err(Error::Domain("this engine requires the vertical-segment geometry".into()));
    }
    Ok(())
}

/// The literal oracle: the smallest column c ∈ [1, q_max] whose scatterer
/// interval the ray y = slope·x crosses, i.e. |c·slope − n| ≤ ε for some
/// integer n with n ≢ c (mod ℓ).
pub fn horizontal_free_path_brute(
    cfg: &LatticeConfig,
    slope: f64,
    q_max: u64,
) -> Result<PathSample> {
    check_segment(cfg)?;
    if !(0.0..=1.0).contains(&slope) {
        return Err(Error::Domain(format!("slope {slope} outside [0,1]")));
    }
    if q_max < 1 {
        return Err(Error::Domain("q_max must be ≥ 1".into()));
    }
    Ok(PathSample {
        direction: slope,
        outcome: brute_scan(cfg.ell, cfg.epsilon, slope, q_max),
    })
}

/// Core scan shared by the public oracle and the fast path's fallbacks.
/// ε < 1/2 means at most the nearest integer can be within range.
fn brute_scan(ell: u64, eps: f64, slope: f64, q_max: u64) -> PathOutcome {
    for c in 1..=q_max {
        let y = slope * c as f64;
        let n = y.round();
        if (y - n).abs() <= eps {
            let ni = n as i64;
            if (c as i64 - ni).rem_euclid(ell as i64) != 0 {
                return PathOutcome::Finite { value: c as f64, hit: (c as i64, ni) };
            }
        }
    }
    PathOutcome::Escaped
}

/// The Farey-structural engine: brackets the slope between consecutive
/// fractions of order Q and reads the exit column off the cell structure —
/// the two candidate columns q, q′ when neither fraction is a sink, or the
/// mediant-chain band when one is. Exits beyond Λ_max·Q columns report as
/// escaped, matching a brute scan capped at ⌊Λ_max·Q⌋.
///
/// All predicates are evaluated with the same floating expressions as the
/// brute scan, the predicted hit is re-validated against them, and any
/// inconsistency falls back to the bounded scan — so the two engines agree
/// exactly. A slope sitting exactly on a band boundary (tangent hit)
/// propagates `AtBoundary`; callers resolve it with the oracle.
pub fn horizontal_free_path_farey(
    cfg: &LatticeConfig,
    slope: f64,
    lambda_max: f64,
) -> Result<PathSample> {
    check_segment(cfg)?;
    if !(0.0..1.0).contains(&slope) {
        return Err(Error::Domain(format!("slope {slope} outside [0,1)")));
    }
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::Domain(format!("invalid horizon {lambda_max}")));
    }
    let horizon_cols = (lambda_max * cfg.order as f64).floor() as u64;
    if horizon_cols == 0 {
        return Ok(PathSample { direction: slope, outcome: PathOutcome::Escaped });
    }
    let fallback = |sample_slope: f64| PathSample {
        direction: sample_slope,
        outcome: brute_scan(cfg.ell, cfg.epsilon, sample_slope, horizon_cols),
    };
    let eps = cfg.epsilon;
    let pair = farey::bracket(slope, cfg.order)?;
    let (l, r) = (pair.left(), pair.right());
    let in_class_l = l.in_congruence_class(cfg.ell);
    let in_class_r = r.in_congruence_class(cfg.ell);

    let (q, a) = (l.denominator(), l.numerator());
    let (qp, ap) = (r.denominator(), r.numerator());
    let d_left = slope * q as f64 - a as f64;
    let d_right = ap as f64 - slope * qp as f64;

    let exit = if in_class_l && in_class_r {
        // Consecutive sinks cannot exist; if float noise suggests they do,
        // trust the oracle.
        debug_assert!(false, "consecutive sinks at {l} {r}");
        return Ok(fallback(slope));
    } else if in_class_l {
        if d_left == 0.0 {
            // The ray runs along the sink line itself; every chain band
            // degenerates, so scan (measure-zero direction).
            return Ok(fallback(slope));
        }
        match farey::sink_chain_value(&pair, slope, eps, lambda_max) {
            Ok(exit) => (exit.q_exit, exit.a_exit),
            Err(Error::BeyondHorizon) => {
                return Ok(PathSample { direction: slope, outcome: PathOutcome::Escaped })
            }
            Err(e) => return Err(e),
        }
    } else if in_class_r {
        match farey::sink_chain_value_right(&pair, slope, eps, lambda_max) {
            Ok(exit) => (exit.q_exit, exit.a_exit),
            Err(Error::BeyondHorizon) => {
                return Ok(PathSample { direction: slope, outcome: PathOutcome::Escaped })
            }
            Err(e) => return Err(e),
        }
    } else {
        // Neither fraction is a sink: the only reachable scatterers sit on
        // the two bracket lines, at columns q and q′. The cell inequality
        // ε(q+q′) > 1 guarantees at least one is within range.
        let hit_l = d_left.abs() <= eps;
        let hit_r = d_right <= eps;
        match (hit_l, hit_r) {
            (true, true) => {
                if q <= qp {
                    (q, a)
                } else {
                    (qp, ap)
                }
            }
            (true, false) => (q, a),
            (false, true) => (qp, ap),
            (false, false) => return Ok(fallback(slope)),
        }
    };

    let (c, n) = exit;
    if c > horizon_cols {
        return Ok(PathSample { direction: slope, outcome: PathOutcome::Escaped });
    }
    // Validate the prediction with the oracle's own predicate before
    // trusting it.
    let y = slope * c as f64;
    let consistent = y.round() == n as f64
        && (y - n as f64).abs() <= eps
        && (c as i64 - n as i64).rem_euclid(cfg.ell as i64) != 0;
    if consistent {
        Ok(PathSample {
            direction: slope,
            outcome: PathOutcome::Finite { value: c as f64, hit: (c as i64, n as i64) },
        })
    } else {
        Ok(fallback(slope))
    }
}

/// First intersection of the ray in direction ω with any scatterer disc,
/// by marching lattice columns after folding the direction into the
/// half-quadrant dx ≥ |dy| with the two exact lattice symmetries
/// (coordinate swap and point reflection — both preserve m ≢ n mod ℓ;
/// x-reflection alone does not and is never used).
pub fn exit_time_disc(cfg: &LatticeConfig, omega: f64, lambda_max: f64) -> Result<PathSample> {
    if cfg.geometry != Geometry::Disc {
        return Err(Error::Domain("this engine requires the disc geometry".into()));
    }
    if !omega.is_finite() || !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::Domain(format!("invalid direction {omega} or horizon {lambda_max}")));
    }
    let cap = lambda_max / cfg.epsilon;
    let outcome = march_discs(cfg.ell, cfg.epsilon, omega.cos(), omega.sin(), cap);
    Ok(PathSample { direction: omega, outcome })
}

fn march_discs(ell: u64, eps: f64, dir_x: f64, dir_y: f64, cap: f64) -> PathOutcome {
    let (mut dx, mut dy) = (dir_x, dir_y);
    let swapped = dy.abs() > dx.abs();
    if swapped {
        std::mem::swap(&mut dx, &mut dy);
    }
    let negated = dx < 0.0;
    if negated {
        dx = -dx;
        dy = -dy;
    }
    let s = dy / dx;
    let ell_i = ell as i64;
    let m_stop = ((cap + 2.0) / dx).ceil() as i64;
    for m in 1..=m_stop {
        let y = s * m as f64;
        let lo = y.floor();
        let hi = y.ceil();
        let mut n = lo;
        loop {
            let mf = m as f64;
            let d = mf * dy - n * dx;
            if d.abs() <= eps {
                let ni = n as i64;
                if (m - ni).rem_euclid(ell_i) != 0 {
                    let proj = mf * dx + n * dy;
                    if proj > 0.0 {
                        let tau = proj - (eps * eps - d * d).sqrt();
                        if tau > cap {
                            return PathOutcome::Escaped;
                        }
                        let (mut m0, mut n0) = (m, ni);
                        if negated {
                            m0 = -m0;
                            n0 = -n0;
                        }
                        if swapped {
                            std::mem::swap(&mut m0, &mut n0);
                        }
                        return PathOutcome::Finite { value: tau, hit: (m0, n0) };
                    }
                }
            }
            if n == hi {
                break;
            }
            n = hi;
        }
    }
    PathOutcome::Escaped
}

/// One row per grid point of an empirical survival experiment next to its
/// theoretical curve.
#[derive(Debug, Clone)]
pub struct DistributionTable {
    pub grid: Vec<f64>,
    pub empirical: Vec<f64>,
    pub theory: Vec<f64>,
    pub abs_err: Vec<f64>,
    pub n_samples: u64,
    pub seed: u64,
}

impl DistributionTable {
    pub(crate) fn from_parts(
        grid: &[f64],
        survival: &[u64],
        n: u64,
        seed: u64,
        scale: f64,
        theory: impl Fn(f64) -> f64,
    ) -> Self {
        let empirical: Vec<f64> =
            survival.iter().map(|&c| scale * c as f64 / n as f64).collect();
        let theory: Vec<f64> = grid.iter().map(|&l| theory(l)).collect();
        let abs_err: Vec<f64> =
            empirical.iter().zip(&theory).map(|(e, t)| (e - t).abs()).collect();
        debug_assert!(empirical.windows(2).all(|w| w[1] <= w[0]));
        Self { grid: grid.to_vec(), empirical, theory, abs_err, n_samples: n, seed }
    }

    /// Largest pointwise deviation from the theory column.
    pub fn sup_error(&self) -> f64 {
        self.abs_err.iter().fold(0.0, |m, &e| m.max(e))
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Default march horizon: four times the largest λ asked about.
fn default_horizon(grid: &[f64]) -> f64 {
    4.0 * grid.last().copied().unwrap_or(1.0)
}

/// Largest double below 1, used to keep tan(ω) inside the fast path's
/// half-open slope domain.
fn max_slope() -> f64 {
    f64::from_bits(1.0f64.to_bits() - 1)
}

/// Sector experiment for the horizontal model: the measure of angles
/// ω ∈ arctan I whose exit column exceeds λQ, per grid λ, next to the
/// predicted c_I·G_ℓ(λ) with c_I = |arctan I|. Stratified-deterministic
/// in the seed.
pub fn empirical_sector_repartition(
    cfg: &LatticeConfig,
    interval: (f64, f64),
    grid: &[f64],
    n: u64,
    seed: u64,
) -> Result<DistributionTable> {
    check_segment(cfg)?;
    check_grid(grid)?;
    let (lo, hi) = interval;
    if !(0.0..=1.0).contains(&lo) || !(lo < hi && hi <= 1.0) {
        return Err(Error::Domain(format!("invalid slope interval [{lo}, {hi}]")));
    }
    if n == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let lambda_max = default_horizon(grid);
    let horizon_cols = (lambda_max * cfg.order as f64).floor() as u64;
    let order_f = cfg.order as f64;
    let value = |omega: f64| {
        let slope = omega.tan().clamp(0.0, max_slope());
        let sample = match horizontal_free_path_farey(cfg, slope, lambda_max) {
            Ok(s) => s,
            // Tangent band boundary: resolve with the oracle.
            Err(Error::AtBoundary) => PathSample {
                direction: slope,
                outcome: brute_scan(cfg.ell, cfg.epsilon, slope, horizon_cols),
            },
            Err(e) => unreachable!("validated inputs cannot fail: {e}"),
        };
        sample.value_or_infinity() / order_f
    };
    let counts = sampling::sweep_counts(lo.atan(), hi.atan(), n, seed, grid, value);
    let survival = sampling::survival_from_counts(&counts);
    let c_i = hi.atan() - lo.atan();
    let modulus = CongruenceModulus::new(cfg.ell)?;
    Ok(DistributionTable::from_parts(grid, &survival, n, seed, c_i, |l| {
        c_i * modulus.repartition(l).expect("positive grid")
    }))
}

/// Full-circle experiment for the disc model: the fraction of directions
/// ω ∈ [0, 2π) with ε·τ > λ, per grid λ, next to G_ℓ(λ). Stratified-
/// deterministic in the seed.
pub fn empirical_repartition(
    cfg: &LatticeConfig,
    grid: &[f64],
    n: u64,
    seed: u64,
) -> Result<DistributionTable> {
    if cfg.geometry != Geometry::Disc {
        return Err(Error::Domain("the full-circle experiment uses the disc geometry".into()));
    }
    check_grid(grid)?;
    if n == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let lambda_max = default_horizon(grid);
    let cap = lambda_max / cfg.epsilon;
    let (ell, eps) = (cfg.ell, cfg.epsilon);
    let value = |omega: f64| {
        let outcome = march_discs(ell, eps, omega.cos(), omega.sin(), cap);
        match outcome {
            PathOutcome::Finite { value, .. } => eps * value,
            PathOutcome::Escaped => f64::INFINITY,
        }
    };
    let counts = sampling::sweep_counts(0.0, std::f64::consts::TAU, n, seed, grid, value);
    let survival = sampling::survival_from_counts(&counts);
    let modulus = CongruenceModulus::new(cfg.ell)?;
    Ok(DistributionTable::from_parts(grid, &survival, n, seed, 1.0, |l| {
        modulus.repartition(l).expect("positive grid")
    }))
}
