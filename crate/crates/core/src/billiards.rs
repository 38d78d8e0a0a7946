//! Polygonal billiards with circular corner pockets, shot from the
//! centroid: a regular hexagon of circumradius 1 and the unit square.
//!
//! Two engines compute the exit time. The reflective engine simulates
//! specular bounces segment by segment while tracking the accumulated
//! unfolding isometry, so a pocket hit can be reported as a lattice
//! point of the unfolded plane. The unfolded engines skip the bounces
//! entirely: reflections of the hexagon tile the plane with pockets on
//! the honeycomb vertices m·(1,0) + n·(1/2, √3/2), m ≢ n (mod 3), and
//! reflections of the square put pockets on all of ℤ² — so the exit
//! time is a straight-line first-disc computation. The two must agree
//! to within rounding, and the empirical tables cross-check them.

use crate::freepath::{DistributionTable, PathOutcome, PathSample};
use crate::limitdist::CongruenceModulus;
use crate::sampling;
use crate::{Error, Result};

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, TAU};

const SQRT_3: f64 = 1.732_050_807_568_877_2;
/// Half the minimum edge length of either table, a hard ceiling for the
/// pocket radius.
const MAX_POCKET_RADIUS: f64 = 0.25;

/// Which polygon the trajectory lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableShape {
    /// Regular hexagon, circumradius 1 (side 1), centered at the origin
    /// with a vertex on the positive x-axis.
    Hexagon,
    /// The unit square [0,1]².
    Square,
}

/// A table with pockets of radius ε centered on every vertex; shots
/// start at the centroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilliardTable {
    shape: TableShape,
    epsilon: f64,
}

impl BilliardTable {
    pub fn new(shape: TableShape, epsilon: f64) -> Result<Self> {
        check_pocket_radius(epsilon)?;
        Ok(Self { shape, epsilon })
    }

    pub fn shape(&self) -> TableShape {
        self.shape
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn centroid(&self) -> (f64, f64) {
        match self.shape {
            TableShape::Hexagon => (0.0, 0.0),
            TableShape::Square => (0.5, 0.5),
        }
    }

    /// Distance from the centroid to the nearest edge.
    pub fn apothem(&self) -> f64 {
        match self.shape {
            TableShape::Hexagon => SQRT_3 / 2.0,
            TableShape::Square => 0.5,
        }
    }
}

fn check_pocket_radius(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < MAX_POCKET_RADIUS) {
        return Err(Error::Domain(format!("pocket radius must lie in (0, 1/4), got {epsilon}")));
    }
    Ok(())
}

/// The isometry between the hexagon's natural frame and horizontal-model
/// coordinates: the shear T(x,y) = (x − y/√3, 2y/√3) sends honeycomb
/// vertices to integer pairs and oblique scatterer segments to vertical
/// ones, and Φ converts slopes between the two frames.
pub struct UnfoldingMap;

impl UnfoldingMap {
    /// T(x, y) = (x − y/√3, 2y/√3); maps the vertex m·(1,0)+n·(1/2,√3/2)
    /// to (m, n).
    pub fn transform(p: (f64, f64)) -> (f64, f64) {
        (p.0 - p.1 / SQRT_3, 2.0 * p.1 / SQRT_3)
    }

    /// T⁻¹(u, v) = (u + v/2, v·√3/2).
    pub fn inverse(p: (f64, f64)) -> (f64, f64) {
        (p.0 + p.1 / 2.0, p.1 * SQRT_3 / 2.0)
    }

    /// Slope map Φ(μ) = μ√3/(2+μ), from [0,1] onto [0, 1/√3].
    pub fn phi(mu: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::Domain(format!("Φ takes slopes in [0,1], got {mu}")));
        }
        Ok(mu * SQRT_3 / (2.0 + mu))
    }

    /// Φ⁻¹(x) = 2x/(√3 − x), from [0, 1/√3] back onto [0,1]. The result is
    /// clamped to 1: at the right endpoint the rounded quotient can land one
    /// ulp above, which would bounce off Φ's domain check on a round trip.
    pub fn phi_inv(x: f64) -> Result<f64> {
        if !(0.0..=1.0 / SQRT_3 + 1e-15).contains(&x) {
            return Err(Error::Domain(format!("Φ⁻¹ takes values in [0, 1/√3], got {x}")));
        }
        Ok((2.0 * x / (SQRT_3 - x)).min(1.0))
    }
}

/// Path length a horizontal-frame exit value q̃ corresponds to in the
/// hexagon frame when the direction there makes angle ω ∈ [0, π/6]:
/// τ̃ = (√3/2)·q̃ / cos(π/6 + ω).
pub fn sine_rule_path(q_tilde: f64, omega: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_6 + 1e-15).contains(&omega) {
        return Err(Error::Domain(format!("angle {omega} outside [0, π/6]")));
    }
    Ok(SQRT_3 / 2.0 * q_tilde / (FRAC_PI_6 + omega).cos())
}

// --- reflective engine ----------------------------------------------------

struct Polygon {
    normals: Vec<(f64, f64)>,
    offsets: Vec<f64>,
    vertices: Vec<(f64, f64)>,
}

fn polygon_for(shape: TableShape) -> Polygon {
    match shape {
        TableShape::Hexagon => {
            let normals = (0..6)
                .map(|i| {
                    let t = FRAC_PI_6 + i as f64 * FRAC_PI_3;
                    (t.cos(), t.sin())
                })
                .collect();
            let vertices = (0..6)
                .map(|i| {
                    let t = i as f64 * FRAC_PI_3;
                    (t.cos(), t.sin())
                })
                .collect();
            Polygon { normals, offsets: vec![SQRT_3 / 2.0; 6], vertices }
        }
        TableShape::Square => Polygon {
            normals: vec![(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)],
            offsets: vec![1.0, 0.0, 1.0, 0.0],
            vertices: vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        },
    }
}

fn dot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

/// Accumulated unfolding isometry: maps the current folded frame into
/// the unfolded plane as p ↦ O·p + w.
struct Unfolder {
    o: [[f64; 2]; 2],
    w: (f64, f64),
}

impl Unfolder {
    fn identity() -> Self {
        Self { o: [[1.0, 0.0], [0.0, 1.0]], w: (0.0, 0.0) }
    }

    fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        (
            self.o[0][0] * p.0 + self.o[0][1] * p.1 + self.w.0,
            self.o[1][0] * p.0 + self.o[1][1] * p.1 + self.w.1,
        )
    }

    /// Compose with the reflection across the plane {x·n = c}: the next
    /// folded segment corresponds to the straight continuation of the
    /// unfolded ray.
    fn reflect(&mut self, n: (f64, f64), c: f64) {
        let on = (
            self.o[0][0] * n.0 + self.o[0][1] * n.1,
            self.o[1][0] * n.0 + self.o[1][1] * n.1,
        );
        for row in 0..2 {
            let r = if row == 0 { on.0 } else { on.1 };
            self.o[row][0] -= 2.0 * r * n.0;
            self.o[row][1] -= 2.0 * r * n.1;
        }
        self.w.0 += 2.0 * c * on.0;
        self.w.1 += 2.0 * c * on.1;
    }
}

/// Round an unfolded pocket center to the lattice label the unfolded
/// engines use: honeycomb indices for the hexagon, integer coordinates
/// for the square.
fn label_unfolded_pocket(shape: TableShape, p: (f64, f64)) -> (i64, i64) {
    let coords = match shape {
        TableShape::Hexagon => UnfoldingMap::transform(p),
        TableShape::Square => p,
    };
    let m = coords.0.round();
    let n = coords.1.round();
    debug_assert!((coords.0 - m).abs() < 1e-6 && (coords.1 - n).abs() < 1e-6);
    (m as i64, n as i64)
}

/// Specular simulation from the centroid until a pocket is reached or
/// the path length exceeds Λ_max/ε; also reports the reflection count.
pub fn reflective_exit_time_counted(
    table: &BilliardTable,
    omega: f64,
    lambda_max: f64,
) -> Result<(PathSample, u64)> {
    if !omega.is_finite() || !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::Domain(format!("invalid direction {omega} or horizon {lambda_max}")));
    }
    let poly = polygon_for(table.shape);
    let eps = table.epsilon;
    let cap = lambda_max / eps;
    let mut p = table.centroid();
    let mut d = (omega.cos(), omega.sin());
    let mut unfolder = Unfolder::identity();
    let mut total = 0.0f64;
    let mut reflections = 0u64;
    // Chords shorter than the apothem only occur while grazing a corner,
    // and pockets cut those cascades off, so this budget is generous.
    let budget = (8.0 * cap / table.apothem()).ceil() as u64 + 64;

    for _ in 0..budget {
        // Nearest pocket entry along this segment, tangency included.
        let mut pocket: Option<(f64, usize)> = None;
        for (i, &v) in poly.vertices.iter().enumerate() {
            let to_v = (v.0 - p.0, v.1 - p.1);
            let proj = dot(to_v, d);
            if proj <= 0.0 {
                continue;
            }
            let dist2 = (dot(to_v, to_v) - proj * proj).max(0.0);
            if dist2 <= eps * eps {
                let t_entry = proj - (eps * eps - dist2).sqrt();
                if t_entry > 1e-12 && pocket.is_none_or(|(t, _)| t_entry < t) {
                    pocket = Some((t_entry, i));
                }
            }
        }
        // Nearest edge crossing.
        let mut edge: Option<(f64, usize)> = None;
        for (i, &n) in poly.normals.iter().enumerate() {
            let denom = dot(d, n);
            if denom > 1e-15 {
                let t = (poly.offsets[i] - dot(p, n)) / denom;
                if t > 1e-12 && edge.is_none_or(|(te, _)| t < te) {
                    edge = Some((t, i));
                }
            }
        }
        if let Some((t_entry, vi)) = pocket {
            if edge.is_none_or(|(te, _)| t_entry <= te) {
                let tau = total + t_entry;
                if tau > cap {
                    return Ok((
                        PathSample { direction: omega, outcome: PathOutcome::Escaped },
                        reflections,
                    ));
                }
                let center = unfolder.apply(poly.vertices[vi]);
                let hit = label_unfolded_pocket(table.shape, center);
                return Ok((
                    PathSample {
                        direction: omega,
                        outcome: PathOutcome::Finite { value: tau, hit },
                    },
                    reflections,
                ));
            }
        }
        let Some((t_edge, ei)) = edge else {
            // Direction parallel to every forward edge cannot happen for
            // a bounded polygon; bail out defensively.
            debug_assert!(false, "no forward edge from {p:?} along {d:?}");
            return Ok((PathSample { direction: omega, outcome: PathOutcome::Escaped }, reflections));
        };
        total += t_edge;
        if total > cap {
            return Ok((PathSample { direction: omega, outcome: PathOutcome::Escaped }, reflections));
        }
        p = (p.0 + t_edge * d.0, p.1 + t_edge * d.1);
        let n = poly.normals[ei];
        let dn = dot(d, n);
        d = (d.0 - 2.0 * dn * n.0, d.1 - 2.0 * dn * n.1);
        unfolder.reflect(n, poly.offsets[ei]);
        reflections += 1;
    }
    Ok((PathSample { direction: omega, outcome: PathOutcome::Escaped }, reflections))
}

/// Specular simulation from the centroid; the hit label is the unfolded
/// pocket's lattice coordinates, directly comparable with the unfolded
/// engines.
pub fn reflective_exit_time(
    table: &BilliardTable,
    omega: f64,
    lambda_max: f64,
) -> Result<PathSample> {
    reflective_exit_time_counted(table, omega, lambda_max).map(|(s, _)| s)
}

// --- unfolded engines -----------------------------------------------------

/// First honeycomb pocket on the straight ray from the origin: vertices
/// m·(1,0) + n·(1/2, √3/2) with m ≢ n (mod 3) carry discs of radius ε.
/// The direction folds into [0, π/6] through the honeycomb's sixfold
/// rotations (m,n) ↦ (−n, m+n) and the mirror (m,n) ↦ (n,m), and the
/// hit is mapped back to the original frame.
pub fn unfolded_exit_time_hex(epsilon: f64, omega: f64, lambda_max: f64) -> Result<PathSample> {
    check_pocket_radius(epsilon)?;
    if !omega.is_finite() || !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::Domain(format!("invalid direction {omega} or horizon {lambda_max}")));
    }
    let cap = lambda_max / epsilon;
    let wrapped = omega.rem_euclid(TAU);
    let sextant = ((wrapped / FRAC_PI_3).floor() as i64).min(5);
    let mut w = (wrapped - sextant as f64 * FRAC_PI_3).max(0.0);
    let mirrored = w > FRAC_PI_6;
    if mirrored {
        w = FRAC_PI_3 - w;
    }
    let outcome = match march_honeycomb(epsilon, w, cap) {
        Some((tau, mut m, mut n)) => {
            if mirrored {
                std::mem::swap(&mut m, &mut n);
            }
            for _ in 0..sextant {
                (m, n) = (-n, m + n);
            }
            PathOutcome::Finite { value: tau, hit: (m, n) }
        }
        None => PathOutcome::Escaped,
    };
    Ok(PathSample { direction: omega, outcome })
}

/// March of the reduced honeycomb ray, w ∈ [0, π/6]. Vertices sit at
/// P(m,n) = (m + n/2, n·√3/2); within the reduced sector every pocket
/// within reach has m ≥ 1 and n ∈ {⌊ms⌋, ⌈ms⌉} for the effective slope
/// s, and hits are encountered in order of m.
fn march_honeycomb(eps: f64, w: f64, cap: f64) -> Option<(f64, i64, i64)> {
    let (sin_w, cos_w) = w.sin_cos();
    let h = SQRT_3 / 2.0;
    // P(m,n) lies on the line y = s·x (in the m-n index plane) when the
    // ray passes through it: s solves the cross-product equation.
    let r = cos_w - sin_w / SQRT_3;
    let s = 2.0 * sin_w / (SQRT_3 * r);
    let m_stop = (cap + 2.0).ceil() as i64;
    for m in 1..=m_stop {
        let y = s * m as f64;
        let lo = y.floor();
        let hi = y.ceil();
        let mut nf = lo;
        loop {
            let px = m as f64 + nf / 2.0;
            let py = nf * h;
            let d = (px * sin_w - py * cos_w).abs();
            if d <= eps {
                let n = nf as i64;
                if (m - n).rem_euclid(3) != 0 {
                    let proj = px * cos_w + py * sin_w;
                    debug_assert!(proj > 0.0);
                    let tau = proj - (eps * eps - d * d).sqrt();
                    if tau > cap {
                        return None;
                    }
                    return Some((tau, m, n));
                }
            }
            if nf == hi {
                break;
            }
            nf = hi;
        }
    }
    None
}

/// First pocket on the straight ray from (1/2, 1/2) when the square's
/// reflections tile the plane: pockets of radius ε on every integer
/// point — equivalently, from the centered frame, on every half-odd
/// point. Folds through coordinate swap and point reflection (both
/// symmetries of the half-odd lattice).
pub fn unfolded_exit_time_square(epsilon: f64, omega: f64, lambda_max: f64) -> Result<PathSample> {
    check_pocket_radius(epsilon)?;
    if !omega.is_finite() || !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::Domain(format!("invalid direction {omega} or horizon {lambda_max}")));
    }
    let cap = lambda_max / epsilon;
    let (mut dx, mut dy) = (omega.cos(), omega.sin());
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
    let k_stop = (cap + 2.0).ceil() as i64;
    let mut outcome = PathOutcome::Escaped;
    'march: for k in 0..=k_stop {
        let u = k as f64 + 0.5;
        let y = u * s;
        let lo = (y - 0.5).floor();
        let hi = (y - 0.5).ceil();
        let mut j = lo;
        loop {
            let v = j + 0.5;
            let d = (u * dy - v * dx).abs();
            if d <= epsilon {
                let proj = u * dx + v * dy;
                if proj > 0.0 {
                    let tau = proj - (epsilon * epsilon - d * d).sqrt();
                    if tau <= cap {
                        // Map the reduced-frame center back, then shift the
                        // centered frame to the square's corner lattice.
                        let (mut cu, mut cv) = (u, v);
                        if negated {
                            cu = -cu;
                            cv = -cv;
                        }
                        if swapped {
                            std::mem::swap(&mut cu, &mut cv);
                        }
                        let hit = ((cu + 0.5).round() as i64, (cv + 0.5).round() as i64);
                        outcome = PathOutcome::Finite { value: tau, hit };
                    }
                    break 'march;
                }
            }
            if j == hi {
                break;
            }
            j = hi;
        }
    }
    Ok(PathSample { direction: omega, outcome })
}

// --- cross-checks and empirical tables ------------------------------------

/// Largest deviation between the reflective and unfolded exit times over
/// n stratified directions in [0, 2π), with both engines clamped at the
/// horizon so a borderline escape on one side cannot inflate the result.
pub fn fold_unfold_agreement(
    table: &BilliardTable,
    n: u64,
    seed: u64,
    lambda_max: f64,
) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    if n == 0 {
        return Err(Error::Domain("need at least one direction".into()));
    }
    let cap = lambda_max / table.epsilon;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for i in 0..n {
        let u: f64 = rng.random();
        let omega = TAU * (i as f64 + u) / n as f64;
        let folded = reflective_exit_time(table, omega, lambda_max)?;
        let unfolded = match table.shape {
            TableShape::Hexagon => unfolded_exit_time_hex(table.epsilon, omega, lambda_max)?,
            TableShape::Square => unfolded_exit_time_square(table.epsilon, omega, lambda_max)?,
        };
        let clamp = |s: &PathSample| s.value_or_infinity().min(cap);
        worst = worst.max((clamp(&folded) - clamp(&unfolded)).abs());
    }
    Ok(worst)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be positive and strictly increasing".into()));
    }
    Ok(())
}

fn check_sector(sector: (f64, f64)) -> Result<()> {
    if !(sector.0.is_finite() && sector.1.is_finite() && sector.0 < sector.1) {
        return Err(Error::Domain(format!("invalid angle sector {sector:?}")));
    }
    Ok(())
}

/// How many cross-check directions each empirical run re-simulates with
/// the reflective engine.
const CROSS_CHECK_DIRECTIONS: u64 = 32;
const CROSS_CHECK_TOLERANCE: f64 = 1e-9;

/// The reflective engine re-accumulates the unfolding isometry once per
/// reflection, so its exit time drifts from the straight-ray march by up
/// to a few ulps of τ per reflection. The comparison tolerance therefore
/// scales as reflections · τ · 2⁻⁵⁰ on top of the fixed floor — still
/// around nine orders of magnitude below any genuine geometry mismatch,
/// which shows up at the scale of ε or of a whole chord.
fn drift_tolerance(reflections: u64, tau: f64) -> f64 {
    CROSS_CHECK_TOLERANCE + reflections as f64 * tau.abs() * 2.0f64.powi(-50)
}

fn cross_check_engines(table: &BilliardTable, seed: u64, lambda_max: f64) -> Result<()> {
    use rand::{Rng, SeedableRng};
    let cap = lambda_max / table.epsilon;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for i in 0..CROSS_CHECK_DIRECTIONS {
        let u: f64 = rng.random();
        let omega = TAU * (i as f64 + u) / CROSS_CHECK_DIRECTIONS as f64;
        let (folded, reflections) = reflective_exit_time_counted(table, omega, lambda_max)?;
        let unfolded = match table.shape {
            TableShape::Hexagon => unfolded_exit_time_hex(table.epsilon, omega, lambda_max)?,
            TableShape::Square => unfolded_exit_time_square(table.epsilon, omega, lambda_max)?,
        };
        let f = folded.value_or_infinity().min(cap);
        let u = unfolded.value_or_infinity().min(cap);
        let dev = (f - u).abs();
        if dev > drift_tolerance(reflections, f.min(u)) {
            return Err(Error::Domain(format!(
                "reflective and unfolded engines disagree by {dev:.3e} at ω={omega} \
                 ({reflections} reflections)"
            )));
        }
    }
    Ok(())
}

fn empirical_table(
    table: &BilliardTable,
    sector: (f64, f64),
    grid: &[f64],
    n: u64,
    seed: u64,
    theory: impl Fn(f64) -> f64,
) -> Result<DistributionTable> {
    check_grid(grid)?;
    check_sector(sector)?;
    if n == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let lambda_max = 4.0 * grid.last().copied().unwrap_or(1.0);
    cross_check_engines(table, seed, lambda_max)?;
    let eps = table.epsilon;
    let shape = table.shape;
    let value = |omega: f64| {
        let sample = match shape {
            TableShape::Hexagon => unfolded_exit_time_hex(eps, omega, lambda_max),
            TableShape::Square => unfolded_exit_time_square(eps, omega, lambda_max),
        }
        .expect("validated inputs cannot fail");
        eps * sample.value_or_infinity()
    };
    let counts = sampling::sweep_counts(sector.0, sector.1, n, seed, grid, value);
    let survival = sampling::survival_from_counts(&counts);
    Ok(DistributionTable::from_parts(grid, &survival, n, seed, 1.0, theory))
}

/// Empirical survival of ε·τ for the hexagon over stratified directions
/// in the sector, next to the predicted limit G₃(2λ/√3). A reflective-
/// engine subsample cross-checks the unfolded engine first.
pub fn empirical_hex_repartition(
    epsilon: f64,
    sector: (f64, f64),
    grid: &[f64],
    n: u64,
    seed: u64,
) -> Result<DistributionTable> {
    let table = BilliardTable::new(TableShape::Hexagon, epsilon)?;
    let modulus = CongruenceModulus::new(3)?;
    empirical_table(&table, sector, grid, n, seed, |l| {
        modulus.repartition(2.0 * l / SQRT_3).expect("positive grid")
    })
}

/// Empirical survival of ε·τ for the square, next to G₂(2λ).
///
/// The argument scaling follows from an exact similarity rather than an
/// estimate: unfolding the unit square puts the pocket centres on the
/// half-odd lattice (ℤ + 1/2)², and (x, y) ↦ (x − y, x + y) maps that set
/// bijectively onto the opposite-parity points {(p, q) : p ≢ q (mod 2)}
/// while stretching every length by √2. Pocket radius and path length both
/// pick up the factor, so ε̃τ̃ = 2ετ and P(ετ > λ) = P(ε̃τ̃ > 2λ) → G₂(2λ).
/// (The image set is onto: p + q odd gives integer preimage
/// m = (p+q+1)/2, n = (q−p+1)/2.)
pub fn empirical_square_repartition(
    epsilon: f64,
    sector: (f64, f64),
    grid: &[f64],
    n: u64,
    seed: u64,
) -> Result<DistributionTable> {
    let table = BilliardTable::new(TableShape::Square, epsilon)?;
    let modulus = CongruenceModulus::new(2)?;
    empirical_table(&table, sector, grid, n, seed, |l| {
        modulus.repartition(2.0 * l).expect("positive grid")
    })
}
