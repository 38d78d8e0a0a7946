//! The limiting repartition function of the normalized free path length,
//! its density, and the auxiliary curves from which it is assembled.
//!
//! For a congruence modulus ℓ ≥ 2 the limit curve is
//!
//! ```text
//!          ⎧ 1 − (1/ζ(2) + A(ℓ))·λ                 0 < λ ≤ 1/2
//! G_ℓ(λ) = ⎨ 1 − λ/ζ(2) + A(ℓ)·H₂(λ)              1/2 ≤ λ ≤ 1
//!          ⎩ (2C(ℓ)/ℓ)·H₃(λ)                      λ ≥ 1
//! ```
//!
//! with C(ℓ) = φ(ℓ)/(ζ(2)ℓ)·∏_{p|ℓ}(1−p⁻²)⁻¹ and A(ℓ) = 1/ζ(2) − 2C(ℓ)/ℓ.
//! Branch points belong to both adjacent branches (the formulas agree there);
//! evaluation routes them through the left branch.

use crate::special::{dilog, ZETA2};
use crate::{quad, Error, Result};

/// C(ℓ): the density of fractions a/q with q ≢ a (mod ℓ) among all reduced
/// fractions, via the exact finite Euler product over the primes dividing ℓ.
pub fn constant_c(ell: u64) -> Result<f64> {
    if ell < 2 {
        return Err(Error::Domain(format!("modulus must be ≥ 2, got {ell}")));
    }
    let mut c = crate::arith::totient(ell) as f64 / (ZETA2 * ell as f64);
    for p in prime_factors(ell) {
        let p2 = (p * p) as f64;
        c /= 1.0 - 1.0 / p2;
    }
    Ok(c)
}

/// A(ℓ) = 1/ζ(2) − 2C(ℓ)/ℓ, the coefficient of the sub-ζ(2) corrections.
pub fn constant_a(ell: u64) -> Result<f64> {
    Ok(1.0 / ZETA2 - 2.0 * constant_c(ell)? / ell as f64)
}

fn prime_factors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// x·ln(x) extended by continuity with value 0 at x = 0.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// H₂ on [1/2, 1]: the middle-branch correction curve.
///
/// H₂(λ) = 3λ − 2 + ζ(2) − (ln λ)² + 2(1−λ)ln(1/λ − 1) − 2Li₂(λ).
/// The product (1−λ)ln(1/λ−1) has a removable singularity at λ = 1 and is
/// evaluated as xlnx((1−λ)/λ)·λ-free stable form.
pub fn h2(lambda: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("H2 defined on [1/2,1], got {lambda}")));
    }
    // (1−λ)ln(1/λ−1) = (1−λ)[ln(1−λ) − ln λ]; 1−λ is exact for λ ∈ [1/2, 1].
    let om = 1.0 - lambda;
    let corner = if om == 0.0 { 0.0 } else { om * (om.ln() - lambda.ln()) };
    Ok(3.0 * lambda - 2.0 + ZETA2 - lambda.ln().powi(2) + 2.0 * corner - 2.0 * dilog(lambda)?)
}

/// H₃ on [1, ∞): the tail curve, H₃(λ) = Li₂(1/λ) − (λ−1)ln(1−1/λ) − 1.
///
/// 1 − 1/λ is evaluated as (λ−1)/λ so the logarithm stays accurate near 1;
/// the product term vanishes by continuity at λ = 1.
pub fn h3(lambda: f64) -> Result<f64> {
    if !(lambda >= 1.0) {
        return Err(Error::Domain(format!("H3 defined on [1,∞), got {lambda}")));
    }
    let lm1 = lambda - 1.0;
    let term = if lm1 == 0.0 { 0.0 } else { lm1 * (lm1.ln() - lambda.ln()) };
    Ok(dilog(1.0 / lambda)? - term - 1.0)
}

/// I₁(λ) = ∫_λ^1 (1/x)·ln(1/max{λ, 1−x}) dx in closed form:
/// ln(1−λ)lnλ + Li₂(1−λ) − Li₂(λ) on (0, 1/2], and (ln λ)² on [1/2, 1].
pub fn i1(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("I1 defined on (0,1], got {lambda}")));
    }
    if lambda >= 0.5 {
        Ok(lambda.ln().powi(2))
    } else {
        Ok((1.0 - lambda).ln() * lambda.ln() + dilog(1.0 - lambda)? - dilog(lambda)?)
    }
}

/// I₂(λ) = ∫_{max{λ,1−λ}}^1 ((1−x)/x)·ln(λ/(1−x)) dx in closed form:
/// Li₂(λ) − λ on (0, 1/2], and
/// ζ(2) − Li₂(λ) − (lnλ)² − (1−λ)lnλ + (1−λ)ln(1−λ) − (1−λ) on [1/2, 1].
pub fn i2(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("I2 defined on (0,1], got {lambda}")));
    }
    if lambda < 0.5 {
        Ok(dilog(lambda)? - lambda)
    } else {
        let om = 1.0 - lambda;
        Ok(ZETA2 - dilog(lambda)? - lambda.ln().powi(2) - om * lambda.ln() + xlnx(om) - om)
    }
}

/// The sub-ζ(2) part of the limit curve on (0, 1]: G⁽¹⁾ = I₁ + 2I₂,
/// identically 0 for λ ≥ 1.
pub fn g1_partial(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("need λ > 0, got {lambda}")));
    }
    if lambda >= 1.0 {
        return Ok(0.0);
    }
    Ok(i1(lambda)? + 2.0 * i2(lambda)?)
}

/// A congruence modulus ℓ with its cached constants C(ℓ) and A(ℓ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CongruenceModulus {
    ell: u64,
    c: f64,
    a: f64,
}

impl CongruenceModulus {
    /// Validates ℓ ≥ 2 and the constant invariants 0 < C(ℓ) ≤ 1/ζ(2),
    /// A(ℓ) ≥ 0.
    pub fn new(ell: u64) -> Result<Self> {
        let c = constant_c(ell)?;
        let a = 1.0 / ZETA2 - 2.0 * c / ell as f64;
        if !(c > 0.0 && c <= 1.0 / ZETA2 + 1e-15) {
            return Err(Error::Domain(format!("C({ell}) = {c} out of range")));
        }
        if !(a >= 0.0) {
            return Err(Error::Domain(format!("A({ell}) = {a} negative")));
        }
        Ok(Self { ell, c, a })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// C(ℓ).
    pub fn c(&self) -> f64 {
        self.c
    }

    /// A(ℓ).
    pub fn a(&self) -> f64 {
        self.a
    }

    /// The limiting repartition function G_ℓ(λ) for λ > 0.
    pub fn repartition(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::Domain(format!("need λ > 0, got {lambda}")));
        }
        if lambda <= 0.5 {
            Ok(1.0 - (1.0 / ZETA2 + self.a) * lambda)
        } else if lambda <= 1.0 {
            Ok(1.0 - lambda / ZETA2 + self.a * h2(lambda)?)
        } else {
            Ok(2.0 * self.c / self.ell as f64 * h3(lambda)?)
        }
    }

    /// The density g_ℓ = −G_ℓ′ from the branchwise symbolic derivatives.
    ///
    /// The λ > 1 branch is the exact derivative of the implemented G,
    /// namely (2C/ℓ)·(1/λ + (1−1/λ)ln(1−1/λ)); finite differences of
    /// `repartition` confirm the sign. g is continuous across both seams.
    pub fn density(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::Domain(format!("need λ > 0, got {lambda}")));
        }
        let inv_z = 1.0 / ZETA2;
        if lambda <= 0.5 {
            Ok(inv_z + self.a)
        } else if lambda <= 1.0 {
            // −d/dλ[H₂] = −3 + 2/λ − 2(1/λ−1)ln(1/λ−1), with 1/λ−1 = (1−λ)/λ.
            let t = (1.0 - lambda) / lambda;
            Ok(inv_z + self.a * (-3.0 + 2.0 / lambda - 2.0 * xlnx(t)))
        } else {
            // −d/dλ[H₃] = 1/λ + (1−1/λ)ln(1−1/λ), with 1−1/λ = (λ−1)/λ.
            let u = (lambda - 1.0) / lambda;
            Ok(2.0 * self.c / self.ell as f64 * (1.0 / lambda + xlnx(u)))
        }
    }
}

/// Convenience wrapper: G_ℓ(λ) without caching the modulus.
pub fn repartition(ell: u64, lambda: f64) -> Result<f64> {
    CongruenceModulus::new(ell)?.repartition(lambda)
}

/// Convenience wrapper: g_ℓ(λ) without caching the modulus.
pub fn density(ell: u64, lambda: f64) -> Result<f64> {
    CongruenceModulus::new(ell)?.density(lambda)
}

/// The ℓ → ∞ limit of G_ℓ: A(ℓ) → 1/ζ(2) and C(ℓ)/ℓ → 0, so the curve is
/// compactly supported on (0, 1].
pub fn repartition_limit(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("need λ > 0, got {lambda}")));
    }
    let inv_z = 1.0 / ZETA2;
    if lambda <= 0.5 {
        Ok(1.0 - 2.0 * inv_z * lambda)
    } else if lambda <= 1.0 {
        Ok(1.0 - lambda * inv_z + inv_z * h2(lambda)?)
    } else {
        Ok(0.0)
    }
}

/// Quadrature evaluation of the bracket that simplifies to −λ:
///
/// λ − ζ(2) + (lnλ)ln(1−λ) + ∫_λ^{1−λ} (1/u)ln(1/(1−u)) du
///   + 2∫_{1−λ}^1 ((1−u)/u)·ln(λ/(1−u)) du.
///
/// Both integrals are taken after the substitution u = 1 − e^{−t}, which
/// turns ln(1/(1−u)) into t and removes the u → 1 endpoint blow-up. The
/// bracket collapses to −λ only with coefficient 1 on the first integral
/// (two dilogarithm reflections); that is the identity asserted here.
pub fn h1_bracket(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 0.5) {
        return Err(Error::Domain(format!("bracket defined on (0,1/2), got {lambda}")));
    }
    let tol = 1e-12;
    // ∫_λ^{1−λ} (1/u)·ln(1/(1−u)) du, u = 1−e^{−t}, du = e^{−t} dt.
    let first = quad::integrate(
        |t| {
            let emt = (-t).exp();
            t * emt / (1.0 - emt)
        },
        -(1.0 - lambda).ln(),
        -lambda.ln(),
        tol,
    );
    // ∫_{1−λ}^1 ((1−u)/u)·ln(λ/(1−u)) du, same substitution; the upper
    // endpoint u = 1 maps to t = ∞ and the integrand decays like t·e^{−2t},
    // so truncating at t = t₀ + 45 is far below the tolerance. The integrand
    // vanishes at t₀ and its mass sits in a narrow shoulder just above it;
    // forced segment endpoints keep the adaptive rule from accepting an
    // all-zero probe of that shoulder.
    let lnl = lambda.ln();
    let t0 = -lnl;
    let second = quad::integrate_segments(
        |t| {
            let emt = (-t).exp();
            emt * emt / (1.0 - emt) * (lnl + t)
        },
        &[t0, t0 + 1.0, t0 + 3.0, t0 + 8.0, t0 + 20.0, t0 + 45.0],
        tol,
    );
    Ok(lambda - ZETA2 + lambda.ln() * (1.0 - lambda).ln() + first + 2.0 * second)
}

/// A tabulation of (λ, G, g) over a fixed grid for one modulus.
#[derive(Debug, Clone)]
pub struct LimitCurve {
    modulus: CongruenceModulus,
    grid: Vec<f64>,
}

impl LimitCurve {
    /// `grid` must be strictly increasing and positive.
    pub fn new(modulus: CongruenceModulus, grid: Vec<f64>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Domain("empty grid".into()));
        }
        if grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("grid must be positive and strictly increasing".into()));
        }
        Ok(Self { modulus, grid })
    }

    pub fn modulus(&self) -> &CongruenceModulus {
        &self.modulus
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// (λ, G(λ), g(λ)) rows over the grid.
    pub fn rows(&self) -> Vec<(f64, f64, f64)> {
        self.grid
            .iter()
            .map(|&l| {
                let g = self.modulus.repartition(l).expect("grid is positive");
                let d = self.modulus.density(l).expect("grid is positive");
                (l, g, d)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn constant_c_known_values() {
        let pi2 = PI * PI;
        assert!((constant_c(2).unwrap() - 4.0 / pi2).abs() < 1e-15);
        assert!((constant_c(3).unwrap() - 4.5 / pi2).abs() < 1e-15);
        assert!((constant_c(4).unwrap() - 4.0 / pi2).abs() < 1e-15);
        assert!((constant_c(2).unwrap() - 0.4052847345693511).abs() < 1e-13);
        assert!((constant_c(3).unwrap() - 0.45594532639052).abs() < 1e-13);
        assert!(constant_c(1).is_err());
    }

    #[test]
    fn constant_a_known_values() {
        let pi2 = PI * PI;
        assert!((constant_a(2).unwrap() - 2.0 / pi2).abs() < 1e-15);
        assert!((constant_a(3).unwrap() - 3.0 / pi2).abs() < 1e-15);
        // A(ℓ) → 1/ζ(2) for large ℓ.
        assert!((constant_a(997).unwrap() - 6.0 / pi2).abs() < 0.01);
    }

    #[test]
    fn modulus_invariants_hold_for_small_ell() {
        for ell in 2..=50 {
            let m = CongruenceModulus::new(ell).unwrap();
            assert!(m.c() > 0.0 && m.c() <= 1.0 / ZETA2 + 1e-15);
            assert!(m.a() >= 0.0);
            assert!((m.a() - (1.0 / ZETA2 - 2.0 * m.c() / ell as f64)).abs() < 1e-16);
        }
    }

    #[test]
    fn h2_endpoint_values() {
        // Continuity of G at both seams forces H₂(1/2) = −1/2 exactly and
        // H₂(1) = 1 − ζ(2).
        assert!((h2(1.0).unwrap() - (1.0 - ZETA2)).abs() < 1e-15);
        assert!((h2(0.5).unwrap() + 0.5).abs() < 1e-14);
        assert!(h2(0.4).is_err());
        assert!(h2(1.1).is_err());
    }

    #[test]
    fn h2_matches_quadrature_form() {
        // 3λ−2−ζ(2)−(lnλ)²+2(1−λ)ln(1/λ−1)+2∫_λ¹(1/u)ln(1/(1−u))du,
        // integrated with u = 1−e^{−t}.
        for &l in &[0.6, 0.75, 0.9] {
            let integral = quad::integrate(
                |t: f64| {
                    let emt = (-t).exp();
                    t * emt / (1.0 - emt)
                },
                -(1.0f64 - l).ln(),
                60.0,
                1e-12,
            );
            let byquad = 3.0 * l - 2.0 - ZETA2 - l.ln().powi(2)
                + 2.0 * (1.0 - l) * (1.0 / l - 1.0).ln()
                + 2.0 * integral;
            assert!(
                (h2(l).unwrap() - byquad).abs() < 1e-10,
                "λ={l}: closed {} vs quad {byquad}",
                h2(l).unwrap()
            );
        }
    }

    #[test]
    fn h3_known_values() {
        assert!((h3(1.0).unwrap() - (ZETA2 - 1.0)).abs() < 1e-15);
        let at2 = dilog(0.5).unwrap() + std::f64::consts::LN_2 - 1.0;
        assert!((h3(2.0).unwrap() - at2).abs() < 1e-15);
        assert!((at2 - 0.275_387_707_024_957_8).abs() < 1e-14);
        assert!(h3(0.99).is_err());
    }

    #[test]
    fn h3_tail_matches_expansion_and_quadrature() {
        let l = 1e3;
        // Tail: H₃ ≈ 1/(2λ) within 0.2% at λ = 10³.
        assert!((h3(l).unwrap() / (0.5 / l) - 1.0).abs() < 2e-3);
        // Integral form ∫₀¹ ((1−u)/u)·ln(λ/(λ−u)) du; the u → 0 endpoint
        // extends continuously to 1/λ·… → value ln-limit handled by guard.
        for &l in &[1.5, 2.0, 7.0] {
            let byquad = quad::integrate(
                |u: f64| {
                    if u == 0.0 {
                        0.0
                    } else {
                        (1.0 - u) / u * (l / (l - u)).ln()
                    }
                },
                0.0,
                1.0,
                1e-12,
            );
            assert!(
                (h3(l).unwrap() - byquad).abs() < 1e-9,
                "λ={l}: closed {} vs quad {byquad}",
                h3(l).unwrap()
            );
        }
    }

    #[test]
    fn i1_examples() {
        assert_eq!(i1(1.0).unwrap(), 0.0);
        assert!((i1(0.75).unwrap() - (0.75f64).ln().powi(2)).abs() < 1e-15);
        assert!(((0.75f64).ln().powi(2) - 0.082_760_974_810_151_73).abs() < 1e-14);
        // Continuity at the 1/2 junction of the two closed forms.
        assert!((i1(0.5).unwrap() - i1(0.5 - 1e-12).unwrap()).abs() < 1e-10);
        assert!(i1(0.0).is_err());
    }

    #[test]
    fn i2_examples() {
        assert!(i2(1.0).unwrap().abs() < 1e-15);
        assert!((i2(0.5).unwrap() - (dilog(0.5).unwrap() - 0.5)).abs() < 1e-14);
        assert!((i2(0.5).unwrap() - i2(0.5 - 1e-12).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn i_functions_match_their_integral_forms() {
        // I₁ = ∫_λ^1 (1/x)·ln(1/max{λ,1−x}) dx and
        // I₂ = ∫_{max{λ,1−λ}}^1 ((1−x)/x)·ln(λ/(1−x)) dx, by direct
        // quadrature split at the kink x = 1−λ (and the endpoint handled
        // by the 1−e^{−t} substitution for the ln(1/(1−x)) part).
        for &l in &[0.2f64, 0.35, 0.6, 0.8] {
            let f1 = |x: f64| (1.0 / (l.max(1.0 - x))).ln() / x;
            let i1_quad = if l >= 0.5 {
                quad::integrate(f1, l, 1.0, 1e-12)
            } else {
                quad::integrate_segments(f1, &[l, 1.0 - l, 1.0], 1e-12)
            };
            assert!((i1(l).unwrap() - i1_quad).abs() < 1e-10, "I1 mismatch at λ={l}");

            let lo = l.max(1.0 - l);
            let lnl = l.ln();
            let t0 = -(1.0 - lo).ln();
            // Segment endpoints pin down the shoulder just above t₀, where the
            // integrand rises from zero before the e^{−2t} decay takes over.
            let i2_quad = quad::integrate_segments(
                |t: f64| {
                    let emt = (-t).exp();
                    emt * emt / (1.0 - emt) * (lnl + t)
                },
                &[t0, t0 + 1.0, t0 + 3.0, t0 + 8.0, t0 + 20.0, t0 + 45.0],
                1e-12,
            );
            assert!((i2(l).unwrap() - i2_quad).abs() < 1e-10, "I2 mismatch at λ={l}");
        }
    }

    #[test]
    fn g1_partial_examples() {
        assert_eq!(g1_partial(1.0).unwrap(), 0.0);
        assert_eq!(g1_partial(3.7).unwrap(), 0.0);
        let l: f64 = 0.75;
        let tail = quad::integrate(
            |u: f64| if u == 1.0 { 0.0 } else { (1.0 - u) / u * (l / (1.0 - u)).ln() },
            l,
            1.0 - 1e-13,
            1e-12,
        );
        let byquad = l.ln().powi(2) + 2.0 * tail;
        assert!((g1_partial(l).unwrap() - byquad).abs() < 1e-9);
        // On (0, 1/2] the partial curve is exactly ζ(2) − 2λ.
        for &l in &[0.1, 0.3, 0.5] {
            assert!((g1_partial(l).unwrap() - (ZETA2 - 2.0 * l)).abs() < 1e-13);
        }
    }

    #[test]
    fn repartition_examples() {
        assert!((repartition(2, 1e-12).unwrap() - 1.0).abs() < 1e-11);
        let pi2 = PI * PI;
        assert!((repartition(2, 0.25).unwrap() - (1.0 - 2.0 / pi2)).abs() < 1e-14);
        assert!(repartition(2, 0.0).is_err());
        assert!(repartition(2, -1.0).is_err());
        for ell in [2u64, 3, 5] {
            let m = CongruenceModulus::new(ell).unwrap();
            let at_one = 2.0 * m.c() / ell as f64 * (ZETA2 - 1.0);
            assert!((m.repartition(1.0).unwrap() - at_one).abs() < 1e-12);
            assert!((m.repartition(1.0 + 1e-13).unwrap() - at_one).abs() < 1e-12);
        }
    }

    #[test]
    fn repartition_shape() {
        // Decreasing, kink at 1/2 (slope changes), strictly positive tail.
        let m = CongruenceModulus::new(3).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..=2000 {
            let l = i as f64 * 2.5e-3;
            let v = m.repartition(l).unwrap();
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            assert!(v > 0.0);
            prev = v;
        }
        let slope_left = (m.repartition(0.49).unwrap() - m.repartition(0.40).unwrap()) / 0.09;
        let slope_right = (m.repartition(0.60).unwrap() - m.repartition(0.51).unwrap()) / 0.09;
        assert!((slope_left - slope_right).abs() > 1e-3, "kink at 1/2 missing");
    }

    #[test]
    fn density_examples() {
        let pi2 = PI * PI;
        assert!((density(2, 0.25).unwrap() - 8.0 / pi2).abs() < 1e-14);
        assert!((8.0 / pi2 - 0.8105695).abs() < 1e-7);
        // Constant on the first branch.
        assert_eq!(density(2, 0.1).unwrap(), density(2, 0.4).unwrap());
    }

    #[test]
    fn density_is_minus_derivative_of_repartition() {
        let m = CongruenceModulus::new(3).unwrap();
        let h = 1e-6;
        for i in 0..100 {
            for &(lo, hi) in &[(1e-3, 0.499), (0.501, 0.999), (1.001, 8.0)] {
                let l = lo + (hi - lo) * i as f64 / 99.0;
                let fd =
                    (m.repartition(l - h).unwrap() - m.repartition(l + h).unwrap()) / (2.0 * h);
                assert!(
                    (m.density(l).unwrap() - fd).abs() < 1e-6,
                    "branch derivative mismatch at λ={l}: {} vs {fd}",
                    m.density(l).unwrap()
                );
            }
        }
    }

    #[test]
    fn density_continuous_at_seams() {
        for ell in 2..=8 {
            let m = CongruenceModulus::new(ell).unwrap();
            for b in [0.5, 1.0] {
                let left = m.density(b - 1e-12).unwrap();
                let right = m.density(b + 1e-12).unwrap();
                assert!((left - right).abs() < 1e-9, "ℓ={ell} seam {b}: {left} vs {right}");
            }
        }
    }

    #[test]
    fn repartition_limit_examples() {
        assert_eq!(repartition_limit(1.5).unwrap(), 0.0);
        assert!((repartition_limit(0.25).unwrap() - (1.0 - 0.5 / ZETA2)).abs() < 1e-14);
        assert!((repartition_limit(0.25).unwrap() - 0.6960364).abs() < 1e-7);
        // Continuity at 1 from the middle branch.
        assert!(repartition_limit(1.0 - 1e-12).unwrap().abs() < 1e-10);
        // Large-ℓ repartitions approach the limit curve.
        for i in 1..=200 {
            let l = i as f64 * 0.01;
            let diff = (repartition(997, l).unwrap() - repartition_limit(l).unwrap()).abs();
            assert!(diff <= 0.01, "ℓ=997 vs limit at λ={l}: {diff}");
        }
    }

    #[test]
    fn tail_law() {
        for ell in [2u64, 3, 7] {
            let m = CongruenceModulus::new(ell).unwrap();
            let l = 1e3;
            let ratio = l * m.repartition(l).unwrap() * ell as f64 / m.c();
            assert!((ratio - 1.0).abs() < 2e-3, "tail ratio {ratio} at ℓ={ell}");
        }
    }

    #[test]
    fn bracket_collapses_to_minus_lambda() {
        for i in 1..=20 {
            let l = i as f64 * 0.5 / 21.0;
            let v = h1_bracket(l).unwrap();
            assert!((v + l).abs() < 1e-8, "bracket at λ={l}: {v}");
        }
        assert!(h1_bracket(0.5).is_err());
    }

    #[test]
    fn assembly_identity() {
        // A(ℓ)·G⁽¹⁾(λ) + (2C(ℓ)/ℓ)(ζ(2)−λ) = G_ℓ(λ) on (0, 1].
        for ell in [2u64, 3, 4] {
            let m = CongruenceModulus::new(ell).unwrap();
            for i in 1..=50 {
                let l = i as f64 / 50.0;
                let lhs = m.a() * g1_partial(l).unwrap()
                    + 2.0 * m.c() / ell as f64 * (ZETA2 - l);
                assert!(
                    (lhs - m.repartition(l).unwrap()).abs() < 1e-9,
                    "assembly at ℓ={ell}, λ={l}"
                );
            }
        }
    }

    #[test]
    fn limit_curve_rows_are_monotone() {
        let m = CongruenceModulus::new(2).unwrap();
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.05).collect();
        let curve = LimitCurve::new(m, grid).unwrap();
        let rows = curve.rows();
        assert_eq!(rows.len(), 100);
        for w in rows.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-15);
            assert!((0.0..=1.0).contains(&w[0].1));
        }
        assert!(LimitCurve::new(m, vec![]).is_err());
        assert!(LimitCurve::new(m, vec![0.5, 0.4]).is_err());
    }
}
