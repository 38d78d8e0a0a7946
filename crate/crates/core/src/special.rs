//! Dilogarithm and related constants.

use crate::{Error, Result};

/// ζ(2) = π²/6, the normalising constant of the scatterer density.
pub const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// Absolute-accuracy promise attached to a special-function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyContract {
    pub absolute_tolerance: f64,
}

impl AccuracyContract {
    /// A contract with a caller-chosen tolerance. Must be positive.
    pub fn new(absolute_tolerance: f64) -> Result<Self> {
        if !(absolute_tolerance > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {absolute_tolerance}"
            )));
        }
        Ok(Self { absolute_tolerance })
    }
}

impl Default for AccuracyContract {
    /// The shipped default; every built-in default stays at or below 1e−10.
    fn default() -> Self {
        Self { absolute_tolerance: 1e-14 }
    }
}

/// ζ(2) to full working precision.
pub fn zeta2() -> f64 {
    ZETA2
}

/// The dilogarithm Li₂(x) = Σ_{n≥1} xⁿ/n² = −∫₀ˣ ln(1−t)/t dt on [0, 1].
///
/// Direct power series for x ≤ 1/2 (50 terms reach ~1e−16); for x > 1/2 the
/// reflection Li₂(x) = ζ(2) − ln(x)ln(1−x) − Li₂(1−x) maps back to the fast
/// half. x = 1 short-circuits to ζ(2) so the reflection never sees ln(0).
pub fn dilog(x: f64) -> Result<f64> {
    dilog_with(x, AccuracyContract::default())
}

/// [`dilog`] with an explicit accuracy contract.
pub fn dilog_with(x: f64, contract: AccuracyContract) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("dilog defined on [0,1], got {x}")));
    }
    if x == 1.0 {
        return Ok(ZETA2);
    }
    if x <= 0.5 {
        Ok(series(x, contract.absolute_tolerance))
    } else {
        let y = 1.0 - x;
        Ok(ZETA2 - x.ln() * y.ln() - series(y, contract.absolute_tolerance))
    }
}

fn series(x: f64, tol: f64) -> f64 {
    debug_assert!((0.0..=0.5).contains(&x));
    let mut sum = 0.0;
    let mut pow = 1.0;
    for n in 1..=50u32 {
        pow *= x;
        let term = pow / (n as f64 * n as f64);
        sum += term;
        if term < tol * 0.01 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn dilog_at_zero_is_zero() {
        assert_eq!(dilog(0.0).unwrap(), 0.0);
    }

    #[test]
    fn dilog_at_one_is_zeta2() {
        assert_eq!(dilog(1.0).unwrap(), ZETA2);
        assert!((zeta2() - 1.6449340668482264).abs() < 1e-15);
    }

    #[test]
    fn dilog_at_half_matches_closed_form() {
        let expected = (ZETA2 - std::f64::consts::LN_2.powi(2)) / 2.0;
        assert!((dilog(0.5).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.5822405264650125).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_of_zeta2() {
        assert!((1.0 / zeta2() - 0.6079271018540267).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(dilog(-0.1).is_err());
        assert!(dilog(1.1).is_err());
        assert!(dilog(f64::NAN).is_err());
    }

    #[test]
    fn series_matches_quadrature_of_defining_integral() {
        // Li₂(x) = −∫₀ˣ ln(1−t)/t dt; the integrand extends continuously to
        // t = 0 with value 1.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let x = 0.02 + 0.96 * next();
            let byquad = quad::integrate(
                |t| if t == 0.0 { 1.0 } else { -(1.0 - t).ln() / t },
                0.0,
                x,
                1e-13,
            );
            assert!(
                (dilog(x).unwrap() - byquad).abs() < 1e-12,
                "mismatch at x={x}: series {} vs quadrature {byquad}",
                dilog(x).unwrap()
            );
        }
    }

    #[test]
    fn strictly_increasing_on_grid() {
        let mut prev = -1.0;
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let v = dilog(x).unwrap();
            assert!(v > prev, "not increasing at x={x}");
            prev = v;
        }
    }

    #[test]
    fn contract_rejects_nonpositive_tolerance() {
        assert!(AccuracyContract::new(0.0).is_err());
        assert!(AccuracyContract::new(-1e-3).is_err());
        // Shipped default stays within the documented ceiling.
        assert!(AccuracyContract::default().absolute_tolerance <= 1e-10);
    }
}
