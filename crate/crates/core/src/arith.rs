//! Multiplicative arithmetic: gcd, totient, Möbius, modular inverses, a
//! smallest-prime-factor sieve, and the averaged totient sums that lattice
//! point counts reduce to.

use crate::{limitdist, quad, Error, Result};

/// Greatest common divisor. At least one argument must be nonzero.
pub fn gcd(a: u64, b: u64) -> u64 {
    debug_assert!(a != 0 || b != 0, "gcd(0, 0) is undefined");
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient φ(n) by trial-division factorization.
///
/// For bulk evaluation build a [`Sieve`] instead.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1);
    let mut n = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            phi -= phi / p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Möbius function μ(n) ∈ {−1, 0, 1} by trial-division factorization.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1);
    let mut n = n;
    let mut parity = 0u32;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            parity += 1;
        }
        p += 1;
    }
    if n > 1 {
        parity += 1;
    }
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Multiplicative inverse of `a` modulo `m`, in `[0, m)`.
///
/// `a` may be negative; it is reduced first. Errors when gcd(a, m) ≠ 1.
pub fn mod_inverse(a: i64, m: u64) -> Result<u64> {
    assert!(m >= 1);
    if m == 1 {
        return Ok(0);
    }
    let a0 = a.rem_euclid(m as i64) as u64;
    // Extended Euclid on (a0, m), tracking only the coefficient of a0.
    let (mut old_r, mut r) = (a0 as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NoInverse { value: a, modulus: m });
    }
    Ok(old_s.rem_euclid(m as i64) as u64)
}

/// Smallest-prime-factor sieve for bulk totient/Möbius evaluation.
pub struct Sieve {
    spf: Vec<u32>,
}

/// Default sieve bound; large sweeps stay below it.
pub const DEFAULT_SIEVE_BOUND: usize = 10_000_000;

impl Sieve {
    /// Linear sieve of smallest prime factors up to `bound` inclusive.
    pub fn new(bound: usize) -> Self {
        let mut spf = vec![0u32; bound + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=bound {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p > spf[i] || ip > bound {
                    break;
                }
                spf[ip] = p;
            }
        }
        Self { spf }
    }

    /// Largest `n` this sieve can factor.
    pub fn bound(&self) -> usize {
        self.spf.len() - 1
    }

    /// φ(n); falls back to trial division above the sieve bound.
    pub fn totient(&self, n: u64) -> u64 {
        assert!(n >= 1);
        if n as usize > self.bound() {
            return totient(n);
        }
        let mut m = n as usize;
        let mut phi = n;
        while m > 1 {
            let p = self.spf[m] as usize;
            phi -= phi / p as u64;
            while m % p == 0 {
                m /= p;
            }
        }
        phi
    }

    /// μ(n); falls back to trial division above the sieve bound.
    pub fn mobius(&self, n: u64) -> i8 {
        assert!(n >= 1);
        if n as usize > self.bound() {
            return mobius(n);
        }
        let mut m = n as usize;
        let mut parity = 0u32;
        while m > 1 {
            let p = self.spf[m] as usize;
            m /= p;
            if m % p == 0 {
                return 0;
            }
            parity += 1;
        }
        if parity % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl Default for Sieve {
    fn default() -> Self {
        Self::new(DEFAULT_SIEVE_BOUND)
    }
}

/// A weight function V on [0, N] bundled with its sup-norm and
/// total-variation bounds, as the averaged sums' error terms require.
pub struct SummandFunction {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    sup_norm: f64,
    total_variation: f64,
}

impl SummandFunction {
    /// Wrap `f` with caller-supplied bounds.
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sup_norm: f64,
        total_variation: f64,
    ) -> Self {
        Self { f: Box::new(f), sup_norm, total_variation }
    }

    /// Wrap `f`, estimating sup-norm and total variation on a uniform
    /// 4096-point grid of [0, N]. Adequate for the smooth monotone weights
    /// used here; callers with wilder functions should supply bounds.
    pub fn with_estimated_bounds(f: impl Fn(f64) -> f64 + Send + Sync + 'static, n: f64) -> Self {
        let grid = 4096;
        let mut sup = 0.0f64;
        let mut tv = 0.0f64;
        let mut prev = f(0.0);
        for i in 0..=grid {
            let x = n * i as f64 / grid as f64;
            let v = f(x);
            sup = sup.max(v.abs());
            tv += (v - prev).abs();
            prev = v;
        }
        Self { f: Box::new(f), sup_norm: sup, total_variation: tv }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn total_variation(&self) -> f64 {
        self.total_variation
    }
}

/// Result of comparing an averaged totient sum against its main term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotientSumCheck {
    pub exact_sum: f64,
    pub main_term: f64,
    pub residual: f64,
}

fn integral_main(v: &SummandFunction, n: u64) -> f64 {
    let tol = 1e-10 * n as f64 * v.sup_norm().max(f64::MIN_POSITIVE);
    quad::integrate(|x| v.eval(x), 0.0, n as f64, tol)
}

/// Σ_{k ≤ N, gcd(ℓ,k)=1} (φ(k)/k)·V(k) versus its linear main term
/// C(ℓ)·∫₀ᴺ V. The residual is O((‖V‖_∞ + T₀ᴺV)·ln N).
pub fn coprime_totient_sum(ell: u64, n: u64, v: &SummandFunction) -> Result<TotientSumCheck> {
    if ell < 2 {
        return Err(Error::Domain(format!("modulus must be ≥ 2, got {ell}")));
    }
    if n < 1 {
        return Err(Error::Domain("N must be ≥ 1".into()));
    }
    let sieve = Sieve::new(n as usize);
    let mut exact = 0.0;
    for k in 1..=n {
        if gcd(ell, k) == 1 {
            let phi = sieve.totient(k);
            exact += phi as f64 / k as f64 * v.eval(k as f64);
        }
    }
    let main = limitdist::constant_c(ell)? * integral_main(v, n);
    Ok(TotientSumCheck { exact_sum: exact, main_term: main, residual: exact - main })
}

/// Σ_{n ≤ N} (φ(ℓn)/n)·V(n) versus its main term ℓ·C(ℓ)·∫₀ᴺ V.
pub fn scaled_totient_sum(ell: u64, n: u64, v: &SummandFunction) -> Result<TotientSumCheck> {
    if ell < 2 {
        return Err(Error::Domain(format!("modulus must be ≥ 2, got {ell}")));
    }
    if n < 1 {
        return Err(Error::Domain("N must be ≥ 1".into()));
    }
    let top = ell.checked_mul(n).expect("ℓ·N fits in u64");
    let sieve = Sieve::new(top as usize);
    let mut exact = 0.0;
    for k in 1..=n {
        let phi = sieve.totient(ell * k);
        exact += phi as f64 / k as f64 * v.eval(k as f64);
    }
    let main = ell as f64 * limitdist::constant_c(ell)? * integral_main(v, n);
    Ok(TotientSumCheck { exact_sum: exact, main_term: main, residual: exact - main })
}

/// Result of an inverse-equidistribution box count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquidistributionCheck {
    pub count: u64,
    pub prediction: f64,
}

/// Count pairs (a, b) ∈ boxI×boxJ with ab ≡ h (mod q) and gcd(b, q) = 1,
/// against the equidistribution prediction (φ(q)/q²)·|boxI|·|boxJ|.
///
/// Boxes are half-open real intervals `[lo, hi) ⊆ [0, q)`; `h` may be
/// negative (it is reduced mod q).
pub fn inverse_equidistribution_check(
    q: u64,
    h: i64,
    box_i: (f64, f64),
    box_j: (f64, f64),
) -> Result<EquidistributionCheck> {
    if q < 1 {
        return Err(Error::Domain("modulus must be ≥ 1".into()));
    }
    for &(lo, hi) in [&box_i, &box_j] {
        if !(0.0 <= lo && lo <= hi && hi <= q as f64) {
            return Err(Error::Domain(format!("box [{lo}, {hi}) must sit inside [0, {q})")));
        }
    }
    let h0 = h.rem_euclid(q as i64) as u64;
    let in_box = |(lo, hi): (f64, f64), k: u64| -> bool {
        let x = k as f64;
        lo <= x && x < hi
    };
    let mut count = 0u64;
    let mut b = box_j.0.ceil() as u64;
    while (b as f64) < box_j.1 {
        if gcd(b, q) == 1 {
            let inv = mod_inverse(b as i64, q)?;
            let a0 = ((h0 as u128 * inv as u128) % q as u128) as u64;
            if in_box(box_i, a0) {
                count += 1;
            }
        }
        b += 1;
    }
    let prediction =
        totient(q) as f64 / (q as f64 * q as f64) * (box_i.1 - box_i.0) * (box_j.1 - box_j.0);
    Ok(EquidistributionCheck { count, prediction })
}
