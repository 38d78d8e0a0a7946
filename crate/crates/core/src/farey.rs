//! Farey fractions of bounded denominator: enumeration, O(log Q) bracketing
//! of a real slope between consecutive fractions, the congruence subclass
//! that acts as the set of sinks, mediant chains toward a sink, and direct
//! enumeration of the intermediate pair sums against their predicted limits.
//!
//! Conventions used throughout: fractions live in [0,1]; a consecutive pair
//! (γ, γ′) of the sequence of order Q satisfies a′q − aq′ = 1, q + q′ > Q,
//! max{q, q′} ≤ Q; slope intervals are closed on the left and open on the
//! right, so a bracket always satisfies γ ≤ x < γ′.

use crate::{Error, Result};

/// A fraction a/q ∈ [0,1] in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReducedFraction {
    a: u64,
    q: u64,
}

impl ReducedFraction {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if q == 0 || a > q || crate::arith::gcd(a.max(1), q) != 1 {
            return Err(Error::Domain(format!("{a}/{q} is not a reduced fraction of [0,1]")));
        }
        Ok(Self { a, q })
    }

    pub fn numerator(&self) -> u64 {
        self.a
    }

    pub fn denominator(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64
    }

    /// Whether the fraction lies in the sink class: ℓ | (q − a).
    ///
    /// Sinks have no scatterer on their own ray — every lattice point
    /// (kq, ka) on it is congruence-excluded — so nearby slopes see long
    /// free paths.
    pub fn in_congruence_class(&self, ell: u64) -> bool {
        assert!(ell >= 1, "modulus must be positive");
        (self.q - self.a) % ell == 0
    }
}

impl std::fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

/// Two consecutive fractions of the sequence of order Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FareyPair {
    left: ReducedFraction,
    right: ReducedFraction,
    order: u64,
}

impl FareyPair {
    pub fn new(left: ReducedFraction, right: ReducedFraction, order: u64) -> Result<Self> {
        let det = left.q as i128 * right.a as i128 - left.a as i128 * right.q as i128;
        let consecutive = det == 1
            && left.q + right.q > order
            && left.q.max(right.q) <= order
            && order >= 1;
        if !consecutive {
            return Err(Error::Domain(format!(
                "{left} and {right} are not consecutive at order {order}"
            )));
        }
        Ok(Self { left, right, order })
    }

    pub fn left(&self) -> ReducedFraction {
        self.left
    }

    pub fn right(&self) -> ReducedFraction {
        self.right
    }

    pub fn order(&self) -> u64 {
        self.order
    }
}

/// The successor of `pair.right` in the sequence of order Q:
/// with s = ⌊(Q + q)/q′⌋, the next fraction is (s·a′ − a)/(s·q′ − q).
pub fn next_in_sequence(pair: &FareyPair) -> Result<ReducedFraction> {
    let (a, q) = (pair.left.a, pair.left.q);
    let (ap, qp) = (pair.right.a, pair.right.q);
    if ap == 1 && qp == 1 {
        return Err(Error::EndOfSequence);
    }
    let s = (pair.order + q) / qp;
    ReducedFraction::new(s * ap - a, s * qp - q)
}

/// Streaming ascending enumeration of the fractions of order Q inside
/// [lo, hi]. The full sequence at Q = 10⁴ has ~3·10⁷ entries, so callers
/// iterate rather than collect unless the order is small.
pub fn enumerate(order: u64, lo: f64, hi: f64) -> Result<FareySequence> {
    if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
        return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
    }
    let pair = bracket(lo, order)?;
    Ok(FareySequence { pair: Some(pair), emit_left: pair.left.value() >= lo, hi })
}

/// Iterator over fractions produced by [`enumerate`].
#[derive(Debug, Clone)]
pub struct FareySequence {
    pair: Option<FareyPair>,
    emit_left: bool,
    hi: f64,
}

impl Iterator for FareySequence {
    type Item = ReducedFraction;

    fn next(&mut self) -> Option<ReducedFraction> {
        let pair = self.pair?;
        if self.emit_left {
            self.emit_left = false;
            if pair.left.value() <= self.hi {
                return Some(pair.left);
            }
            self.pair = None;
            return None;
        }
        let out = pair.right;
        if out.value() > self.hi {
            self.pair = None;
            return None;
        }
        self.pair = match next_in_sequence(&pair) {
            Ok(succ) => Some(FareyPair { left: pair.right, right: succ, order: pair.order }),
            Err(_) => None,
        };
        Some(out)
    }
}

/// The consecutive pair γ ≤ x < γ′ of order Q, by batched Stern–Brocot
/// descent: each round moves one endpoint as many mediant steps toward x
/// as a closed-form estimate allows (adjusted locally by direct
/// comparison), so the number of rounds is O(log Q) — no scanning.
///
/// Ties in the floating predicates sit on measure-zero boundaries; the
/// convention is the IEEE comparison of a·1 against x·q, documented as
/// 1-ulp accurate. The returned pair always satisfies the consecutiveness
/// invariants exactly (integer arithmetic).
pub fn bracket(x: f64, order: u64) -> Result<FareyPair> {
    if order < 1 {
        return Err(Error::Domain("order must be ≥ 1".into()));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("slope {x} outside [0,1)")));
    }
    let (mut a, mut q, mut ap, mut qp) = (0u64, 1u64, 1u64, 1u64);
    while q + qp <= order {
        if (a + ap) as f64 <= x * (q + qp) as f64 {
            // Mediant at or below x: advance the left endpoint. Steps k
            // stay valid while a + k·a′ ≤ x(q + k·q′) and q + k·q′ ≤ Q.
            let cap = (order - q) / qp;
            let denom = ap as f64 - x * qp as f64;
            let mut k = if denom > 0.0 {
                let est = ((x * q as f64 - a as f64) / denom).floor();
                if est.is_finite() { (est as u64).clamp(1, cap) } else { cap }
            } else {
                1
            };
            while k > 1 && (a + k * ap) as f64 > x * ((q + k * qp) as f64) {
                k -= 1;
            }
            while k < cap && (a + (k + 1) * ap) as f64 <= x * ((q + (k + 1) * qp) as f64) {
                k += 1;
            }
            a += k * ap;
            q += k * qp;
        } else {
            // Mediant above x: advance the right endpoint. Steps k stay
            // valid while a′ + k·a > x(q′ + k·q).
            let cap = (order - qp) / q;
            let denom = x * q as f64 - a as f64;
            let mut k = if denom > 0.0 {
                let est = ((ap as f64 - x * qp as f64) / denom).ceil() - 1.0;
                if est.is_finite() { (est as u64).clamp(1, cap) } else { cap }
            } else {
                1
            };
            while k > 1 && (ap + k * a) as f64 <= x * ((qp + k * q) as f64) {
                k -= 1;
            }
            while k < cap && (ap + (k + 1) * a) as f64 > x * ((qp + (k + 1) * q) as f64) {
                k += 1;
            }
            ap += k * a;
            qp += k * q;
        }
    }
    FareyPair::new(ReducedFraction { a, q }, ReducedFraction { a: ap, q: qp }, order)
}

/// The mediant chain a_k = k·a + a′, q_k = k·q + q′ descending from γ′
/// toward the left fraction γ of a pair; the fractions γ_k = a_k/q_k
/// strictly decrease to γ and stay in lowest terms automatically.
#[derive(Debug, Clone, Copy)]
pub struct MediantChain {
    a: u64,
    q: u64,
    ap: u64,
    qp: u64,
}

impl MediantChain {
    pub fn new(pair: &FareyPair) -> Self {
        Self { a: pair.left.a, q: pair.left.q, ap: pair.right.a, qp: pair.right.q }
    }

    pub fn numerator(&self, k: u64) -> u64 {
        k * self.a + self.ap
    }

    pub fn denominator(&self, k: u64) -> u64 {
        k * self.q + self.qp
    }

    /// γ_k in lowest terms (the chain determinant a_k·q − a·q_k = 1 forces
    /// coprimality).
    pub fn fraction(&self, k: u64) -> ReducedFraction {
        ReducedFraction { a: self.numerator(k), q: self.denominator(k) }
    }

    pub fn gamma(&self, k: u64) -> f64 {
        self.numerator(k) as f64 / self.denominator(k) as f64
    }

    /// The band boundary t_k = (a_k − ε)/q_k, extended by t_{−1} = γ′.
    /// Strictly decreasing in k with limit γ.
    pub fn t(&self, k: i64, eps: f64) -> f64 {
        if k == -1 {
            return self.ap as f64 / self.qp as f64;
        }
        let k = k as u64;
        (self.numerator(k) as f64 - eps) / self.denominator(k) as f64
    }
}

/// Which scatterer column a slope inside a sink cell exits through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SinkExit {
    /// Band index: the slope lies strictly between boundaries k+1 and k.
    pub k: i64,
    /// Exit column q_{k+1} (the free path of the horizontal model).
    pub q_exit: u64,
    /// Height a_{k+1} of the scatterer hit at the exit column.
    pub a_exit: u64,
}

/// Locates the slope x within the band decomposition of a cell whose LEFT
/// fraction γ is a sink: the unique k ≥ −1 with t_{k+1} < x < t_k gives
/// exit column q_{k+1} = (k+1)q + q′.
///
/// The predicate is evaluated exactly as the brute scan does — the signed
/// distance a_k − x·q_k at the candidate column compared against ε — so
/// both engines agree bit-for-bit away from boundaries. A slope equal to
/// some t_k (distance exactly ε, a tangent hit) signals `AtBoundary`; a
/// band index beyond ⌈Λ_max·Q/q⌉ signals `BeyondHorizon` (the chain
/// escapes every path length the caller cares about).
pub fn sink_chain_value(pair: &FareyPair, x: f64, eps: f64, lambda_max: f64) -> Result<SinkExit> {
    let (a, q) = (pair.left.a, pair.left.q);
    let (ap, qp) = (pair.right.a, pair.right.q);
    if !(eps > 0.0 && eps < 0.5) || !lambda_max.is_finite() || lambda_max <= 0.0 {
        return Err(Error::Domain(format!("invalid ε = {eps} or horizon {lambda_max}")));
    }
    // Distance of the ray from the chain point (q_k, a_k): d_k = a_k − x·q_k,
    // strictly decreasing in k by step x·q − a when x > γ.
    let step = x * q as f64 - a as f64;
    let d0 = ap as f64 - x * qp as f64;
    if d0 <= 0.0 {
        return Err(Error::Domain(format!("slope {x} not inside the cell")));
    }
    if step <= 0.0 {
        // x at or beyond the sink value in floating terms: infinite chain.
        return Err(Error::BeyondHorizon);
    }
    let d_at = |k: i64| (k as f64 * a as f64 + ap as f64) - x * (k as f64 * q as f64 + qp as f64);
    if d0 < eps {
        return Ok(SinkExit { k: -1, q_exit: qp, a_exit: ap });
    }
    if d0 == eps {
        return Err(Error::AtBoundary);
    }
    let k_cap = (lambda_max * pair.order as f64 / q as f64).ceil() as i64 + 1;
    let mut k = (((d0 - eps) / step).floor() as i64).max(0);
    if k > k_cap {
        return Err(Error::BeyondHorizon);
    }
    while k > 0 && d_at(k) < eps {
        k -= 1;
    }
    while d_at(k + 1) >= eps {
        k += 1;
        if k > k_cap {
            return Err(Error::BeyondHorizon);
        }
    }
    if d_at(k) == eps {
        return Err(Error::AtBoundary);
    }
    let kk = (k + 1) as u64;
    Ok(SinkExit { k, q_exit: kk * q + qp, a_exit: kk * a + ap })
}

/// Mirror of [`sink_chain_value`] for a cell whose RIGHT fraction γ′ is the
/// sink: the primed chain a′_k = k·a′ + a, q′_k = k·q′ + q ascends toward
/// γ′ with boundaries u_k = (a′_k + ε)/q′_k, and the band u_k ≤ x < u_{k+1}
/// exits at q′_{k+1}. A slope below u₀ exits directly at the left column q
/// (reported as k = −1).
pub fn sink_chain_value_right(
    pair: &FareyPair,
    x: f64,
    eps: f64,
    lambda_max: f64,
) -> Result<SinkExit> {
    let (a, q) = (pair.left.a, pair.left.q);
    let (ap, qp) = (pair.right.a, pair.right.q);
    if !(eps > 0.0 && eps < 0.5) || !lambda_max.is_finite() || lambda_max <= 0.0 {
        return Err(Error::Domain(format!("invalid ε = {eps} or horizon {lambda_max}")));
    }
    // d′_k = x·q′_k − a′_k, decreasing in k by step a′ − x·q′ when x < γ′.
    let step = ap as f64 - x * qp as f64;
    let d0 = x * q as f64 - a as f64;
    if d0 < 0.0 {
        return Err(Error::Domain(format!("slope {x} not inside the cell")));
    }
    if step <= 0.0 {
        return Err(Error::BeyondHorizon);
    }
    let d_at = |k: i64| x * (k as f64 * qp as f64 + q as f64) - (k as f64 * ap as f64 + a as f64);
    if d0 < eps {
        return Ok(SinkExit { k: -1, q_exit: q, a_exit: a });
    }
    if d0 == eps {
        return Err(Error::AtBoundary);
    }
    let k_cap = (lambda_max * pair.order as f64 / qp as f64).ceil() as i64 + 1;
    let mut k = (((d0 - eps) / step).floor() as i64).max(0);
    if k > k_cap {
        return Err(Error::BeyondHorizon);
    }
    while k > 0 && d_at(k) < eps {
        k -= 1;
    }
    while d_at(k + 1) >= eps {
        k += 1;
        if k > k_cap {
            return Err(Error::BeyondHorizon);
        }
    }
    if d_at(k) == eps {
        return Err(Error::AtBoundary);
    }
    let kk = (k + 1) as u64;
    Ok(SinkExit { k, q_exit: kk * qp + q, a_exit: kk * ap + a })
}

/// An enumerated sum next to its predicted limit value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumCheck {
    pub enumerated: f64,
    pub predicted: f64,
}

impl SumCheck {
    pub fn rel_err(&self) -> f64 {
        if self.predicted == 0.0 {
            self.enumerated.abs()
        } else {
            (self.enumerated - self.predicted).abs() / self.predicted.abs()
        }
    }
}

const MAX_SUM_ORDER: u64 = 10_000;

fn check_sum_order(order: u64) -> Result<()> {
    if order == 0 || order > MAX_SUM_ORDER {
        return Err(Error::Domain(format!(
            "order {order} outside the enumeration budget 1..={MAX_SUM_ORDER}"
        )));
    }
    Ok(())
}

/// Walks consecutive pairs (γ, γ′) with γ ∈ [lo, hi], including the pair
/// whose right endpoint straddles hi.
fn walk_pairs(order: u64, lo: f64, hi: f64, mut body: impl FnMut(&FareyPair)) -> Result<()> {
    let mut pair = bracket(lo, order)?;
    loop {
        let lv = pair.left.value();
        if lv > hi {
            return Ok(());
        }
        if lv >= lo {
            body(&pair);
        }
        match next_in_sequence(&pair) {
            Ok(succ) => pair = FareyPair { left: pair.right, right: succ, order },
            Err(_) => return Ok(()),
        }
    }
}

fn arc_measure(lo: f64, hi: f64) -> f64 {
    hi.atan() - lo.atan()
}

/// The pair sum with both fractions outside the sink class and
/// min{q, q′} > λQ, weight 1/(qq′)·1/(1+γ²), against its predicted limit
/// c_I·A(ℓ)·I₁(λ).
pub fn sum_a(interval: (f64, f64), order: u64, lambda: f64, ell: u64) -> Result<SumCheck> {
    check_sum_order(order)?;
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("need λ ∈ (0,1], got {lambda}")));
    }
    let (lo, hi) = interval;
    let threshold = lambda * order as f64;
    let mut total = 0.0;
    walk_pairs(order, lo, hi, |pair| {
        let (l, r) = (pair.left, pair.right);
        if l.in_congruence_class(ell) || r.in_congruence_class(ell) {
            return;
        }
        let (q, qp) = (l.q as f64, r.q as f64);
        if q.min(qp) > threshold {
            let g = l.value();
            total += 1.0 / (q * qp) / (1.0 + g * g);
        }
    })?;
    let predicted =
        arc_measure(lo, hi) * crate::limitdist::constant_a(ell)? * crate::limitdist::i1(lambda)?;
    Ok(SumCheck { enumerated: total, predicted })
}

/// The mixed pair sum with q ≤ λQ < q′, weight (1−εq′)/(qq′)·1/(1+γ′²) at
/// ε = 1/Q, against c_I·A(ℓ)·I₂(λ).
pub fn sum_b(interval: (f64, f64), order: u64, lambda: f64, ell: u64) -> Result<SumCheck> {
    check_sum_order(order)?;
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("need λ ∈ (0,1], got {lambda}")));
    }
    let (lo, hi) = interval;
    let eps = 1.0 / order as f64;
    let threshold = lambda * order as f64;
    let mut total = 0.0;
    walk_pairs(order, lo, hi, |pair| {
        let (l, r) = (pair.left, pair.right);
        if l.in_congruence_class(ell) || r.in_congruence_class(ell) {
            return;
        }
        let (q, qp) = (l.q as f64, r.q as f64);
        if q <= threshold && threshold < qp {
            let g = r.value();
            total += (1.0 - eps * qp) / (q * qp) / (1.0 + g * g);
        }
    })?;
    let predicted =
        arc_measure(lo, hi) * crate::limitdist::constant_a(ell)? * crate::limitdist::i2(lambda)?;
    Ok(SumCheck { enumerated: total, predicted })
}

/// The mirror of [`sum_b`]: q′ ≤ λQ < q, weight (1−εq)/(qq′)·1/(1+γ²),
/// same predicted limit c_I·A(ℓ)·I₂(λ).
pub fn sum_c(interval: (f64, f64), order: u64, lambda: f64, ell: u64) -> Result<SumCheck> {
    check_sum_order(order)?;
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!("need λ ∈ (0,1], got {lambda}")));
    }
    let (lo, hi) = interval;
    let eps = 1.0 / order as f64;
    let threshold = lambda * order as f64;
    let mut total = 0.0;
    walk_pairs(order, lo, hi, |pair| {
        let (l, r) = (pair.left, pair.right);
        if l.in_congruence_class(ell) || r.in_congruence_class(ell) {
            return;
        }
        let (q, qp) = (l.q as f64, r.q as f64);
        if qp <= threshold && threshold < q {
            let g = l.value();
            total += (1.0 - eps * q) / (q * qp) / (1.0 + g * g);
        }
    })?;
    let predicted =
        arc_measure(lo, hi) * crate::limitdist::constant_a(ell)? * crate::limitdist::i2(lambda)?;
    Ok(SumCheck { enumerated: total, predicted })
}

/// The sink-cell contribution to the tail: for each sink γ the band count
/// K = max{0, ⌊(λQ − q′)/q⌋} enters with weight (1−εq)/(q(Kq+q′))·1/(1+γ²),
/// against the predicted (c_I·C(ℓ)/ℓ)·H₃(λ), λ > 1.
pub fn sum_sink(interval: (f64, f64), order: u64, lambda: f64, ell: u64) -> Result<SumCheck> {
    check_sum_order(order)?;
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("need λ > 1, got {lambda}")));
    }
    let (lo, hi) = interval;
    let eps = 1.0 / order as f64;
    let mut total = 0.0;
    walk_pairs(order, lo, hi, |pair| {
        let l = pair.left;
        if !l.in_congruence_class(ell) {
            return;
        }
        let (q, qp) = (l.q as f64, pair.right.q as f64);
        let kk = ((lambda * order as f64 - qp) / q).floor().max(0.0);
        let g = l.value();
        total += (1.0 - eps * q) / (q * (kk * q + qp)) / (1.0 + g * g);
    })?;
    let predicted = arc_measure(lo, hi) * crate::limitdist::constant_c(ell)? / ell as f64
        * crate::limitdist::h3(lambda)?;
    Ok(SumCheck { enumerated: total, predicted })
}
