//! Benchmark-only crate; the targets live in `benches/`.
//!
//! `benches/curves.rs` times the analytic layer (special function, the
//! limiting survival curve and its density, the quadrature-backed bracket),
//! `benches/engines.rs` the exact free-path engines (structural fast path
//! vs brute scan, the disc-lattice march, and the two billiard engines).
