//! Exact arithmetic for Cohen-Ramanujan sums.
//!
//! The Cohen-Ramanujan sum generalizes the classical Ramanujan sum by
//! replacing coprimality with the generalized gcd `(a, b)_s` (the largest
//! s-th power dividing both arguments):
//!
//! ```text
//! c_k^(s)(n) = sum over 1 <= h <= k^s with (h, k^s)_s = 1 of e^(2*pi*i*n*h / k^s)
//! ```
//!
//! This crate evaluates `c_k^(s)(n)` by several independent routes (a Mobius
//! divisor sum, a multiplicative prime-power formula, a Hoelder-type quotient,
//! and a slow high-precision trigonometric sum), verifies the structural
//! identities relating them over configurable grids, and implements the exact
//! coefficient calculus that moves series expansions between the first
//! variable (`sum a(k) c_k^(s)(n^s)`) and the second (`sum b(k/n*) c_n^(s)(k^s)`).
//!
//! Everything outside the [`real`] module is exact: big integers and big
//! rationals end to end. [`real`] provides the fixed-point big-float carrier
//! used by the trigonometric oracle, the zeta values, and the truncated-series
//! convergence reports.
//!
//! Module map:
//!
//! - [`arith`]: factorization, Mobius, Jordan and Klee totients, generalized
//!   gcd, core/star decomposition, divisor enumeration.
//! - [`cr`]: the fast evaluation routes and the reciprocity identity.
//! - [`oracles`]: slow independent reference implementations (direct
//!   exponential sums, exhaustive searches, counting totients).
//! - [`verify`]: data-driven identity sweeps with machine-readable reports.
//! - [`expansion`]: exact coefficient transforms between first- and
//!   second-variable series.
//! - [`klee`]: the Klee-function series `Phi_s(n) zeta(2s) / n` and its
//!   convergence reports.

pub mod arith;
pub mod cr;
pub mod expansion;
pub mod klee;
pub mod oracles;
pub mod rational;
pub mod real;
pub mod verify;

pub use arith::{Factorization, PosInt};
pub use cr::CrQuery;
pub use error::Error;
pub use rational::ExactRational;
pub use real::HighPrecReal;

mod error {
    /// Crate-wide error type.
    #[derive(Debug, Clone, thiserror::Error)]
    pub enum Error {
        /// A value that must be a positive integer was zero.
        #[error("value must be a positive integer")]
        ZeroValue,

        /// The trigonometric oracle could not round to an integer within the
        /// configured tolerance; retry with more precision bits.
        #[error(
            "residual {residual:e} exceeds tolerance {tolerance:e} at {precision} bits of precision"
        )]
        ToleranceExceeded {
            residual: f64,
            tolerance: f64,
            precision: u32,
        },

        /// The literal Hoelder-type quotient did not divide evenly.
        #[error("literal Hoelder form is not an integer at k={k}, n={n}, s={s}")]
        NonIntegralResult { k: String, n: String, s: u32 },

        /// A coefficient sequence has a nonzero entry outside its declared
        /// support rule.
        #[error("nonzero coefficient at index {index} violates the {rule} support rule")]
        SupportViolation { index: u64, rule: String },

        /// A verification point does not satisfy the identity's hypothesis.
        #[error("point violates the identity hypothesis: {0}")]
        HypothesisViolated(String),

        /// An input is too large for the operation's supported range.
        #[error("input out of supported range: {0}")]
        OutOfRange(String),

        /// Malformed serialized data.
        #[error("malformed input: {0}")]
        Malformed(String),
    }
}
