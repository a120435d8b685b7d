//! # frobstat
//!
//! Frobenius traces of hyperelliptic Jacobians over prime fields, and the
//! arithmetic statistics built on them:
//!
//! * [`ffield`]: prime and small-degree extension fields, quadratic characters.
//! * [`curves`]: curve models, bad primes, point counting, Weil polynomials and
//!   the bulk trace sweep producing [`archive::TraceArchive`] files.
//! * [`matcount`]: orders and trace-class counts of `GSp_{2g}(Z/mZ)`, by
//!   exhaustive enumeration and by closed formulas, Kloosterman moments, and
//!   the conjugacy-class dimension search over eigenvalue profiles.
//! * [`euler`]: the convergent Euler products `P_{g,t}`, Lang–Trotter style
//!   constants assembled from image data, and the normalised class weights
//!   `c_{p,m}`, `f_p^{(m)}`.
//! * [`satotate`]: Sato–Tate trace densities (closed forms for `g <= 2`,
//!   Weyl-measure Monte Carlo for any `g`) and empirical histograms.
//! * [`stats`]: `π_A(x, t)`, distinct-prime-factor statistics, Erdős–Kac
//!   distribution and moments, non-lacunarity fractions.
//!
//! The `book/` directory at the repository root walks through the
//! mathematics; every Rust snippet in it is compiled and run as a doc-test of
//! this crate.

pub mod archive;
pub mod arith;
pub mod curves;
pub mod euler;
pub mod ffield;
pub mod matcount;
pub mod quad;
pub mod satotate;
pub mod sieve;
pub mod stats;

pub use archive::{FrobeniusRecord, TraceArchive};
pub use curves::CurveModel;

/// Default cap on brute-force work (matrix membership tests, field elements
/// visited, tuples scanned) for a single call.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Raised when a brute-force computation would exceed its work budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("work budget exceeded: {needed} steps needed, limit is {limit}")]
pub struct BudgetExceeded {
    pub needed: u128,
    pub limit: u64,
}

impl BudgetExceeded {
    pub(crate) fn check(needed: u128, limit: u64) -> Result<(), BudgetExceeded> {
        if needed > limit as u128 {
            Err(BudgetExceeded { needed, limit })
        } else {
            Ok(())
        }
    }
}

// The book chapters double as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/point_counting.md")]
    mod point_counting {}
    #[doc = include_str!("../../../book/src/symplectic.md")]
    mod symplectic {}
    #[doc = include_str!("../../../book/src/kloosterman.md")]
    mod kloosterman {}
    #[doc = include_str!("../../../book/src/euler_products.md")]
    mod euler_products {}
    #[doc = include_str!("../../../book/src/sato_tate.md")]
    mod sato_tate {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
    #[doc = include_str!("../../../book/src/class_dimensions.md")]
    mod class_dimensions {}
    #[doc = include_str!("../../../book/src/archive_format.md")]
    mod archive_format {}
}
