//! Exact q-series and numerical verification for the level-2 modular-form
//! differential systems: Ramanujan/Ramamani systems, Chazy and its level-2
//! analogue, Darboux-Halphen and the generalized Darboux-Halphen system, and
//! the Schwarz triangle function attached to Gamma_0(2).
//!
//! The exact layer ([`series`], [`catalog`], [`dsl`], [`identity`]) works over
//! the rationals with the formal symbol `lambda = pi i`; the numeric layer
//! ([`numeric`]) evaluates the same series in the upper half-plane and
//! integrates the nonlinear ODEs.

pub mod catalog;
pub mod dsl;
pub mod identity;
pub mod numeric;
pub mod series;

pub use series::{Agreement, GradedSeries, LaurentSeries, Mismatch, Rational, SeriesError};

/// Default truncation order, in integral powers of `q`.
pub const DEFAULT_ORDER: u32 = 64;
