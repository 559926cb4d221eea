//! Exact tautological-ring engine for universal double ramification cycles.
//!
//! Classes are finite rational (or ℚ[r]) combinations of decorated graph strata.
//! Two evaluation modes exist: formal sums over prestable graphs with multidegree
//! (`Mode::Pic`) and classes on the moduli space of stable curves (`Mode::Moduli`).

pub mod arith;
pub mod calculus;
pub mod error;
pub mod graphs;
pub mod pixton;
pub mod tautring;
pub mod verify;
pub mod weightings;

pub use arith::Q;
pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
