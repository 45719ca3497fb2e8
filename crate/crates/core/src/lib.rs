//! Exact combinatorics for A¹-fibrations on normal affine surfaces.
//!
//! The crate works entirely over exact arithmetic: integer-weighted dual
//! graphs, blowup towers over a ruled surface, truncated power series with
//! coefficients in a radical extension of the rationals, Puiseux arc spaces,
//! and the stabilizer equations cut out by a special fiber.

pub mod amalgam;
pub mod dpd;
pub mod error;
pub mod fiber_tower;
pub mod formal_series;
pub mod puiseux;
pub mod stabilizer;
pub mod weighted_graphs;

pub use error::{Error, Result};

/// Version tag written into every serialized report.
pub const REPORT_VERSION: &str = "1";
