//! Exact scalars and truncated power series.

mod scalar;
mod series;

pub use scalar::{Coord, Field, Radical, Scalar, Q};
pub use series::{solve_substitution, Poly, Series};

/// Default working truncation for a family of Puiseux data.
pub fn default_truncation(max_d: usize, n: usize) -> usize {
    max_d + n + 4
}
