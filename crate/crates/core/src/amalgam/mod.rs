//! Trees of groups, amalgams and graph-of-groups paths over group oracles.

mod gog;
mod group;
mod tree;

pub use gog::{gog_reduce, gog_reduce_all, GogEdge, GogPath, GraphOfGroups};
pub use group::{mat_inv, mat_mul, FiniteGroup, Group, Mat2, MatrixGroup};
pub use tree::{EdgeSpec, TreeOfGroups, VertexKey, Word};
