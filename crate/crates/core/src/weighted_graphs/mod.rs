//! Integer-weighted trees and chains.

mod contract;
mod ml;
mod tree;
mod zigzag;

pub use contract::{contraction_order, fiber_self_intersection, infer_multiplicities};
pub use ml::{ml_class, MlClass};
pub use tree::{Role, TreeVertex, WeightedTree};
pub use zigzag::{
    elementary_transform, replay, revert, standardize, Direction, End, Move, Standardized, Zigzag,
};

/// Serde helper: integers as JSON numbers when they fit, strings otherwise.
pub(crate) mod int_serde {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string().parse().map_err(serde::de::Error::custom),
            serde_json::Value::String(s) => s.trim().parse().map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!("expected integer, got {other}"))),
        }
    }
}
