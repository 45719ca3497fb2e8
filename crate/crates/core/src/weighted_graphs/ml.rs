use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::tree::{Role, WeightedTree};
use super::zigzag::{standardize, Zigzag};
use crate::error::{Error, Result};

/// Makar-Limanov complexity class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MlClass {
    ML0,
    ML1,
    ML2,
}

fn minimize(t: &WeightedTree) -> WeightedTree {
    let mut t = t.clone();
    let minus_one = -BigInt::one();
    loop {
        let cand = t
            .vertices
            .iter()
            .find(|v| v.weight == minus_one && v.role == Role::Plain && t.degree(v.id) <= 2 && t.len() > 1)
            .map(|v| v.id);
        match cand {
            Some(id) => t = t.blowdown_unchecked(id),
            None => return t,
        }
    }
}

/// Maximal paths from a leaf up to (not including) a vertex of degree at least three.
pub(crate) fn extremal_segments(t: &WeightedTree) -> Vec<Vec<usize>> {
    let adj = t.adjacency();
    let mut out = Vec::new();
    for (&leaf, nb) in &adj {
        if nb.len() != 1 {
            continue;
        }
        let mut seg = vec![leaf];
        let mut prev = leaf;
        let mut cur = nb[0];
        while adj[&cur].len() == 2 {
            seg.push(cur);
            let next = *adj[&cur].iter().find(|&&w| w != prev).unwrap();
            prev = cur;
            cur = next;
        }
        if adj[&cur].len() == 1 {
            // the whole tree is a chain
            seg.push(cur);
        }
        out.push(seg);
    }
    out
}

/// Classify a boundary dual graph.
pub fn ml_class(g: &WeightedTree, minimal: bool) -> Result<MlClass> {
    if g.is_empty() {
        return Err(Error::BadInput("empty graph".into()));
    }
    g.validate()?;
    let g = if minimal { g.clone() } else { minimize(g) };
    let admissible = |ids: &[usize]| ids.iter().all(|&id| *g.weight(id).unwrap() <= BigInt::from(-2));
    if let Some(z) = Zigzag::from_tree(&g) {
        let all: Vec<usize> = g.vertices.iter().map(|v| v.id).collect();
        if admissible(&all) {
            return Ok(MlClass::ML2);
        }
        return Ok(match standardize(&z) {
            Ok(s) if s.form == Zigzag::from_i64(&[0, 0, 0]) => MlClass::ML1,
            _ => MlClass::ML0,
        });
    }
    let segs = extremal_segments(&g);
    if segs.iter().all(|s| admissible(s)) {
        Ok(MlClass::ML2)
    } else {
        Ok(MlClass::ML1)
    }
}
