use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{FiberModel, Kind};
use crate::error::{Error, Result};
use crate::weighted_graphs::{Role, TreeVertex, WeightedTree, Zigzag};

/// A chain of fiber components hanging off the spine by its bridge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feather {
    /// Component ids, bridge first.
    pub components: Vec<usize>,
    /// Spine index the bridge meets.
    pub attached_to: usize,
    /// Spine index of the component carrying the bridge's blowup center.
    pub mother: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedDivisor {
    pub tree: WeightedTree,
    /// Tree ids along `C0 - C1 - ... - Cn`.
    pub spine: Vec<usize>,
    pub spine_weights: Zigzag,
    pub feathers: Vec<Feather>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarClass {
    Star,
    Plus,
}

/// Split the fiber minus a path into feathers, if it has the required shape.
fn feathers_off(model: &FiberModel, fiber: &WeightedTree, path: &[usize]) -> Option<Vec<(Vec<usize>, usize)>> {
    let on_path: BTreeSet<usize> = path.iter().copied().collect();
    let rest = fiber.remove(&on_path);
    let minus_one = BigInt::from(-1);
    let minus_two = BigInt::from(-2);
    let mut out = Vec::new();
    for comp in rest.components() {
        let sub = rest.induced(&comp);
        let order = sub.path_order()?;
        let links: Vec<(usize, usize)> = comp
            .iter()
            .flat_map(|&c| fiber.neighbors(c).into_iter().filter(|n| on_path.contains(n)).map(move |n| (c, n)))
            .collect();
        let [(bridge, host)] = links[..] else {
            return None;
        };
        let chain: Vec<usize> = if order[0] == bridge {
            order
        } else if *order.last().unwrap() == bridge {
            order.into_iter().rev().collect()
        } else {
            return None;
        };
        let w = |id: usize| &model.components[id].weight;
        if *w(chain[0]) > minus_one || chain[1..].iter().any(|&c| *w(c) > minus_two) {
            return None;
        }
        out.push((chain, host));
    }
    Some(out)
}

fn simple_paths_from_root(fiber: &WeightedTree) -> Vec<Vec<usize>> {
    let adj = fiber.adjacency();
    let mut out = Vec::new();
    let mut stack = vec![vec![0usize]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        for &n in &adj[&last] {
            if !path.contains(&n) {
                let mut p = path.clone();
                p.push(n);
                stack.push(p);
            }
        }
        out.push(path);
    }
    out
}

/// Boundary zigzag `F - S - (fiber path from T0)` with the remaining fiber as feathers.
///
/// `boundary` supplies the weights of `F` and `S`; any further entries must
/// match the computed spine.
pub fn extended_divisor(model: &FiberModel, boundary: &Zigzag) -> Result<ExtendedDivisor> {
    if boundary.len() < 2 {
        return Err(Error::BadBoundary("need at least the weights of F and S".into()));
    }
    let fiber = model.tree();
    let minus_two = BigInt::from(-2);
    let mut best: Option<(Vec<usize>, Vec<(Vec<usize>, usize)>)> = None;
    let rank = |path: &[usize], feathers: &[(Vec<usize>, usize)]| {
        let has_feather = !feathers.is_empty() || model.len() == 1;
        let negative = path.iter().all(|&c| model.components[c].weight <= minus_two) || model.len() == 1;
        (has_feather, negative, path.len())
    };
    for path in simple_paths_from_root(&fiber) {
        let Some(f) = feathers_off(model, &fiber, &path) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((bp, bf)) => {
                let (a, b) = (rank(&path, &f), rank(bp, bf));
                a > b || (a == b && path < *bp)
            }
        };
        if better {
            best = Some((path, f));
        }
    }
    let (path, raw) = best.ok_or_else(|| Error::BadBoundary("fiber does not split into a chain and feathers".into()))?;

    let m = model.len();
    let (f_id, s_id) = (m, m + 1);
    let mut vertices = vec![
        TreeVertex { id: f_id, weight: boundary.weights[0].clone(), role: Role::FiberAtInfinity, multiplicity: None },
        TreeVertex { id: s_id, weight: boundary.weights[1].clone(), role: Role::Section, multiplicity: None },
    ];
    let bridges: BTreeSet<usize> = raw.iter().map(|(c, _)| c[0]).collect();
    for c in &model.components {
        let role = if bridges.contains(&c.id) { Role::FeatherBridge } else { Role::Plain };
        vertices.push(TreeVertex { id: c.id, weight: c.weight.clone(), role, multiplicity: Some(c.multiplicity) });
    }
    let mut edges = vec![[f_id.min(s_id), f_id.max(s_id)], [0, s_id]];
    edges.extend(fiber.edges.iter().copied());
    edges.sort_unstable();
    let tree = WeightedTree { vertices, edges };

    let mut spine = vec![f_id, s_id];
    spine.extend(path.iter().copied());
    let index: BTreeMap<usize, usize> = spine.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let spine_weights = Zigzag::new(spine.iter().map(|&id| tree.weight(id).unwrap().clone()).collect());
    if boundary.len() > 2 && *boundary != spine_weights {
        return Err(Error::BadBoundary(format!("boundary {boundary} does not match spine {spine_weights}")));
    }
    let feathers = raw
        .into_iter()
        .map(|(components, host)| {
            let bridge = &model.components[components[0]];
            let mother = bridge.parent.and_then(|p| index.get(&p).copied()).or_else(|| {
                if bridge.kind != Kind::Inner {
                    return None;
                }
                let ch = model.center_chart(bridge.id);
                [Some(ch.x), ch.y].into_iter().flatten().find_map(|c| index.get(&c).copied())
            });
            Feather { components, attached_to: index[&host], mother }
        })
        .collect();
    Ok(ExtendedDivisor { tree, spine, spine_weights, feathers })
}

/// Mark each spine component as `*` or `+`.
pub fn classify_star_components(ext: &ExtendedDivisor) -> Vec<(usize, StarClass)> {
    let n = ext.spine.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let tail: Vec<&Feather> = ext.feathers.iter().filter(|f| f.attached_to > i).collect();
        let mut ids: BTreeSet<usize> = ext.spine[i + 1..].iter().copied().collect();
        for f in &tail {
            ids.extend(f.components.iter().copied());
        }
        let part = ext.tree.induced(&ids);
        let mut star = !part.is_contractible();
        if star {
            for f in tail.iter().filter(|f| f.mother.is_some_and(|t| t < i)) {
                let without = part.remove(&f.components.iter().copied().collect());
                if without.is_contractible() {
                    star = false;
                    break;
                }
            }
        }
        out.push((i, if star { StarClass::Star } else { StarClass::Plus }));
    }
    out
}
