use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::int_serde;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    #[default]
    Plain,
    Section,
    FiberAtInfinity,
    FeatherBridge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeVertex {
    pub id: usize,
    #[serde(with = "int_serde")]
    pub weight: BigInt,
    #[serde(default)]
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u64>,
}

impl TreeVertex {
    pub fn plain(id: usize, weight: i64) -> Self {
        TreeVertex { id, weight: BigInt::from(weight), role: Role::Plain, multiplicity: None }
    }
}

/// A weighted forest; [`WeightedTree::validate`] checks that it is a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct WeightedTree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<[usize; 2]>,
}

impl WeightedTree {
    pub fn new(vertices: Vec<TreeVertex>, edges: Vec<[usize; 2]>) -> Result<Self> {
        let t = WeightedTree { vertices, edges };
        t.validate()?;
        Ok(t)
    }

    /// A path with ids `0..n` and plain roles.
    pub fn chain(weights: &[i64]) -> Self {
        let vertices = weights.iter().enumerate().map(|(i, &w)| TreeVertex::plain(i, w)).collect();
        let edges = (1..weights.len()).map(|i| [i - 1, i]).collect();
        WeightedTree { vertices, edges }
    }

    pub fn validate(&self) -> Result<()> {
        let ids: BTreeSet<usize> = self.vertices.iter().map(|v| v.id).collect();
        if ids.len() != self.vertices.len() {
            return Err(Error::BadInput("duplicate vertex id".into()));
        }
        for [a, b] in &self.edges {
            if !ids.contains(a) || !ids.contains(b) || a == b {
                return Err(Error::BadInput(format!("bad edge ({a},{b})")));
            }
        }
        if !self.vertices.is_empty() && (self.edges.len() + 1 != self.vertices.len() || !self.is_connected()) {
            return Err(Error::BadInput("graph is not a tree".into()));
        }
        if self.vertices.iter().filter(|v| v.role == Role::Section).count() > 1 {
            return Err(Error::BadInput("more than one section vertex".into()));
        }
        if self.vertices.len() > 1 {
            for v in &self.vertices {
                if v.role == Role::FeatherBridge && self.degree(v.id) == 0 {
                    return Err(Error::BadInput(format!("isolated feather bridge {}", v.id)));
                }
            }
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.first().map(|v| v.id) else {
            return true;
        };
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in adj.get(&u).into_iter().flatten() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacency(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = self.vertices.iter().map(|v| (v.id, Vec::new())).collect();
        for [a, b] in &self.edges {
            adj.entry(*a).or_default().push(*b);
            adj.entry(*b).or_default().push(*a);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&[a, b]| if a == id { Some(b) } else if b == id { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|e| e[0] == id || e[1] == id).count()
    }

    pub fn vertex(&self, id: usize) -> Option<&TreeVertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn vertex_mut(&mut self, id: usize) -> Option<&mut TreeVertex> {
        self.vertices.iter_mut().find(|v| v.id == id)
    }

    pub fn weight(&self, id: usize) -> Option<&BigInt> {
        self.vertex(id).map(|v| &v.weight)
    }

    /// Vertex ids in path order, if the tree is a path.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if self.vertices.is_empty() {
            return Some(Vec::new());
        }
        let adj = self.adjacency();
        if adj.values().any(|n| n.len() > 2) {
            return None;
        }
        let start = *adj.iter().find(|(_, n)| n.len() <= 1)?.0;
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        while let Some(&next) = adj[&cur].iter().find(|&&w| Some(w) != prev) {
            order.push(next);
            prev = Some(cur);
            cur = next;
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    pub fn is_path(&self) -> bool {
        self.path_order().is_some()
    }

    /// Contract a plain `(-1)`-vertex of degree at most two.
    pub fn blowdown_step(&self, id: usize) -> Result<WeightedTree> {
        let v = self.vertex(id).ok_or(Error::BadIndex(id))?;
        let nb = self.neighbors(id);
        if v.weight != -BigInt::one() || v.role != Role::Plain || nb.len() > 2 {
            return Err(Error::NotContractibleVertex(id));
        }
        Ok(self.blowdown_unchecked(id))
    }

    pub(crate) fn blowdown_unchecked(&self, id: usize) -> WeightedTree {
        let nb = self.neighbors(id);
        let mut t = self.clone();
        t.vertices.retain(|v| v.id != id);
        t.edges.retain(|e| e[0] != id && e[1] != id);
        for &n in &nb {
            let w = t.vertex_mut(n).unwrap();
            w.weight += 1;
        }
        if let [a, b] = nb[..] {
            t.edges.push([a.min(b), a.max(b)]);
        }
        t
    }

    /// Remove a set of vertices together with their edges.
    pub fn remove(&self, ids: &BTreeSet<usize>) -> WeightedTree {
        WeightedTree {
            vertices: self.vertices.iter().filter(|v| !ids.contains(&v.id)).cloned().collect(),
            edges: self.edges.iter().filter(|e| !ids.contains(&e[0]) && !ids.contains(&e[1])).cloned().collect(),
        }
    }

    /// Keep only the given vertices.
    pub fn induced(&self, ids: &BTreeSet<usize>) -> WeightedTree {
        WeightedTree {
            vertices: self.vertices.iter().filter(|v| ids.contains(&v.id)).cloned().collect(),
            edges: self.edges.iter().filter(|e| ids.contains(&e[0]) && ids.contains(&e[1])).cloned().collect(),
        }
    }

    /// Connected components as id sets.
    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in &self.vertices {
            if seen.contains(&v.id) {
                continue;
            }
            let mut comp = BTreeSet::from([v.id]);
            let mut stack = vec![v.id];
            seen.insert(v.id);
            while let Some(u) = stack.pop() {
                for &w in &adj[&u] {
                    if seen.insert(w) {
                        comp.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Whether repeated `(-1)`-blowdowns can empty the graph.
    ///
    /// Exhaustive over blowdown orders, memoized on a canonical encoding.
    pub fn is_contractible(&self) -> bool {
        let mut memo = BTreeMap::new();
        contractible_rec(self, &mut memo)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in &self.vertices {
            let mut label = format!("{}:{}", v.id, v.weight);
            if let Some(m) = v.multiplicity {
                let _ = write!(label, " (m={m})");
            }
            let shape = match v.role {
                Role::Plain => "ellipse",
                Role::Section => "box",
                Role::FiberAtInfinity => "doublecircle",
                Role::FeatherBridge => "diamond",
            };
            let _ = writeln!(s, "  v{} [label=\"{}\", shape={}];", v.id, label, shape);
        }
        for [a, b] in &self.edges {
            let _ = writeln!(s, "  v{a} -- v{b};");
        }
        s.push_str("}\n");
        s
    }
}

fn canonical_key(t: &WeightedTree) -> (Vec<(usize, BigInt)>, Vec<[usize; 2]>) {
    let mut vs: Vec<(usize, BigInt)> = t.vertices.iter().map(|v| (v.id, v.weight.clone())).collect();
    vs.sort();
    let mut es: Vec<[usize; 2]> = t.edges.iter().map(|&[a, b]| [a.min(b), a.max(b)]).collect();
    es.sort();
    (vs, es)
}

type Key = (Vec<(usize, BigInt)>, Vec<[usize; 2]>);

fn contractible_rec(t: &WeightedTree, memo: &mut BTreeMap<Key, bool>) -> bool {
    if t.vertices.is_empty() {
        return true;
    }
    let key = canonical_key(t);
    if let Some(&r) = memo.get(&key) {
        return r;
    }
    let minus_one = -BigInt::one();
    let mut result = false;
    for v in &t.vertices {
        if v.weight == minus_one && t.degree(v.id) <= 2 {
            if contractible_rec(&t.blowdown_unchecked(v.id), memo) {
                result = true;
                break;
            }
        }
    }
    memo.insert(key, result);
    result
}
