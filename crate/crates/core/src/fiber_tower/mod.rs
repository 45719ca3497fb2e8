//! Blowup towers over a ruled surface and the special fiber they produce.

mod extended;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_series::{Coord, Scalar};
use crate::weighted_graphs::{fiber_self_intersection, Role, TreeVertex, WeightedTree};

pub use extended::{classify_star_components, extended_divisor, ExtendedDivisor, Feather, StarClass};

/// A blowup center `T_on(at)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Center {
    pub on: usize,
    pub at: Coord,
}

impl Center {
    pub fn new(on: usize, at: Coord) -> Self {
        Center { on, at }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSpec {
    pub base_point: Scalar,
    #[serde(default)]
    pub blowups: Vec<Center>,
}

impl BlowupSpec {
    pub fn new(base_point: Scalar, blowups: Vec<Center>) -> Self {
        BlowupSpec { base_point, blowups }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Root,
    Inner,
    Outer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: usize,
    #[serde(with = "crate::weighted_graphs::int_serde")]
    pub weight: BigInt,
    pub multiplicity: u64,
    pub kind: Kind,
    pub parent: Option<usize>,
    pub center: Option<Center>,
}

/// A node `T_a ∩ T_b`, written as a point of the newer component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub between: [usize; 2],
    pub repr: Center,
}

/// Components meeting at a point: `x` always, `y` only at a node.
///
/// In the local chart at the point, `x` is cut out by the first coordinate and
/// `y` by the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub x: usize,
    pub y: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberModel {
    pub base_point: Scalar,
    pub components: Vec<Component>,
    pub edges: Vec<[usize; 2]>,
    pub nodes: Vec<NodeEntry>,
    pub section_attach: usize,
    /// Chart of the center of each blowup, indexed by the component it created.
    charts: Vec<Chart>,
    /// Points already blown up.
    used: Vec<Center>,
}

impl FiberModel {
    fn root(base_point: Scalar) -> Self {
        FiberModel {
            base_point,
            components: vec![Component {
                id: 0,
                weight: BigInt::from(0),
                multiplicity: 1,
                kind: Kind::Root,
                parent: None,
                center: None,
            }],
            edges: Vec::new(),
            nodes: Vec::new(),
            section_attach: 0,
            charts: vec![Chart { x: 0, y: None }],
            used: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Chart of the center `p_i` blown up to create `T_i` (`i >= 1`).
    pub fn center_chart(&self, i: usize) -> Chart {
        self.charts[i]
    }

    pub fn center(&self, i: usize) -> Option<&Center> {
        self.components.get(i).and_then(|c| c.center.as_ref())
    }

    /// Chart at `T_j(q)` without checking whether the point still exists.
    pub fn chart_at(&self, c: &Center) -> Result<Chart> {
        if c.on >= self.len() {
            return Err(Error::BadComponent(c.on));
        }
        if c.on == 0 {
            return match c.at {
                Coord::Inf => Err(Error::CenterOnSection),
                _ => Ok(Chart { x: 0, y: None }),
            };
        }
        let p = self.charts[c.on];
        Ok(match &c.at {
            Coord::Inf => Chart { x: p.x, y: Some(c.on) },
            at if at.is_zero() => Chart { x: c.on, y: p.y },
            _ => Chart { x: c.on, y: None },
        })
    }

    /// Chart at a point of the current surface.
    pub fn locate(&self, c: &Center) -> Result<Chart> {
        let chart = self.chart_at(c)?;
        if self.used.contains(c) {
            return Err(Error::StaleCenter(c.on, c.at.to_string()));
        }
        Ok(chart)
    }

    fn blowup(&mut self, c: &Center) -> Result<()> {
        let chart = self.locate(c)?;
        let id = self.len();
        let (kind, mult) = match chart.y {
            None => (Kind::Outer, self.components[chart.x].multiplicity),
            Some(y) => (Kind::Inner, self.components[chart.x].multiplicity + self.components[y].multiplicity),
        };
        self.components[chart.x].weight -= 1;
        if let Some(y) = chart.y {
            self.components[y].weight -= 1;
            self.edges.retain(|e| *e != [chart.x.min(y), chart.x.max(y)]);
            self.edges.push([y.min(id), y.max(id)]);
        }
        self.edges.push([chart.x.min(id), chart.x.max(id)]);
        self.components.push(Component {
            id,
            weight: BigInt::from(-1),
            multiplicity: mult,
            kind,
            parent: Some(c.on),
            center: Some(c.clone()),
        });
        self.charts.push(chart);
        self.used.push(c.clone());
        self.refresh_nodes();
        Ok(())
    }

    fn refresh_nodes(&mut self) {
        let mut nodes = Vec::new();
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        for [a, b] in edges {
            let p = self.charts[b];
            let at = if p.x == a { Coord::Inf } else { Coord::zero() };
            debug_assert!(p.x == a || p.y == Some(a));
            nodes.push(NodeEntry { between: [a, b], repr: Center::new(b, at) });
        }
        self.nodes = nodes;
    }

    /// The fiber dual tree with multiplicities; ids are tower indices.
    pub fn tree(&self) -> WeightedTree {
        let vertices = self
            .components
            .iter()
            .map(|c| TreeVertex { id: c.id, weight: c.weight.clone(), role: Role::Plain, multiplicity: Some(c.multiplicity) })
            .collect();
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        WeightedTree { vertices, edges }
    }

    /// `sum m_i^2 w_i + 2 sum_edges m_i m_j`; zero for every valid model.
    pub fn self_intersection(&self) -> BigInt {
        fiber_self_intersection(&self.tree()).expect("multiplicities present")
    }

    /// Whether `S + fiber` is a path with `S` at one end.
    pub fn is_rooted_chain(&self) -> bool {
        let t = self.tree();
        t.is_path() && t.degree(0) <= 1
    }

    /// Indices of components created by outer blowups.
    pub fn outer_components(&self) -> Vec<usize> {
        self.components.iter().filter(|c| c.kind == Kind::Outer).map(|c| c.id).collect()
    }

    pub fn children(&self, id: usize) -> Vec<usize> {
        self.components.iter().filter(|c| c.parent == Some(id)).map(|c| c.id).collect()
    }
}

/// Replay a blowup sequence.
pub fn build_tower(spec: &BlowupSpec) -> Result<FiberModel> {
    let mut m = FiberModel::root(spec.base_point.clone());
    for c in &spec.blowups {
        m.blowup(c)?;
    }
    Ok(m)
}
