use std::fmt::Debug;

use super::group::Group;
use crate::error::{Error, Result};

/// An oriented edge `sigma: source -> target` with the edge group's images
/// `kappa(G_sigma)` in the source and `lambda(G_sigma)` in the target.
pub struct GogEdge<E> {
    pub source: usize,
    pub target: usize,
    pub in_source: Box<dyn Fn(&E) -> bool>,
    pub in_target: Box<dyn Fn(&E) -> bool>,
    /// `lambda . kappa^-1`
    pub to_target: Box<dyn Fn(&E) -> E>,
    /// `kappa . lambda^-1`
    pub to_source: Box<dyn Fn(&E) -> E>,
    /// Left coset representatives of `kappa(G_sigma)` and `lambda(G_sigma)`, identity included.
    pub transversal: [Vec<E>; 2],
}

impl<E: Clone + PartialEq + 'static> GogEdge<E> {
    /// Edge group as matching pairs `(kappa(h), lambda(h))`.
    pub fn from_pairs(source: usize, target: usize, pairs: Vec<(E, E)>, transversal: [Vec<E>; 2]) -> Self {
        let (a, b, c, d) = (pairs.clone(), pairs.clone(), pairs.clone(), pairs);
        GogEdge {
            source,
            target,
            in_source: Box::new(move |e| a.iter().any(|p| p.0 == *e)),
            in_target: Box::new(move |e| b.iter().any(|p| p.1 == *e)),
            to_target: Box::new(move |e| c.iter().find(|p| p.0 == *e).map(|p| p.1.clone()).expect("in edge group")),
            to_source: Box::new(move |e| d.iter().find(|p| p.1 == *e).map(|p| p.0.clone()).expect("in edge group")),
            transversal,
        }
    }
}

pub struct GraphOfGroups<E> {
    pub groups: Vec<Box<dyn Group<E>>>,
    pub edges: Vec<GogEdge<E>>,
}

/// `(g_0, a_1, g_1, ..., a_n, g_n)`; an arrow is `(edge, inverted)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GogPath<E> {
    pub start: usize,
    pub elems: Vec<E>,
    pub arrows: Vec<(usize, bool)>,
}

impl<E: Clone + PartialEq + Debug> GraphOfGroups<E> {
    fn ends(&self, (k, inv): (usize, bool)) -> (usize, usize) {
        let e = &self.edges[k];
        if inv {
            (e.target, e.source)
        } else {
            (e.source, e.target)
        }
    }

    /// Vertex sequence of a composable path.
    pub fn check(&self, p: &GogPath<E>) -> Result<Vec<usize>> {
        if p.elems.len() != p.arrows.len() + 1 {
            return Err(Error::BadPath("need one group element between consecutive arrows".into()));
        }
        if p.start >= self.groups.len() {
            return Err(Error::BadPath(format!("no vertex {}", p.start)));
        }
        let mut verts = vec![p.start];
        for (i, &a) in p.arrows.iter().enumerate() {
            if a.0 >= self.edges.len() {
                return Err(Error::BadPath(format!("no edge {}", a.0)));
            }
            let (s, t) = self.ends(a);
            if s != verts[i] {
                return Err(Error::BadPath(format!("arrow {i} starts at {s}, path is at {}", verts[i])));
            }
            verts.push(t);
        }
        for (g, &v) in p.elems.iter().zip(&verts) {
            if !self.groups[v].contains(g) {
                return Err(Error::BadPath(format!("{g:?} is not in G_{v}")));
            }
        }
        Ok(verts)
    }

    /// Positions `i` where `(a_i, g_i, a_{i+1})` is a backtrack through the edge group.
    pub fn redexes(&self, p: &GogPath<E>) -> Vec<usize> {
        (0..p.arrows.len().saturating_sub(1))
            .filter(|&i| {
                let (a, b) = (p.arrows[i], p.arrows[i + 1]);
                if a.0 != b.0 || a.1 == b.1 {
                    return false;
                }
                let e = &self.edges[a.0];
                let x = &p.elems[i + 1];
                if a.1 {
                    (e.in_source)(x)
                } else {
                    (e.in_target)(x)
                }
            })
            .collect()
    }

    /// Slide edge group factors rightwards so that every element followed
    /// by an arrow is a coset representative.
    pub fn normalize(&self, p: &GogPath<E>, verts: &[usize]) -> Result<GogPath<E>> {
        let mut out = p.clone();
        for (i, &(k, inv)) in p.arrows.iter().enumerate() {
            let e = &self.edges[k];
            let (near, far) = (&self.groups[verts[i]], &self.groups[verts[i + 1]]);
            let (member, reps): (&dyn Fn(&E) -> bool, _) =
                if inv { (&e.in_target, &e.transversal[1]) } else { (&e.in_source, &e.transversal[0]) };
            let g = &out.elems[i];
            let (r, h) = reps
                .iter()
                .find_map(|r| {
                    let h = near.mul(&near.inv(r), g);
                    member(&h).then(|| (r.clone(), h))
                })
                .ok_or_else(|| Error::BadInput(format!("no coset representative for {g:?} at edge {k}")))?;
            let moved = if inv { (e.to_source)(&h) } else { (e.to_target)(&h) };
            out.elems[i] = r;
            out.elems[i + 1] = far.mul(&moved, &out.elems[i + 1]);
        }
        Ok(out)
    }

    /// `(g, s, h', s^-1, g') -> (g h g')`.
    pub fn contract(&self, p: &GogPath<E>, i: usize, verts: &[usize]) -> GogPath<E> {
        let a = p.arrows[i];
        let e = &self.edges[a.0];
        let x = &p.elems[i + 1];
        let h = if a.1 { (e.to_target)(x) } else { (e.to_source)(x) };
        let grp = &self.groups[verts[i]];
        let merged = grp.mul(&grp.mul(&p.elems[i], &h), &p.elems[i + 2]);
        let mut out = p.clone();
        out.elems[i] = merged;
        out.elems.drain(i + 1..i + 3);
        out.arrows.drain(i..i + 2);
        out
    }
}

/// Apply the path relations, leftmost first, until none applies; the result
/// has coset representatives in front of every arrow.
pub fn gog_reduce<E: Clone + PartialEq + Debug>(g: &GraphOfGroups<E>, p: &GogPath<E>) -> Result<GogPath<E>> {
    let mut cur = p.clone();
    loop {
        let verts = g.check(&cur)?;
        let Some(&i) = g.redexes(&cur).first() else {
            return g.normalize(&cur, &verts);
        };
        cur = g.contract(&cur, i, &verts);
    }
}

/// Every irreducible path reachable by some order of rule applications.
pub fn gog_reduce_all<E: Clone + PartialEq + Ord + Debug>(g: &GraphOfGroups<E>, p: &GogPath<E>) -> Result<Vec<GogPath<E>>> {
    let mut out: Vec<GogPath<E>> = Vec::new();
    let mut stack = vec![p.clone()];
    let mut seen = std::collections::BTreeSet::new();
    while let Some(cur) = stack.pop() {
        if !seen.insert(cur.clone()) {
            continue;
        }
        let verts = g.check(&cur)?;
        let rs = g.redexes(&cur);
        if rs.is_empty() {
            let nf = g.normalize(&cur, &verts)?;
            if !out.contains(&nf) {
                out.push(nf);
            }
            continue;
        }
        for i in rs {
            stack.push(g.contract(&cur, i, &verts));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::FiniteGroup;

    fn graph() -> GraphOfGroups<usize> {
        let groups: Vec<Box<dyn Group<usize>>> = vec![Box::new(FiniteGroup::cyclic(4)), Box::new(FiniteGroup::cyclic(6))];
        GraphOfGroups { groups, edges: vec![GogEdge::from_pairs(0, 1, vec![(0, 0), (2, 3)], [vec![0, 1], vec![0, 1, 2]])] }
    }

    #[test]
    fn relations() {
        let g = graph();
        let p = GogPath { start: 0, elems: vec![0, 0, 0], arrows: vec![(0, false), (0, true)] };
        assert_eq!(gog_reduce(&g, &p).unwrap(), GogPath { start: 0, elems: vec![0], arrows: vec![] });
        let p = GogPath { start: 0, elems: vec![1, 0, 2], arrows: vec![(0, false), (0, true)] };
        assert_eq!(gog_reduce(&g, &p).unwrap().elems, vec![3]);
        // lambda(h) = 3 comes back as kappa(h) = 2
        let p = GogPath { start: 0, elems: vec![1, 3, 0], arrows: vec![(0, false), (0, true)] };
        assert_eq!(gog_reduce(&g, &p).unwrap().elems, vec![3]);
        let p = GogPath { start: 0, elems: vec![1, 1, 0], arrows: vec![(0, false), (0, true)] };
        assert_eq!(gog_reduce(&g, &p).unwrap(), p);
        // 3 = 1 + kappa(h) slides across as lambda(h) = 3, then 4 = 1 + lambda(h) as kappa(h) = 2
        let p = GogPath { start: 0, elems: vec![3, 1, 0], arrows: vec![(0, false), (0, true)] };
        assert_eq!(gog_reduce(&g, &p).unwrap().elems, vec![1, 1, 2]);
        let bad = GogPath { start: 1, elems: vec![0, 0], arrows: vec![(0, false)] };
        assert_eq!(gog_reduce(&g, &bad).unwrap_err().code(), "bad_path");
    }
}
