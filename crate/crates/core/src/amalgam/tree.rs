use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;

use serde_json::{json, Value};

use super::group::{FiniteGroup, Group};
use crate::error::{Error, Result};

/// An edge `P - Q` with its group embedded in both endpoint groups.
pub struct EdgeSpec<E> {
    pub ends: [usize; 2],
    /// Membership of the edge group's image in `G_{ends[i]}`.
    pub member: [Box<dyn Fn(&E) -> bool>; 2],
    /// `map[i]` carries the image in `G_{ends[i]}` to the image in the other end.
    pub map: [Box<dyn Fn(&E) -> E>; 2],
    /// Left coset representatives of the edge group in each end, identity included.
    pub transversal: [Vec<E>; 2],
}

impl<E: Clone + PartialEq + 'static> EdgeSpec<E> {
    /// Edge group given as a finite list of matching pairs `(in P, in Q)`.
    pub fn from_pairs(ends: [usize; 2], pairs: Vec<(E, E)>, transversal: [Vec<E>; 2]) -> Self {
        let left: Vec<E> = pairs.iter().map(|p| p.0.clone()).collect();
        let right: Vec<E> = pairs.iter().map(|p| p.1.clone()).collect();
        let (p1, p2) = (pairs.clone(), pairs);
        EdgeSpec {
            ends,
            member: [Box::new(move |e| left.contains(e)), Box::new(move |e| right.contains(e))],
            map: [
                Box::new(move |e| p1.iter().find(|p| p.0 == *e).map(|p| p.1.clone()).expect("not in edge group")),
                Box::new(move |e| p2.iter().find(|p| p.1 == *e).map(|p| p.0.clone()).expect("not in edge group")),
            ],
            transversal,
        }
    }
}

/// Letters `(vertex, element)`; the product in the amalgam.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<E> {
    pub letters: Vec<(usize, E)>,
}

impl<E> Word<E> {
    pub fn empty() -> Self {
        Word { letters: vec![] }
    }

    pub fn letter(v: usize, e: E) -> Self {
        Word { letters: vec![(v, e)] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl<E: Clone> Word<E> {
    pub fn concat(&self, o: &Word<E>) -> Word<E> {
        let mut letters = self.letters.clone();
        letters.extend(o.letters.iter().cloned());
        Word { letters }
    }
}

/// A vertex `g G_P` of the Bass-Serre tree: the normalized path from the base
/// vertex, each letter a coset representative, ending at `P` with the identity.
pub type VertexKey<E> = Vec<(usize, E)>;

/// Amalgam of vertex groups along a tree, with a base vertex.
pub struct TreeOfGroups<E> {
    pub groups: Vec<Box<dyn Group<E>>>,
    pub edges: Vec<EdgeSpec<E>>,
    pub base: usize,
    adj: Vec<Vec<(usize, usize)>>,
}

/// Path form: `verts[i]` adjacent to `verts[i+1]`, `elems[i]` in `G_{verts[i]}`.
#[derive(Clone, Debug)]
struct PathForm<E> {
    verts: Vec<usize>,
    elems: Vec<E>,
}

impl<E: Clone + Eq + Ord + Debug> TreeOfGroups<E> {
    pub fn new(groups: Vec<Box<dyn Group<E>>>, edges: Vec<EdgeSpec<E>>, base: usize) -> Result<Self> {
        let n = groups.len();
        if n == 0 || base >= n {
            return Err(Error::BadInput("need at least one vertex and a valid base".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::BadInput("a tree on n vertices has n - 1 edges".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            let [p, q] = e.ends;
            if p >= n || q >= n || p == q {
                return Err(Error::BadInput(format!("bad edge {p} - {q}")));
            }
            adj[p].push((q, k));
            adj[q].push((p, k));
            for side in 0..2 {
                let g = &groups[e.ends[side]];
                let t = &e.transversal[side];
                if !t.contains(&g.identity()) {
                    return Err(Error::BadInput(format!("transversal at {} lacks the identity", e.ends[side])));
                }
                if t.len() < 2 {
                    return Err(Error::BadInput(format!("edge group is not proper in vertex {}", e.ends[side])));
                }
            }
        }
        let t = TreeOfGroups { groups, edges, base, adj };
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([base]);
        seen[base] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &t.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.contains(&false) {
            return Err(Error::BadInput("graph is not connected".into()));
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    fn edge_between(&self, p: usize, q: usize) -> (usize, usize) {
        let k = self.adj[p].iter().find(|(w, _)| *w == q).expect("adjacent").1;
        let side = usize::from(self.edges[k].ends[0] != p);
        (k, side)
    }

    /// Vertices strictly after `from`, up to and including `to`.
    fn tree_path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut out = Vec::new();
        let mut v = to;
        while v != from {
            out.push(v);
            v = prev[v];
        }
        out.reverse();
        out
    }

    fn to_path(&self, w: &Word<E>, end: usize) -> Result<PathForm<E>> {
        let mut pf = PathForm { verts: vec![self.base], elems: vec![self.groups[self.base].identity()] };
        let walk = |pf: &mut PathForm<E>, to: usize| {
            for v in self.tree_path(*pf.verts.last().unwrap(), to) {
                pf.verts.push(v);
                pf.elems.push(self.groups[v].identity());
            }
        };
        for (v, g) in &w.letters {
            if *v >= self.len() {
                return Err(Error::BadInput(format!("no vertex {v}")));
            }
            if !self.groups[*v].contains(g) {
                return Err(Error::OracleViolation(format!("{g:?} is not in G_{v}")));
            }
            walk(&mut pf, *v);
            let last = pf.elems.last_mut().unwrap();
            *last = self.groups[*v].mul(last, g);
        }
        walk(&mut pf, end);
        Ok(pf)
    }

    /// `g = r c` with `r` from the transversal and `c` in the edge group.
    fn split(&self, k: usize, side: usize, g: &E) -> Result<(E, E)> {
        let e = &self.edges[k];
        let grp = &self.groups[e.ends[side]];
        for r in &e.transversal[side] {
            let c = grp.mul(&grp.inv(r), g);
            if (e.member[side])(&c) {
                return Ok((r.clone(), c));
            }
        }
        Err(Error::OracleViolation(format!("no coset representative for {g:?} at vertex {}", e.ends[side])))
    }

    fn normalize(&self, pf: &mut PathForm<E>) -> Result<()> {
        loop {
            for i in 0..pf.verts.len().saturating_sub(1) {
                let (p, q) = (pf.verts[i], pf.verts[i + 1]);
                let (k, side) = self.edge_between(p, q);
                let (r, c) = self.split(k, side, &pf.elems[i])?;
                let moved = (self.edges[k].map[side])(&c);
                if !self.groups[q].contains(&moved) {
                    return Err(Error::OracleViolation(format!("edge map left G_{q}")));
                }
                pf.elems[i] = r;
                pf.elems[i + 1] = self.groups[q].mul(&moved, &pf.elems[i + 1]);
            }
            let spur = (1..pf.verts.len().saturating_sub(1))
                .find(|&i| pf.verts[i - 1] == pf.verts[i + 1] && self.groups[pf.verts[i]].is_identity(&pf.elems[i]));
            let Some(i) = spur else { return Ok(()) };
            let v = pf.verts[i - 1];
            pf.elems[i - 1] = self.groups[v].mul(&pf.elems[i - 1], &pf.elems[i + 1]);
            pf.verts.drain(i..i + 2);
            pf.elems.drain(i..i + 2);
        }
    }

    /// Canonical reduced word; equal elements give identical letter lists.
    pub fn normal_form(&self, w: &Word<E>) -> Result<Word<E>> {
        let mut pf = self.to_path(w, self.base)?;
        self.normalize(&mut pf)?;
        let letters = pf
            .verts
            .into_iter()
            .zip(pf.elems)
            .filter(|(v, g)| !self.groups[*v].is_identity(g))
            .collect();
        Ok(Word { letters })
    }

    pub fn reduced_length(&self, w: &Word<E>) -> Result<usize> {
        Ok(self.normal_form(w)?.len())
    }

    pub fn mul(&self, u: &Word<E>, v: &Word<E>) -> Result<Word<E>> {
        self.normal_form(&u.concat(v))
    }

    pub fn inv(&self, w: &Word<E>) -> Word<E> {
        Word { letters: w.letters.iter().rev().map(|(v, g)| (*v, self.groups[*v].inv(g))).collect() }
    }

    pub fn equal(&self, u: &Word<E>, v: &Word<E>) -> Result<bool> {
        Ok(self.normal_form(u)? == self.normal_form(v)?)
    }

    /// Key of the vertex `g G_P`.
    pub fn vertex_key(&self, g: &Word<E>, p: usize) -> Result<VertexKey<E>> {
        let mut pf = self.to_path(g, p)?;
        self.normalize(&mut pf)?;
        let n = pf.elems.len();
        pf.elems[n - 1] = self.groups[p].identity();
        Ok(pf.verts.into_iter().zip(pf.elems).collect())
    }

    /// A word `g` with `key = g G_P`.
    pub fn key_word(&self, key: &VertexKey<E>) -> Word<E> {
        Word { letters: key.iter().filter(|(v, g)| !self.groups[*v].is_identity(g)).cloned().collect() }
    }

    /// Whether `x` fixes the vertex `g G_P`.
    pub fn fixes(&self, x: &Word<E>, g: &Word<E>, p: usize) -> Result<bool> {
        Ok(self.vertex_key(&x.concat(g), p)? == self.vertex_key(g, p)?)
    }

    /// Whether `w` lies in `G_P`.
    pub fn in_vertex_group(&self, w: &Word<E>, p: usize) -> Result<bool> {
        self.fixes(w, &Word::empty(), p)
    }

    fn act(&self, x: &Word<E>, key: &VertexKey<E>) -> Result<VertexKey<E>> {
        let p = key.last().unwrap().0;
        self.vertex_key(&x.concat(&self.key_word(key)), p)
    }

    /// A vertex of the Bass-Serre tree fixed by every generator, with a
    /// conjugator `g` such that `g^-1 gens g` lies in `G_P`.
    pub fn bounded_fixed_vertex(&self, gens: &[Word<E>], length_bound: usize, horizon: usize) -> Result<(Word<E>, usize)> {
        for g in gens {
            let l = self.reduced_length(g)?;
            if l > length_bound {
                return Err(Error::LengthExceeded(l, length_bound));
            }
        }
        let horizon = horizon.max(length_bound);
        let mut moves: Vec<Word<E>> = gens.to_vec();
        moves.extend(gens.iter().map(|g| self.inv(g)));
        let root: VertexKey<E> = vec![(self.base, self.groups[self.base].identity())];
        let mut orbit: BTreeSet<VertexKey<E>> = BTreeSet::from([root.clone()]);
        let mut queue = VecDeque::from([root]);
        while let Some(k) = queue.pop_front() {
            for m in &moves {
                let n = self.act(m, &k)?;
                if n.len() - 1 > horizon {
                    return Err(Error::NoFixedVertexWithinHorizon(horizon));
                }
                if orbit.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        let center = prune_to_center(&orbit, |v| self.groups[v].identity());
        let p = center.last().unwrap().0;
        let g = self.key_word(&center);
        for x in gens {
            debug_assert!(self.fixes(x, &g, p)?);
        }
        Ok((g, p))
    }
}

fn parent<E: Clone>(k: &[(usize, E)], identity: impl Fn(usize) -> E) -> Option<Vec<(usize, E)>> {
    if k.len() <= 1 {
        return None;
    }
    let mut p = k[..k.len() - 1].to_vec();
    let last = p.len() - 1;
    p[last].1 = identity(p[last].0);
    Some(p)
}

/// The center of the subtree spanned by a finite set of vertices.
fn prune_to_center<E: Clone + Ord>(points: &BTreeSet<VertexKey<E>>, identity: impl Fn(usize) -> E + Copy) -> VertexKey<E> {
    let mut count: BTreeMap<VertexKey<E>, usize> = BTreeMap::new();
    let mut up: BTreeMap<VertexKey<E>, VertexKey<E>> = BTreeMap::new();
    for k in points {
        let mut cur = k.clone();
        *count.entry(cur.clone()).or_default() += 1;
        while let Some(p) = parent(&cur, identity) {
            up.insert(cur.clone(), p.clone());
            *count.entry(p.clone()).or_default() += 1;
            cur = p;
        }
    }
    let total = points.len();
    let lca = count.iter().filter(|(_, &c)| c == total).max_by_key(|(k, _)| k.len()).unwrap().0.clone();
    let mut alive: BTreeSet<VertexKey<E>> = count.keys().cloned().collect();
    alive.retain(|k| {
        let mut cur = k.clone();
        loop {
            if cur == lca {
                return true;
            }
            match up.get(&cur) {
                Some(p) => cur = p.clone(),
                None => return false,
            }
        }
    });
    loop {
        if alive.len() <= 2 {
            return alive.into_iter().next().unwrap();
        }
        let mut degree: BTreeMap<&VertexKey<E>, usize> = alive.iter().map(|k| (k, 0)).collect();
        for k in &alive {
            if let Some(p) = up.get(k) {
                if alive.contains(p) {
                    *degree.get_mut(k).unwrap() += 1;
                    *degree.get_mut(p).unwrap() += 1;
                }
            }
        }
        let leaves: Vec<VertexKey<E>> = degree.into_iter().filter(|(_, d)| *d <= 1).map(|(k, _)| k.clone()).collect();
        for l in leaves {
            alive.remove(&l);
        }
    }
}

impl TreeOfGroups<usize> {
    /// `{"groups": [tables], "edges": [{"ends", "pairs", "transversals"}], "base"}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let groups: Vec<FiniteGroup> = v["groups"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing groups".into()))?
            .iter()
            .map(FiniteGroup::from_json)
            .collect::<Result<_>>()?;
        let elem = |g: usize, x: &Value| -> Result<usize> {
            let grp = groups.get(g).ok_or(Error::BadInput(format!("no vertex {g}")))?;
            match x {
                Value::String(s) => grp.index_of(s),
                Value::Number(k) => k.as_u64().map(|k| k as usize).filter(|&k| k < grp.order()),
                _ => None,
            }
            .ok_or_else(|| Error::BadInput(format!("{x} is not an element of vertex {g}")))
        };
        let mut edges = Vec::new();
        for e in v["edges"].as_array().ok_or_else(|| Error::Parse("missing edges".into()))? {
            let ends: [usize; 2] = serde_json::from_value(e["ends"].clone()).map_err(|x| Error::Parse(x.to_string()))?;
            let mut pairs = Vec::new();
            for p in e["pairs"].as_array().ok_or_else(|| Error::Parse("missing pairs".into()))? {
                pairs.push((elem(ends[0], &p[0])?, elem(ends[1], &p[1])?));
            }
            let tr = &e["transversals"];
            let side = |i: usize| -> Result<Vec<usize>> {
                tr[i].as_array().ok_or_else(|| Error::Parse("missing transversals".into()))?.iter().map(|x| elem(ends[i], x)).collect()
            };
            edges.push(EdgeSpec::from_pairs(ends, pairs, [side(0)?, side(1)?]));
        }
        let base = v.get("base").and_then(Value::as_u64).unwrap_or(0) as usize;
        let boxed: Vec<Box<dyn Group<usize>>> = groups.into_iter().map(|g| Box::new(g) as Box<dyn Group<usize>>).collect();
        TreeOfGroups::new(boxed, edges, base)
    }
}

impl<E: Clone + Eq + Ord + Debug> TreeOfGroups<E> {
    /// `[[vertex, name], ...]`.
    pub fn word_to_json(&self, w: &Word<E>) -> Value {
        Value::Array(w.letters.iter().map(|(v, g)| json!([v, self.groups[*v].name(g)])).collect())
    }

    pub fn word_from_json(&self, v: &Value) -> Result<Word<E>> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("word must be a list".into()))?;
        let mut letters = Vec::new();
        for l in arr {
            let vert = l[0].as_u64().ok_or_else(|| Error::Parse(format!("bad letter {l}")))? as usize;
            let grp = self.groups.get(vert).ok_or(Error::BadInput(format!("no vertex {vert}")))?;
            let name = match &l[1] {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let e = grp.parse(&name).ok_or_else(|| Error::BadInput(format!("{name} is not in G_{vert}")))?;
            letters.push((vert, e));
        }
        Ok(Word { letters })
    }
}
