//! Stabilizers of Puiseux arc spaces in the group of germs `(x, y) -> (a x, Q(x) y + P(x))`.

pub mod lattice;
mod mpoly;
mod report;

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber_tower::{FiberModel, Kind};
use crate::formal_series::{Field, Poly, Scalar, Series};
use crate::puiseux::{pui_of_center, split_reg_sing, PuiseuxSpace};

pub use mpoly::MPoly;
pub use report::{aut_report, AutReport, BaseCurve, FiberReport, Fibration, Flags, TorusSummary};

fn ceil_div(d: u32, n: u32) -> usize {
    d.div_ceil(n) as usize
}

/// `lhs = rhs` over the unknowns of a [`ConstraintSystem`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: MPoly,
    pub rhs: MPoly,
}

/// Equations on `a, b_0.., c_0.., alpha_1..` for one space.
///
/// Unknown layout: `a`, then `b_0..b_{N-1}`, then `c_0..c_{N-1}`, then the alphas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub n_trunc: usize,
    pub alpha_orders: Vec<u32>,
    pub equations: Vec<Equation>,
}

impl ConstraintSystem {
    pub fn nvars(&self) -> usize {
        1 + 2 * self.n_trunc + self.alpha_orders.len()
    }

    pub fn names(&self) -> Vec<String> {
        let mut v = vec!["a".to_string()];
        v.extend((0..self.n_trunc).map(|j| format!("b{j}")));
        v.extend((0..self.n_trunc).map(|j| format!("c{j}")));
        v.extend(alpha_names(self.alpha_orders.len()));
        v
    }

    pub fn to_strings(&self) -> Vec<String> {
        let names = self.names();
        self.equations.iter().map(|e| format!("{} = {}", e.lhs.fmt_with(&names), e.rhs.fmt_with(&names))).collect()
    }

    /// Values in the unknown layout for a germ truncated at `N`.
    pub fn values_of(&self, g: &FiberAut) -> Vec<Scalar> {
        let n = self.n_trunc;
        let mut v = vec![g.a.clone()];
        v.extend((0..n).map(|j| g.q.coeff(j)));
        v.extend((0..n).map(|j| g.p.coeff(j)));
        v.extend(g.alphas.iter().cloned());
        v
    }

    pub fn check(&self, g: &FiberAut) -> Result<bool> {
        let vals = self.values_of(g);
        for e in &self.equations {
            if e.lhs.eval(&vals)? != e.rhs.eval(&vals)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn alpha_names(k: usize) -> Vec<String> {
    if k == 1 {
        vec!["alpha".into()]
    } else {
        (1..=k).map(|i| format!("alpha{i}")).collect()
    }
}

/// A germ `(x, y) -> (a x, Q(x) y + P(x))`, with chosen roots `alpha_k` of `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberAut {
    pub a: Scalar,
    pub q: Poly,
    pub p: Poly,
    pub alphas: Vec<Scalar>,
}

impl FiberAut {
    pub fn identity(k: usize) -> Self {
        FiberAut { a: Scalar::one(), q: Poly::constant(Scalar::one()), p: Poly::zero(), alphas: vec![Scalar::one(); k] }
    }

    /// `self ∘ other`, truncated below `x^n`.
    pub fn compose(&self, other: &FiberAut, n: usize) -> FiberAut {
        let q1 = self.q.scale_var(&other.a);
        let p1 = self.p.scale_var(&other.a);
        FiberAut {
            a: self.a.mul(&other.a),
            q: q1.mul(&other.q).truncate(n),
            p: q1.mul(&other.p).add(&p1).truncate(n),
            alphas: self.alphas.iter().zip(&other.alphas).map(|(x, y)| x.mul(y)).collect(),
        }
    }

    /// Image of an arc `(x(t), y(t))`.
    pub fn apply(&self, x: &Series, y: &Series) -> Result<(Series, Series)> {
        let order = x.order().min(y.order());
        let q = self.q.to_series(order).compose(x)?;
        let p = self.p.to_series(order).compose(x)?;
        Ok((x.scale(&self.a), q.mul(y).add(&p)))
    }
}

/// Equations of `Stab(w)` for a space in base form.
pub fn stab_single(w: &PuiseuxSpace) -> Result<ConstraintSystem> {
    if !w.is_base() {
        return Err(Error::BadInput("space must be in base form".into()));
    }
    let n = ceil_div(w.d, w.n);
    let k = usize::from(w.n > 1);
    let nv = 1 + 2 * n + k;
    let (reg, sing) = split_reg_sing(&w.psi, w.n);
    let a = MPoly::var(nv, 0);
    let b = |j: usize| MPoly::var(nv, 1 + j);
    let c = |j: usize| MPoly::var(nv, 1 + n + j);
    let mut equations = Vec::new();
    // P = reg(a x) - reg(x) Q(x) mod x^N
    for m in 0..n {
        let mut rhs = a.pow(m as u32).scale(&reg.coeff(m));
        for i in 0..=m {
            rhs = rhs.sub(&b(m - i).scale(&reg.coeff(i)));
        }
        equations.push(Equation { lhs: c(m), rhs });
    }
    if w.n > 1 {
        let alpha = MPoly::var(nv, nv - 1);
        equations.extend(sing_equations(&sing, w.n, w.d, &b, &alpha));
        equations.push(Equation { lhs: alpha.pow(w.n), rhs: a });
    }
    Ok(ConstraintSystem { n_trunc: n, alpha_orders: if k == 1 { vec![w.n] } else { vec![] }, equations })
}

/// `Q(s^n) sing(s) = sing(alpha s) mod s^d`, coefficientwise.
fn sing_equations(sing: &Poly, n: u32, d: u32, b: &dyn Fn(usize) -> MPoly, alpha: &MPoly) -> Vec<Equation> {
    let nv = alpha.nvars();
    let mut out = Vec::new();
    for m in 1..d as usize {
        if m % n as usize == 0 {
            continue;
        }
        let mut lhs = MPoly::zero(nv);
        for e in sing.support().filter(|&e| e <= m && (m - e) % n as usize == 0) {
            lhs = lhs.add(&b((m - e) / n as usize).scale(&sing.coeff(e)));
        }
        let rhs = alpha.pow(m as u32).scale(&sing.coeff(m));
        if !(lhs.is_zero() && rhs.is_zero()) {
            out.push(Equation { lhs, rhs });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "expr", rename_all = "snake_case")]
pub enum QStatus {
    Free,
    Determined(String),
    Relation(String),
}

/// Solved stabilizer of a finite set of spaces over one base point.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerDescription {
    #[serde(rename = "N")]
    pub n_trunc: usize,
    pub h: Poly,
    pub spaces: Vec<PuiseuxSpace>,
    pub alpha_orders: Vec<u32>,
    pub solved_q: Vec<QStatus>,
    /// Hermite form of the monomial relations over `(alpha_1.., b, a)`.
    pub lattice: Vec<Vec<i64>>,
    pub residuals: Vec<String>,
    pub constraints: Vec<String>,
    #[serde(skip)]
    determined: BTreeMap<usize, MPoly>,
    #[serde(skip)]
    merged: Vec<MPoly>,
}

impl StabilizerDescription {
    fn trivial() -> Self {
        StabilizerDescription {
            n_trunc: 0,
            h: Poly::zero(),
            spaces: vec![],
            alpha_orders: vec![],
            solved_q: vec![],
            lattice: vec![],
            residuals: vec![],
            constraints: vec![],
            determined: BTreeMap::new(),
            merged: vec![],
        }
    }

    fn k(&self) -> usize {
        self.alpha_orders.len()
    }

    fn solver_names(&self) -> Vec<String> {
        let mut v = vec!["a".to_string()];
        v.extend((0..self.n_trunc).map(|j| format!("b{j}")));
        v.extend(alpha_names(self.k()));
        v
    }

    /// Relations restricted to `(a, b)`, as rows `[u_a, v_b]` meaning `a^u b^v = 1`.
    pub fn ab_relations(&self) -> Vec<[i64; 2]> {
        let k = self.k();
        self.lattice.iter().filter(|r| r[..k].iter().all(|&x| x == 0)).map(|r| [r[k + 1], r[k]]).collect()
    }

    /// Parametrize the identity component of the torus: `(alpha.., b, a)` as products of `lambdas^w`.
    pub fn torus_point(&self, lambdas: &[Scalar]) -> Result<Vec<Scalar>> {
        let cols = self.k() + 2;
        let ker = lattice::integer_kernel(&self.lattice, cols);
        let mut pt = vec![Scalar::one(); cols];
        for (w, l) in ker.iter().zip(lambdas) {
            for (p, &e) in pt.iter_mut().zip(w) {
                *p = p.mul(&l.pow(e)?);
            }
        }
        Ok(pt)
    }

    /// A member of the group from a torus point and values for the free `b_j`.
    pub fn instantiate(&self, torus: &[Scalar], free: &dyn Fn(usize) -> Scalar) -> Result<FiberAut> {
        let k = self.k();
        let n = self.n_trunc;
        if n == 0 {
            return Ok(FiberAut { a: torus[k + 1].clone(), q: Poly::constant(torus[k].clone()), p: Poly::zero(), alphas: vec![] });
        }
        let mut vals = vec![Scalar::zero(); 1 + n + k];
        vals[0] = torus[k + 1].clone();
        vals[1] = torus[k].clone();
        vals[1 + n..].clone_from_slice(&torus[..k]);
        for j in 1..n {
            vals[1 + j] = match self.determined.get(&j) {
                Some(e) => e.eval(&vals)?,
                None => free(j),
            };
        }
        let a = vals[0].clone();
        let q = Poly::new(vals[1..=n].to_vec());
        let p = self.h.scale_var(&a).sub(&self.h.mul(&q)).truncate(n);
        Ok(FiberAut { a, q, p, alphas: vals[1 + n..].to_vec() })
    }

    /// Does `g` satisfy every emitted equation?
    pub fn check(&self, g: &FiberAut) -> Result<bool> {
        let n = self.n_trunc;
        if g.p != self.h.scale_var(&g.a).sub(&self.h.mul(&g.q)).truncate(n) {
            return Ok(false);
        }
        for (al, &ord) in g.alphas.iter().zip(&self.alpha_orders) {
            if al.pow(ord as i64)? != g.a {
                return Ok(false);
            }
        }
        let mut vals = vec![g.a.clone()];
        vals.extend((0..n).map(|j| g.q.coeff(j)));
        vals.extend(g.alphas.iter().cloned());
        for e in &self.merged {
            if !e.eval(&vals)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Solver {
    nv: usize,
    n: usize,
    k: usize,
    determined: BTreeMap<usize, MPoly>,
    rows: Vec<Vec<i64>>,
    residuals: Vec<MPoly>,
}

impl Solver {
    fn b(&self, j: usize) -> usize {
        1 + j
    }

    fn reduce(&self, e: &MPoly) -> MPoly {
        let mut e = e.clone();
        for (&j, expr) in self.determined.iter().rev() {
            if e.degree_in(self.b(j)).is_some() {
                e = e.substitute(self.b(j), expr);
            }
        }
        e
    }

    fn push(&mut self, e: &MPoly) -> Result<()> {
        let e = self.reduce(e);
        if e.is_zero() {
            return Ok(());
        }
        let top = (1..self.n).rev().find(|&j| e.degree_in(self.b(j)).is_some());
        if let Some(j) = top {
            let v = self.b(j);
            let c = e.coeff_in(v, 1);
            let linear = e.terms().all(|(x, _)| x[v] == 0 || x[v] == 1);
            match (linear, c.as_monomial()) {
                (true, Some((ex, co))) => {
                    let expr = e.coeff_in(v, 0).neg().div_monomial(ex, co)?;
                    for other in self.determined.values_mut() {
                        if other.degree_in(v).is_some() {
                            *other = other.substitute(v, &expr);
                        }
                    }
                    self.determined.insert(j, expr);
                }
                _ => self.residuals.push(e),
            }
            return Ok(());
        }
        let s = e.strip_monomial();
        let terms: Vec<_> = s.terms().collect();
        match terms[..] {
            [(e1, c1), (e2, c2)] if c1.add(c2).is_zero() => {
                let mut row = vec![0i64; self.k + 2];
                for (i, (x, y)) in e1.iter().zip(e2).enumerate() {
                    let d = x - y;
                    match i {
                        0 => row[self.k + 1] = d,
                        1 => row[self.k] = d,
                        i if i > self.n => row[i - self.n - 1] = d,
                        _ => debug_assert_eq!(d, 0),
                    }
                }
                self.rows.push(row);
            }
            _ => self.residuals.push(e),
        }
        Ok(())
    }
}

fn relation_string(u: i64, v: i64) -> String {
    let (u, v) = if v < 0 || (v == 0 && u < 0) { (-u, -v) } else { (u, v) };
    let pw = |s: &str, k: i64| if k == 1 { s.to_string() } else { format!("{s}^{k}") };
    let mut left = Vec::new();
    if v > 0 {
        left.push(pw("b0", v));
    }
    if u > 0 {
        left.push(pw("a", u));
    }
    let right = if u < 0 { pw("a", -u) } else { "1".into() };
    format!("{} = {}", left.join("*"), right)
}

/// Merge the stabilizers of several spaces over one base point and solve.
pub fn stab_intersect(ws: &[PuiseuxSpace]) -> Result<StabilizerDescription> {
    if ws.is_empty() {
        return Err(Error::BadInput("no spaces".into()));
    }
    if let Some(w) = ws.iter().find(|w| !w.is_base()) {
        return Err(Error::BadInput(format!("space with center {:?} is not in base form", w.center)));
    }
    let fibers: Vec<&Scalar> = ws.iter().filter_map(|w| w.fiber.as_ref()).collect();
    if fibers.windows(2).any(|p| p[0] != p[1]) {
        return Err(Error::MixedFibers);
    }
    let mut spaces = ws.to_vec();
    spaces.sort_by(|x, y| (y.d as u64 * x.n as u64).cmp(&(x.d as u64 * y.n as u64)));
    let n = ceil_div(spaces[0].d, spaces[0].n);
    let alpha_orders: Vec<u32> = spaces.iter().filter(|w| w.n > 1).map(|w| w.n).collect();
    let k = alpha_orders.len();
    let nv = 1 + n + k;
    let a = MPoly::var(nv, 0);
    let b = |j: usize| MPoly::var(nv, 1 + j);
    let h = split_reg_sing(&spaces[0].psi, spaces[0].n).0.truncate(n);

    let mut merged = Vec::new();
    let mut alpha_idx = 0;
    for (idx, w) in spaces.iter().enumerate() {
        let (reg, sing) = split_reg_sing(&w.psi, w.n);
        if idx > 0 {
            let nk = ceil_div(w.d, w.n);
            let delta = h.sub(&reg).truncate(nk);
            // delta(a x) = delta(x) Q(x) mod x^{N_k}
            for m in 0..nk {
                let mut e = a.pow(m as u32).scale(&delta.coeff(m));
                for i in 0..=m {
                    e = e.sub(&b(m - i).scale(&delta.coeff(i)));
                }
                if !e.is_zero() {
                    merged.push(e);
                }
            }
        }
        if w.n > 1 {
            let alpha = MPoly::var(nv, 1 + n + alpha_idx);
            alpha_idx += 1;
            for eq in sing_equations(&sing, w.n, w.d, &b, &alpha) {
                merged.push(eq.lhs.sub(&eq.rhs));
            }
            merged.push(alpha.pow(w.n).sub(&a));
        }
    }
    // a = 1, Q = 1, every alpha = 1
    let identity: Vec<Scalar> = (0..nv).map(|i| if i == 0 || i == 1 || i > n { Scalar::one() } else { Scalar::zero() }).collect();
    for e in &merged {
        debug_assert!(e.eval(&identity).unwrap().is_zero(), "identity must solve the system");
    }

    let mut solver = Solver { nv, n, k, determined: BTreeMap::new(), rows: vec![], residuals: vec![] };
    let mut order: Vec<&MPoly> = merged.iter().collect();
    order.sort_by_key(|e| (1..n).rev().find(|&j| e.degree_in(1 + j).is_some()).unwrap_or(0));
    for e in order {
        solver.push(e)?;
    }
    debug_assert_eq!(solver.nv, nv);
    let lattice = lattice::hnf(&solver.rows, k + 2);

    let mut desc = StabilizerDescription {
        n_trunc: n,
        h,
        spaces,
        alpha_orders,
        solved_q: vec![],
        lattice,
        residuals: vec![],
        constraints: vec![],
        determined: solver.determined,
        merged,
    };
    let names = desc.solver_names();
    desc.residuals = solver.residuals.iter().map(|e| format!("{} = 0", e.fmt_with(&names))).collect();
    let rels: Vec<String> = desc.ab_relations().iter().map(|&[u, v]| relation_string(u, v)).collect();
    let b_rels: Vec<String> = desc
        .ab_relations()
        .iter()
        .filter(|r| r[1] != 0)
        .map(|&[u, v]| relation_string(u, v))
        .collect();
    desc.solved_q = (0..n)
        .map(|j| match (j, desc.determined.get(&j)) {
            (0, _) if !b_rels.is_empty() => QStatus::Relation(b_rels.join(", ")),
            (_, Some(e)) => QStatus::Determined(e.fmt_with(&names)),
            _ => QStatus::Free,
        })
        .collect();
    let mut cons: Vec<String> = (0..n).map(|i| format!("c{i} = 0")).collect();
    cons.extend(rels);
    cons.extend(desc.determined.iter().map(|(j, e)| format!("b{j} = {}", e.fmt_with(&names))));
    cons.extend(desc.residuals.iter().cloned());
    desc.constraints = cons;
    Ok(desc)
}

/// Solution subgroup of `{(a, b)}` cut out by the relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusPart {
    pub rank: usize,
    pub torsion: u64,
    /// Rows `[u_a, v_b]`: `a^u b^v = 1`.
    pub relations: Vec<[i64; 2]>,
    pub smith: Vec<i64>,
    /// The `a = 1` part.
    pub slice: TorusSummary,
}

pub fn torus_from_relations(rows: &[[i64; 2]]) -> TorusPart {
    let m: Vec<Vec<i64>> = rows.iter().map(|r| vec![r[0], r[1]]).collect();
    let smith = lattice::smith_diagonal(&m, 2);
    let g = rows.iter().fold(0i64, |g, r| g.gcd(&r[1]));
    let slice = if g == 0 { TorusSummary { rank: 1, torsion: 1 } } else { TorusSummary { rank: 0, torsion: g as u64 } };
    let relations = lattice::hnf(&rows.iter().map(|r| vec![r[1], r[0]]).collect::<Vec<_>>(), 2)
        .into_iter()
        .map(|r| [r[1], r[0]])
        .collect();
    TorusPart { rank: 2 - smith.len(), torsion: smith.iter().product::<i64>() as u64, relations, smith, slice }
}

/// Torus part of a solved description.
pub fn torus_part(sys: &StabilizerDescription) -> Result<TorusPart> {
    if !sys.residuals.is_empty() {
        return Err(Error::NonabelianResidual(sys.residuals.join("; ")));
    }
    Ok(torus_from_relations(&sys.ab_relations()))
}

/// Spaces `Pui(p_k)` of the outer blowup centers, in tower order.
pub fn outer_spaces(model: &FiberModel, field: Field) -> Result<Vec<PuiseuxSpace>> {
    model
        .components
        .iter()
        .filter(|c| c.kind == Kind::Outer)
        .map(|c| pui_of_center(model, c.id, field).map(|w| w.over(model.base_point.clone())))
        .collect()
}

pub fn fiber_stabilizer(model: &FiberModel, field: Field) -> Result<StabilizerDescription> {
    let ws = outer_spaces(model, field)?;
    if ws.is_empty() {
        return Ok(StabilizerDescription::trivial());
    }
    stab_intersect(&ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[i64]) -> Poly {
        Poly::new(v.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    #[test]
    fn single_examples() {
        let s = stab_single(&PuiseuxSpace::base(poly(&[0, 1]), 2, 2).unwrap()).unwrap();
        assert_eq!(s.to_strings(), vec!["c0 = 0", "b0 = alpha", "alpha^2 = a"]);
        let s = stab_single(&PuiseuxSpace::base(Poly::zero(), 1, 1).unwrap()).unwrap();
        assert_eq!(s.to_strings(), vec!["c0 = 0"]);
        let s = stab_single(&PuiseuxSpace::base(poly(&[3]), 1, 1).unwrap()).unwrap();
        assert_eq!(s.to_strings(), vec!["c0 = -3*b0 + 3"]);
        assert!(s.check(&FiberAut::identity(0)).unwrap());
    }

    #[test]
    fn intersect_examples() {
        let ws = [PuiseuxSpace::base(Poly::zero(), 1, 1).unwrap(), PuiseuxSpace::base(poly(&[0, 1]), 2, 2).unwrap()];
        let d = stab_intersect(&ws).unwrap();
        assert_eq!(d.n_trunc, 1);
        assert!(d.h.is_zero());
        assert_eq!(d.constraints, vec!["c0 = 0", "b0^2 = a"]);
        assert_eq!(d.ab_relations(), vec![[-1, 2]]);
        let t = torus_part(&d).unwrap();
        assert_eq!((t.rank, t.torsion, t.slice.torsion, t.slice.rank), (1, 1, 2, 0));

        let ws = [PuiseuxSpace::base(poly(&[1]), 1, 1).unwrap(), PuiseuxSpace::base(poly(&[2]), 1, 1).unwrap()];
        let d = stab_intersect(&ws).unwrap();
        assert_eq!(d.h, poly(&[1]));
        assert_eq!(d.constraints, vec!["c0 = 0", "b0 = 1"]);
        let t = torus_part(&d).unwrap();
        assert_eq!((t.rank, t.slice.rank, t.slice.torsion), (1, 0, 1));
    }

    #[test]
    fn torus_examples() {
        let t = torus_from_relations(&[]);
        assert_eq!((t.rank, t.torsion), (2, 1));
        let t = torus_from_relations(&[[-2, 1], [-1, 3]]);
        assert_eq!((t.rank, t.torsion), (0, 5));
        assert_eq!(relation_string(-1, 2), "b0^2 = a");
        assert_eq!(relation_string(0, -1), "b0 = 1");
        assert_eq!(relation_string(2, -1), "b0 = a^2");
    }
}
