//! Puiseux arc spaces `Pui(psi, n, d)` and their descent through a tower.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber_tower::{Center, FiberModel};
use crate::formal_series::{solve_substitution, Coord, Field, Poly, Scalar, Series};

/// Where a space lives: base coordinates (center `T0(psi0)`) or a point of a tower level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PuiCenter {
    Base(Scalar),
    Point(Center),
}

/// Arcs `(t^n, psi(t) + O(t^d))` up to reparametrization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuiseuxSpace {
    pub psi: Poly,
    pub n: u32,
    pub d: u32,
    pub center: PuiCenter,
    /// Base point of the fiber, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<Scalar>,
}

impl PuiseuxSpace {
    /// A space in base coordinates; the constant term of `psi` names the center.
    pub fn base(psi: Poly, n: u32, d: u32) -> Result<Self> {
        let center = PuiCenter::Base(psi.coeff(0));
        let w = PuiseuxSpace { psi, n, d, center, fiber: None };
        w.validate()?;
        Ok(w)
    }

    pub fn at(psi: Poly, n: u32, d: u32, center: Center) -> Result<Self> {
        let w = PuiseuxSpace { psi, n, d, center: PuiCenter::Point(center), fiber: None };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::BadInput("n and d must be positive".into()));
        }
        if self.psi.degree().is_some_and(|k| k >= self.d as usize) {
            return Err(Error::BadInput(format!("deg psi must be below d = {}", self.d)));
        }
        match &self.center {
            PuiCenter::Base(c) if *c != self.psi.coeff(0) => {
                return Err(Error::BadInput("base center must equal psi(0)".into()));
            }
            PuiCenter::Point(_) if !self.psi.coeff(0).is_zero() => {
                return Err(Error::BadInput("local psi must vanish at 0".into()));
            }
            PuiCenter::Point(c) if c.at == Coord::Inf && self.psi.is_zero() => {
                return Err(Error::DegenerateAtNode);
            }
            _ => {}
        }
        if gcd_condition(&self.psi, self.n) != 1 {
            return Err(Error::BadInput("gcd of exponents and n must be 1".into()));
        }
        Ok(())
    }

    pub fn over(mut self, beta: Scalar) -> Self {
        self.fiber = Some(beta);
        self
    }

    pub fn is_base(&self) -> bool {
        matches!(self.center, PuiCenter::Base(_))
    }

    pub fn multiplicity(&self) -> u32 {
        self.n
    }

    /// Base point value `psi(0)` for spaces in base form.
    pub fn base_center(&self) -> Option<&Scalar> {
        match &self.center {
            PuiCenter::Base(c) => Some(c),
            PuiCenter::Point(_) => None,
        }
    }

    /// Membership of an arc given in this space's coordinates.
    pub fn contains_arc(&self, x: &Series, y: &Series, field: Field) -> Result<bool> {
        let Some(yhat) = normalize_arc(x, y, self.n, self.d as usize, field)? else {
            return Ok(false);
        };
        match_up_to_root(&yhat, &self.psi, self.n, self.d as usize)
    }

    /// Equality of spaces up to the substitution `t -> zeta t`, `zeta^n = 1`.
    pub fn equivalent(&self, other: &PuiseuxSpace) -> Result<bool> {
        if self.n != other.n || self.d != other.d || self.center_key() != other.center_key() {
            return Ok(false);
        }
        match_up_to_root(&other.psi, &self.psi, self.n, self.d as usize)
    }

    fn center_key(&self) -> Option<&Center> {
        match &self.center {
            PuiCenter::Base(_) => None,
            PuiCenter::Point(c) => Some(c),
        }
    }
}

/// `gcd({i : psi_i != 0} ∪ {n})`.
pub fn gcd_condition(psi: &Poly, n: u32) -> u64 {
    psi.support().fold(n as u64, |g, i| g.gcd(&(i as u64)))
}

/// `psi = reg(t^n) + sing(t)`; `reg` is returned as a polynomial in `s = t^n`.
pub fn split_reg_sing(psi: &Poly, n: u32) -> (Poly, Poly) {
    let n = n as usize;
    let mut reg = Vec::new();
    let mut sing = Vec::new();
    for (i, c) in psi.coeffs().iter().enumerate() {
        if i % n == 0 {
            reg.push(c.clone());
            sing.push(Scalar::zero());
        } else {
            sing.push(c.clone());
        }
    }
    (Poly::new(reg), Poly::new(sing))
}

/// Reparametrize so that `x = s^n` and return `y(t(s)) mod s^d`.
///
/// `None` when `ord x != n`.
fn normalize_arc(x: &Series, y: &Series, n: u32, d: usize, field: Field) -> Result<Option<Poly>> {
    let Some(v) = x.valuation() else {
        return Err(Error::ArcInFiber);
    };
    if v != n as usize {
        return Ok(None);
    }
    let order = d + 1;
    // x = t^n u(t); s = t u^(1/n)
    let u = Series::new(x.coeffs()[v..].to_vec(), x.order() - v);
    let root = u.unit_root(n, field)?;
    let sfun = Series::var(order + 1).mul(&root).truncate(order);
    if sfun.order() < order {
        return Err(Error::BadInput("arc truncated too early".into()));
    }
    let tfun = sfun.reverse()?;
    let yhat = y.compose(&tfun.truncate(d.max(2)))?;
    if yhat.order() < d {
        return Err(Error::BadInput("arc truncated too early".into()));
    }
    Ok(Some(yhat.truncate(d).to_poly()))
}

/// Integer coefficients with `sum u_i e_i = gcd(e)`.
fn bezout(es: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut coef: Vec<i64> = Vec::with_capacity(es.len());
    for (k, &e) in es.iter().enumerate() {
        let ext = g.extended_gcd(&e);
        // ext.gcd = ext.x * g + ext.y * e
        for c in coef.iter_mut() {
            *c *= ext.x;
        }
        coef.push(ext.y);
        g = ext.gcd;
        if g < 0 {
            g = -g;
            for c in coef.iter_mut().take(k + 1) {
                *c = -*c;
            }
        }
    }
    (g, coef)
}

/// Is there `zeta` with `zeta^n = 1` and `got_i zeta^i = want_i` for all `i < d`?
fn match_up_to_root(got: &Poly, want: &Poly, n: u32, d: usize) -> Result<bool> {
    let mut exps = Vec::new();
    let mut ratios = Vec::new();
    for i in 0..d {
        let (g, w) = (got.coeff(i), want.coeff(i));
        match (g.is_zero(), w.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return Ok(false),
            _ => {}
        }
        if i == 0 {
            if g != w {
                return Ok(false);
            }
            continue;
        }
        exps.push(i as i64);
        ratios.push(w.div(&g)?);
    }
    let mut all = exps.clone();
    all.push(n as i64);
    let (g, coef) = bezout(&all);
    if g != 1 {
        return Err(Error::NeedsRootsOfUnity(n));
    }
    let mut zeta = Scalar::one();
    for (r, &u) in ratios.iter().zip(&coef) {
        zeta = zeta.mul(&r.pow(u)?);
    }
    if !zeta.pow(n as i64)?.is_one() {
        return Ok(false);
    }
    for (&e, r) in exps.iter().zip(&ratios) {
        if zeta.pow(e)? != *r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Pui(psi, n, d)` at `T_i(q)`, `q` finite, becomes `Pui(t^n (q + psi), n, d + n)` at `p_i`.
pub fn descend_finite(psi: &Poly, n: u32, d: u32, q: &Scalar) -> (Poly, u32, u32) {
    let shifted = psi.add(&Poly::constant(q.clone()));
    (shifted.shift(n as usize), n, d + n)
}

/// `Pui(psi, n, d)` at `T_i(∞)` becomes `Pui(psi(t(s)), n + ord psi, d)` at `p_i`.
pub fn descend_infinite(psi: &Poly, n: u32, d: u32, field: Field) -> Result<(Poly, u32, u32)> {
    if psi.is_zero() {
        return Err(Error::DegenerateAtNode);
    }
    let (ts, big_n) = solve_substitution(psi, n, d as usize + 1, field)?;
    let psi_s = psi.to_series(d as usize + 1).compose(&ts)?;
    let out = psi_s.truncate(d as usize).to_poly();
    debug_assert_eq!(out.ord(), psi.ord());
    debug_assert_eq!(gcd_condition(&out, big_n), 1);
    Ok((out, big_n, d))
}

fn descend_to_base(model: &FiberModel, start: &Center, field: Field) -> Result<PuiseuxSpace> {
    let (mut psi, mut n, mut d) = (Poly::zero(), 1u32, 1u32);
    let mut at = start.clone();
    loop {
        if at.on == 0 {
            let q = match &at.at {
                Coord::Finite(q) => q.clone(),
                Coord::Inf => return Err(Error::CenterOnSection),
            };
            return PuiseuxSpace::base(psi.add(&Poly::constant(q)), n, d);
        }
        (psi, n, d) = match &at.at {
            Coord::Finite(q) => descend_finite(&psi, n, d, q),
            Coord::Inf => descend_infinite(&psi, n, d, field)?,
        };
        at = model.center(at.on).cloned().ok_or(Error::BadComponent(at.on))?;
    }
}

/// The space of smooth arcs through a smooth non-section point, in base coordinates.
pub fn pui_of_point(model: &FiberModel, point: &Center, field: Field) -> Result<PuiseuxSpace> {
    let chart = model.locate(point)?;
    if chart.y.is_some() {
        return Err(Error::DegenerateAtNode);
    }
    descend_to_base(model, point, field)
}

/// `Pui(p_k)` for the center of the `k`-th blowup, on the surface before it.
pub fn pui_of_center(model: &FiberModel, k: usize, field: Field) -> Result<PuiseuxSpace> {
    let c = model.center(k).ok_or(Error::BadComponent(k))?;
    if model.center_chart(k).y.is_some() {
        return Err(Error::DegenerateAtNode);
    }
    descend_to_base(model, c, field)
}

/// `mult(X) ord x + mult(Y) ord y` for an arc at a point of the top surface.
pub fn arc_multiplicity(model: &FiberModel, point: &Center, x: &Series, y: &Series) -> Result<u64> {
    let chart = model.locate(point)?;
    let ox = x.valuation().ok_or(Error::ArcInFiber)? as u64;
    let mx = model.components[chart.x].multiplicity;
    match chart.y {
        None => Ok(mx * ox),
        Some(yc) => {
            let oy = y.valuation().ok_or(Error::ArcInFiber)? as u64;
            Ok(mx * ox + model.components[yc].multiplicity * oy)
        }
    }
}
