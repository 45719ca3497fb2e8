use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::{Field, Scalar, Q};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;

/// Polynomial with exact coefficients, low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Scalar>", into = "Vec<Scalar>")]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl From<Vec<Scalar>> for Poly {
    fn from(v: Vec<Scalar>) -> Self {
        Poly::new(v)
    }
}

impl From<Poly> for Vec<Scalar> {
    fn from(p: Poly) -> Self {
        if p.coeffs.is_empty() {
            vec![Scalar::zero()]
        } else {
            p.coeffs
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            parts.push(match (i, c.is_one()) {
                (0, _) => format!("{c}"),
                (_, true) => mono,
                _ => format!("({c})*{mono}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn parse(coeffs: &[&str]) -> Result<Self> {
        coeffs.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>().map(Poly::new)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Least exponent with nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(Scalar::neg).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Scalar::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Keep only the terms of degree below `d`.
    pub fn truncate(&self, d: usize) -> Poly {
        Poly::new(self.coeffs.iter().take(d).cloned().collect())
    }

    /// `p(a t)`.
    pub fn scale_var(&self, a: &Scalar) -> Poly {
        let mut pw = Scalar::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c.mul(&pw));
            pw = pw.mul(a);
        }
        Poly::new(v)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::constant(Scalar::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute a polynomial for the variable.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| acc.mul(g).add(&Poly::constant(c.clone())))
    }

    pub fn to_series(&self, order: usize) -> Series {
        Series::new(self.coeffs.clone(), order)
    }
}

/// Power series known modulo `t^order`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    coeffs: Vec<Scalar>,
    order: usize,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", Poly::new(self.coeffs.clone()), self.order)
    }
}

impl Series {
    pub fn new(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        coeffs.resize(order, Scalar::zero());
        Series { coeffs, order }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Series::new(vec![Scalar::one()], order)
    }

    /// The series `t` (or `0` when `order <= 1`).
    pub fn var(order: usize) -> Self {
        Series::new(vec![Scalar::zero(), Scalar::one()], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// Valuation; `None` if the series is zero to its precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Series {
        Series::new(self.coeffs.iter().take(order).cloned().collect(), order.min(self.order))
    }

    pub fn add(&self, o: &Series) -> Series {
        let m = self.order.min(o.order);
        Series::new((0..m).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect(), m)
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Series {
        Series { coeffs: self.coeffs.iter().map(Scalar::neg).collect(), order: self.order }
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        Series { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(), order: self.order }
    }

    /// Product; known up to `min(M1 + v(g), M2 + v(f))`.
    pub fn mul(&self, o: &Series) -> Series {
        let vf = self.valuation().unwrap_or(self.order);
        let vg = o.valuation().unwrap_or(o.order);
        let m = (self.order + vg).min(o.order + vf);
        let mut v = vec![Scalar::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= m {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= m {
                    break;
                }
                if !b.is_zero() {
                    v[i + j] = v[i + j].add(&a.mul(b));
                }
            }
        }
        Series::new(v, m)
    }

    /// Product truncated to a fixed order (both inputs assumed known that far).
    fn mul_to(&self, o: &Series, m: usize) -> Series {
        let mut v = vec![Scalar::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate().take(m) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(m - i) {
                if !b.is_zero() {
                    v[i + j] = v[i + j].add(&a.mul(b));
                }
            }
        }
        Series::new(v, m)
    }

    pub fn pow(&self, k: usize) -> Series {
        if k == 0 {
            return Series::one(self.order);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self(g(t))`; `g` must have zero constant term.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        if !g.coeff(0).is_zero() {
            return Err(Error::BadComposition);
        }
        let vg = match g.valuation() {
            Some(v) => v,
            None => {
                // g vanishes to its precision: only the constant term survives reliably.
                let m = g.order.min(self.order.max(1));
                return Ok(Series::new(vec![self.coeff(0)], m));
            }
        };
        let vf = self.valuation().unwrap_or(self.order);
        let m = (self.order * vg).min(g.order + (vf.max(1) - 1) * vg);
        if m == 0 {
            return Ok(Series::zero(0));
        }
        let mut acc = Series::zero(m);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_to(g, m);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self) -> Result<Series> {
        let c0 = self.coeff(0);
        let c0i = c0.inv().map_err(|_| Error::NotInvertible("series without constant term".into()))?;
        let m = self.order;
        let mut v: Vec<Scalar> = vec![c0i.clone()];
        for k in 1..m {
            let mut s = Scalar::zero();
            for j in 1..=k {
                s = s.add(&self.coeffs[j].mul(&v[k - j]));
            }
            v.push(s.neg().mul(&c0i));
        }
        Ok(Series::new(v, m))
    }

    /// `u^alpha` for a unit with constant term 1.
    fn pow_q_unit(&self, alpha: &Q) -> Series {
        let m = self.order;
        let w = &self.coeffs;
        let mut p = vec![Scalar::one()];
        let a1 = alpha + Q::one();
        for n in 1..m {
            let mut s = Scalar::zero();
            for j in 1..=n {
                let f = &a1 * Q::from_integer(BigInt::from(j)) - Q::from_integer(BigInt::from(n));
                s = s.add(&w[j].mul(&p[n - j]).scale(&f));
            }
            p.push(s.scale(&(Q::one() / Q::from_integer(BigInt::from(n)))));
        }
        Series::new(p, m)
    }

    /// A `k`-th root of a unit series.
    pub fn unit_root(&self, k: u32, field: Field) -> Result<Series> {
        let u0 = self.coeff(0);
        if u0.is_zero() {
            return Err(Error::BadInput("unit_root needs a nonzero constant term".into()));
        }
        let v0 = u0.root(k, field)?;
        let normalized = self.scale(&u0.inv()?);
        let alpha = Q::new(BigInt::one(), BigInt::from(k));
        Ok(normalized.pow_q_unit(&alpha).scale(&v0))
    }

    /// Compositional inverse of a series with valuation exactly 1.
    pub fn reverse(&self) -> Result<Series> {
        let m = self.order;
        let f1 = self.coeff(1);
        if !self.coeff(0).is_zero() || f1.is_zero() {
            return Err(Error::BadInput("reversion needs valuation 1".into()));
        }
        let f1i = f1.inv()?;
        let mut tau = Series::new(vec![Scalar::zero(), f1i], m);
        for k in 2..m {
            let head = Series::new(tau.coeffs[..k].to_vec(), k + 1);
            let e = self.truncate(k + 1).compose(&head)?.coeff(k);
            tau.coeffs[k] = e.neg().mul(&tau.coeffs[1]);
        }
        Ok(tau)
    }
}

/// Solve `t^n psi(t) = s^(n+m)` for `t(s)` with `ord t(s) = 1`, modulo `s^order`.
///
/// Returns `(t(s), n + m)` where `m = ord psi`.
pub fn solve_substitution(psi: &Poly, n: u32, order: usize, field: Field) -> Result<(Series, u32)> {
    let m = psi.ord().ok_or_else(|| Error::BadInput("psi = 0".into()))?;
    if m == 0 {
        return Err(Error::BadInput("psi must vanish at 0".into()));
    }
    let big_n = n + m as u32;
    let c = psi.coeff(m);
    let rho_coeffs: Vec<Scalar> = psi.coeffs()[m..].iter().map(|x| x.div(&c)).collect::<Result<_>>()?;
    let rho = Series::new(rho_coeffs, order.max(1));
    let rho_root = rho.pow_q_unit(&Q::new(BigInt::one(), BigInt::from(big_n)));
    let c_root = c.root(big_n, field)?;
    let phi = Series::var(order + 1).mul(&rho_root).truncate(order).scale(&c_root);
    Ok((phi.reverse()?, big_n))
}
