use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Which radicals a computation may adjoin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Rational,
    Radical,
}

/// A product `(-1)^s * prod p^e` with all exponents in `[0, 1)`.
///
/// The empty product is the monomial `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radical {
    sign: Q,
    primes: BTreeMap<BigUint, Q>,
}

fn frac_floor(q: &Q) -> (BigInt, Q) {
    let f = q.floor();
    (f.to_integer(), q - f)
}

impl Radical {
    pub fn one() -> Self {
        Radical { sign: Q::zero(), primes: BTreeMap::new() }
    }

    pub fn is_one(&self) -> bool {
        self.sign.is_zero() && self.primes.is_empty()
    }

    /// Build from arbitrary exponents, folding integer parts into a rational factor.
    fn normalize(sign: Q, primes: BTreeMap<BigUint, Q>) -> (Q, Radical) {
        let mut factor = Q::one();
        let (si, sf) = frac_floor(&sign);
        if si.is_odd() {
            factor = -factor;
        }
        let mut out = BTreeMap::new();
        for (p, e) in primes {
            let (ei, ef) = frac_floor(&e);
            let pb = BigInt::from(p.clone());
            let pw = Q::from_integer(num_traits::pow(pb, ei.magnitude().to_usize().unwrap()));
            if ei.is_negative() {
                factor /= pw;
            } else {
                factor *= pw;
            }
            if !ef.is_zero() {
                out.insert(p, ef);
            }
        }
        (factor, Radical { sign: sf, primes: out })
    }

    pub fn mul(&self, other: &Radical) -> (Q, Radical) {
        let mut primes = self.primes.clone();
        for (p, e) in &other.primes {
            *primes.entry(p.clone()).or_insert_with(Q::zero) += e;
        }
        Radical::normalize(&self.sign + &other.sign, primes)
    }

    pub fn pow(&self, j: i64) -> (Q, Radical) {
        let jq = Q::from_integer(BigInt::from(j));
        let primes = self.primes.iter().map(|(p, e)| (p.clone(), e * &jq)).collect();
        Radical::normalize(&self.sign * &jq, primes)
    }

    fn root(&self, k: u32) -> Radical {
        let kq = Q::from_integer(BigInt::from(k));
        Radical {
            sign: &self.sign / &kq,
            primes: self.primes.iter().map(|(p, e)| (p.clone(), e / &kq)).collect(),
        }
    }

    fn fmt_into(&self, out: &mut Vec<String>) {
        if !self.sign.is_zero() {
            out.push(fmt_power("-1", &self.sign));
        }
        for (p, e) in &self.primes {
            out.push(fmt_power(&p.to_string(), e));
        }
    }
}

fn fmt_power(base: &str, e: &Q) -> String {
    let num = e.numer();
    let den = e.denom();
    if num.is_one() {
        format!("rt({den},{base})")
    } else {
        format!("rt({den},{base})^{num}")
    }
}

/// Exact element of the flat radical field over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<Radical, Q>,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Scalar::from_q(Q::one())
    }

    pub fn from_q(q: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Radical::one(), q);
        }
        Scalar { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_q(Q::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::from_q(Q::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, if the scalar involves no radicals.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Radical::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn add_term(&mut self, m: Radical, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        let mut r = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let (f, m) = m1.mul(m2);
                r.add_term(m, f * c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, q: &Q) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            let (f, mi) = m.pow(-1);
            let mut r = Scalar::zero();
            r.add_term(mi, f / c);
            return Ok(r);
        }
        self.inv_linear()
    }

    /// Inverse by solving `x * y = 1` over the monomial basis generated by `x`.
    fn inv_linear(&self) -> Result<Scalar> {
        let mut sign_den = BigInt::one();
        let mut prime_den: BTreeMap<BigUint, BigInt> = BTreeMap::new();
        for m in self.terms.keys() {
            sign_den = sign_den.lcm(m.sign.denom());
            for (p, e) in &m.primes {
                let d = prime_den.entry(p.clone()).or_insert_with(BigInt::one);
                *d = d.lcm(e.denom());
            }
        }
        let mut axes: Vec<(Option<BigUint>, u64)> = vec![(None, sign_den.to_u64().unwrap())];
        for (p, d) in &prime_den {
            axes.push((Some(p.clone()), d.to_u64().unwrap()));
        }
        let dim: u64 = axes.iter().map(|a| a.1).product();
        if dim > 2048 {
            return Err(Error::NotInvertible(format!("basis of size {dim} too large")));
        }
        let mut basis = Vec::with_capacity(dim as usize);
        for mut idx in 0..dim {
            let mut sign = Q::zero();
            let mut primes = BTreeMap::new();
            for (p, d) in &axes {
                let j = idx % d;
                idx /= d;
                let e = Q::new(BigInt::from(j), BigInt::from(*d));
                match p {
                    None => sign = e,
                    Some(p) if j > 0 => {
                        primes.insert(p.clone(), e);
                    }
                    _ => {}
                }
            }
            basis.push(Radical { sign, primes });
        }
        let pos: BTreeMap<&Radical, usize> = basis.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let n = basis.len();
        // column j holds the coordinates of self * basis[j]
        let mut mat = vec![vec![Q::zero(); n + 1]; n];
        for (j, b) in basis.iter().enumerate() {
            for (m, c) in &self.terms {
                let (f, r) = m.mul(b);
                let i = *pos.get(&r).ok_or_else(|| Error::NotInvertible(self.to_string()))?;
                mat[i][j] += f * c;
            }
        }
        mat[pos[&Radical::one()]][n] = Q::one();
        let sol = solve_dense(mat, n).ok_or_else(|| Error::NotInvertible(self.to_string()))?;
        let mut r = Scalar::zero();
        for (b, c) in basis.into_iter().zip(sol) {
            r.add_term(b, c);
        }
        Ok(r)
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, j: i64) -> Result<Scalar> {
        let base = if j < 0 { self.inv()? } else { self.clone() };
        let mut e = j.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn pow_u(&self, j: u64) -> Scalar {
        self.pow(j as i64).expect("nonnegative power")
    }

    /// A k-th root of `self`, or `extension_required` when the field forbids it.
    pub fn root(&self, k: u32, field: Field) -> Result<Scalar> {
        if k == 0 {
            return Err(Error::BadInput("0-th root".into()));
        }
        if k == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        let need = || Error::ExtensionRequired { k, value: self.to_string() };
        if let Some(q) = self.as_rational() {
            if let Some(r) = rational_root(&q, k) {
                return Ok(Scalar::from_q(r));
            }
        }
        if field == Field::Rational || self.terms.len() != 1 {
            return Err(need());
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let mut coeff = Q::one();
        let kq = Q::from_integer(BigInt::from(k));
        let mut sign = &m.sign / &kq;
        if c.is_negative() {
            if k % 2 == 1 {
                coeff = -coeff;
            } else {
                sign += Q::one() / &kq;
            }
        }
        let mut primes: BTreeMap<BigUint, Q> = m.root(k).primes;
        for (p, a) in factor(c.numer().magnitude()) {
            *primes.entry(p).or_insert_with(Q::zero) += Q::new(BigInt::from(a), BigInt::from(k));
        }
        for (p, a) in factor(c.denom().magnitude()) {
            *primes.entry(p).or_insert_with(Q::zero) -= Q::new(BigInt::from(a), BigInt::from(k));
        }
        let (f, rad) = Radical::normalize(sign, primes);
        let mut r = Scalar::zero();
        r.add_term(rad, f * coeff);
        Ok(r)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Radical, &Q)> {
        self.terms.iter()
    }
}

/// Gauss-Jordan on an augmented `n x (n+1)` matrix.
pub(crate) fn solve_dense(mut mat: Vec<Vec<Q>>, n: usize) -> Option<Vec<Q>> {
    for col in 0..n {
        let piv = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, piv);
        let inv = Q::one() / &mat[col][col];
        for x in mat[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in col..=n {
                    let v = &mat[col][c] * &f;
                    mat[r][c] -= v;
                }
            }
        }
    }
    Some(mat.into_iter().map(|row| row[n].clone()).collect())
}

fn rational_root(q: &Q, k: u32) -> Option<Q> {
    let neg = q.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let rn = n.nth_root(k);
    let rd = d.nth_root(k);
    if rn.pow(k) != *n || rd.pow(k) != *d {
        return None;
    }
    let r = Q::new(BigInt::from_biguint(Sign::Plus, rn), BigInt::from_biguint(Sign::Plus, rd));
    Some(if neg { -r } else { r })
}

/// Trial division; a cofactor left after 10^6 is kept whole.
fn factor(n: &BigUint) -> Vec<(BigUint, u64)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut p = BigUint::from(2u32);
    let limit = BigUint::from(1_000_000u32);
    while &p * &p <= n && p <= limit {
        let mut a = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            a += 1;
        }
        if a > 0 {
            out.push((p.clone(), a));
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut parts = Vec::new();
            m.fmt_into(&mut parts);
            let term = if parts.is_empty() {
                c.to_string()
            } else if c.is_one() {
                parts.join("*")
            } else if (-c).is_one() {
                format!("-{}", parts.join("*"))
            } else {
                format!("{}*{}", c, parts.join("*"))
            };
            if !first && !term.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{term}")?;
            first = false;
        }
        Ok(())
    }
}

fn split_top(s: &str, seps: &[char]) -> Vec<(char, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut lead = '+';
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let boundary = depth == 0
            && seps.contains(&ch)
            && !cur.trim().is_empty()
            && !matches!(prev, Some('*' | '^' | '/' | '(' | ','));
        if boundary {
            out.push((lead, std::mem::take(&mut cur)));
            lead = ch;
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    out.push((lead, cur));
    out
}

fn parse_factor(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse scalar factor `{s}`"));
    if let Some(rest) = s.strip_prefix("rt(") {
        let close = rest.find(')').ok_or_else(bad)?;
        let inner = &rest[..close];
        let (k, a) = inner.split_once(',').ok_or_else(bad)?;
        let k: u32 = k.trim().parse().map_err(|_| bad())?;
        let a = Q::from_str(a.trim()).map_err(|_| bad())?;
        let base = Scalar::from_q(a).root(k, Field::Radical)?;
        let tail = rest[close + 1..].trim();
        if tail.is_empty() {
            return Ok(base);
        }
        let j: i64 = tail.strip_prefix('^').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        return base.pow(j);
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        return inner.parse();
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits: String = format!("{int}{frac}");
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Scalar::from_q(Q::new(num, den)));
    }
    Q::from_str(s).map(Scalar::from_q).map_err(|_| bad())
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut acc = Scalar::zero();
        for (sign, term) in split_top(s, &['+', '-']) {
            let term = term.trim();
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term),
            };
            let mut t = Scalar::one();
            for (_, f) in split_top(body, &['*']) {
                t = t.mul(&parse_factor(&f)?);
            }
            if neg ^ (sign == '-') {
                t = t.neg();
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let s = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected scalar, got {other}"))),
        };
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point coordinate on a fiber component: a finite scalar or the node marker.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Finite(Scalar),
    Inf,
}

impl Coord {
    pub fn zero() -> Self {
        Coord::Finite(Scalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coord::Finite(s) if s.is_zero())
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Finite(s) => write!(f, "{s}"),
            Coord::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Coord> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Coord::Inf),
            other => other.parse().map(Coord::Finite),
        }
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Coord, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let s = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected coordinate, got {other}"))),
        };
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(s("3/4").to_string(), "3/4");
        assert_eq!(s("rt(2,8)").to_string(), "2*rt(2,2)");
        assert_eq!(s("1+rt(2,2)").to_string(), "1+rt(2,2)");
        assert_eq!(s("1-rt(3,2)^2").to_string(), "1-rt(3,2)^2");
        assert_eq!(s("-2").to_string(), "-2");
        assert_eq!(s("0.25"), s("1/4"));
    }

    #[test]
    fn radical_products_reduce() {
        assert_eq!(s("rt(2,2)").mul(&s("rt(2,2)")), s("2"));
        assert_eq!(s("rt(3,2)").pow(3).unwrap(), s("2"));
        assert_eq!(s("rt(2,-1)").pow(2).unwrap(), s("-1"));
        assert_eq!(s("rt(2,6)"), s("rt(2,2)*rt(2,3)"));
    }

    #[test]
    fn inverse_of_sums() {
        for x in ["1+rt(2,2)", "3-rt(3,5)", "rt(2,2)+rt(2,3)", "1/2+rt(3,2)^2"] {
            let a = s(x);
            assert!(a.mul(&a.inv().unwrap()).is_one(), "{x}");
        }
    }

    #[test]
    fn roots() {
        assert_eq!(s("9/4").root(2, Field::Rational).unwrap(), s("3/2"));
        assert_eq!(s("-8").root(3, Field::Rational).unwrap(), s("-2"));
        let e = s("2").root(2, Field::Rational).unwrap_err();
        assert_eq!(e, Error::ExtensionRequired { k: 2, value: "2".into() });
        let r = s("12").root(2, Field::Radical).unwrap();
        assert_eq!(r.pow(2).unwrap(), s("12"));
        let r = s("-3").root(4, Field::Radical).unwrap();
        assert_eq!(r.pow(4).unwrap(), s("-3"));
        let r = s("rt(2,3)").root(3, Field::Radical).unwrap();
        assert_eq!(r.pow(6).unwrap(), s("3"));
    }

    #[test]
    fn coord_parse() {
        assert_eq!("inf".parse::<Coord>().unwrap(), Coord::Inf);
        assert_eq!("0".parse::<Coord>().unwrap(), Coord::zero());
    }
}
