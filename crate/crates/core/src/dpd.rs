//! Dolgachev-Pinkham-Demazure presentations of normal affine `G_m`-surfaces.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formal_series::{Coord, Scalar, Q};
use crate::weighted_graphs::MlClass;

/// A `Q`-divisor with finitely many nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QDivisor {
    support: BTreeMap<String, (Coord, Q)>,
}

impl QDivisor {
    pub fn new(entries: Vec<(Coord, Q)>) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (p, c) in entries {
            let key = p.to_string();
            if support.contains_key(&key) {
                return Err(Error::BadInput(format!("point {key} listed twice")));
            }
            if !c.is_zero() {
                support.insert(key, (p, c));
            }
        }
        Ok(QDivisor { support })
    }

    pub fn zero() -> Self {
        QDivisor::default()
    }

    /// `c [p]`.
    pub fn point(p: Scalar, c: Q) -> Self {
        QDivisor::new(vec![(Coord::Finite(p), c)]).unwrap()
    }

    pub fn entries(&self) -> impl Iterator<Item = &(Coord, Q)> {
        self.support.values()
    }

    pub fn coeff(&self, p: &Coord) -> Q {
        self.support.get(&p.to_string()).map(|e| e.1.clone()).unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &QDivisor) -> QDivisor {
        let mut out = self.clone();
        for (k, (p, c)) in &o.support {
            let s = out.coeff(p) + c;
            if s.is_zero() {
                out.support.remove(k);
            } else {
                out.support.insert(k.clone(), (p.clone(), s));
            }
        }
        out
    }

    pub fn neg(&self) -> QDivisor {
        QDivisor { support: self.support.iter().map(|(k, (p, c))| (k.clone(), (p.clone(), -c))).collect() }
    }

    pub fn degree(&self) -> Q {
        self.support.values().map(|e| e.1.clone()).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.support.values().all(|e| e.1.is_integer())
    }

    /// Points where the coefficient is not an integer.
    pub fn fractional_support(&self) -> BTreeSet<String> {
        self.support.iter().filter(|(_, e)| !e.1.is_integer()).map(|(k, _)| k.clone()).collect()
    }

    /// `{D}` with coefficients `c - floor(c)` in `[0, 1)`.
    pub fn fractional_part(&self) -> QDivisor {
        QDivisor {
            support: self
                .support
                .iter()
                .filter(|(_, e)| !e.1.is_integer())
                .map(|(k, (p, c))| (k.clone(), (p.clone(), c - c.floor())))
                .collect(),
        }
    }

    pub fn ceil(&self) -> QDivisor {
        QDivisor {
            support: self
                .support
                .iter()
                .map(|(k, (p, c))| (k.clone(), (p.clone(), c.ceil())))
                .filter(|(_, e)| !e.1.is_zero())
                .collect(),
        }
    }

    /// Move every point by `s`.
    pub fn translate(&self, s: &Scalar) -> QDivisor {
        let entries = self
            .support
            .values()
            .map(|(p, c)| {
                let q = match p {
                    Coord::Finite(x) => Coord::Finite(x.add(s)),
                    Coord::Inf => Coord::Inf,
                };
                (q, c.clone())
            })
            .collect();
        QDivisor::new(entries).unwrap()
    }
}

impl Serialize for QDivisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(String, String)> = self.support.values().map(|(p, c)| (p.to_string(), c.to_string())).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QDivisor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<(Coord, serde_json::Value)> = Vec::deserialize(d)?;
        let mut entries = Vec::new();
        for (p, c) in raw {
            let q = match &c {
                serde_json::Value::String(s) => parse_q(s),
                serde_json::Value::Number(n) => n.as_i64().map(|k| Q::from_integer(BigInt::from(k))),
                _ => None,
            }
            .ok_or_else(|| D::Error::custom(format!("bad rational coefficient {c}")))?;
            entries.push((p, q));
        }
        QDivisor::new(entries).map_err(D::Error::custom)
    }
}

fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DpdPresentation {
    /// `(P^1, D)` with `D` ample.
    Elliptic {
        #[serde(rename = "D")]
        d: QDivisor,
    },
    /// `(A^1, D)`.
    Parabolic {
        #[serde(rename = "D")]
        d: QDivisor,
    },
    /// `(A^1, D+, D-)` with `D+ + D- <= 0`.
    Hyperbolic {
        #[serde(rename = "Dplus")]
        plus: QDivisor,
        #[serde(rename = "Dminus")]
        minus: QDivisor,
    },
}

impl DpdPresentation {
    pub fn hyperbolic(plus: QDivisor, minus: QDivisor) -> Result<Self> {
        let p = DpdPresentation::Hyperbolic { plus, minus };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let affine = |d: &QDivisor| {
            if d.entries().any(|(p, _)| *p == Coord::Inf) {
                Err(Error::BadInput("the affine line has no point at infinity".into()))
            } else {
                Ok(())
            }
        };
        match self {
            DpdPresentation::Elliptic { d } => {
                if d.degree() <= Q::zero() {
                    return Err(Error::BadInput("elliptic D must have positive degree".into()));
                }
            }
            DpdPresentation::Parabolic { d } => affine(d)?,
            DpdPresentation::Hyperbolic { plus, minus } => {
                affine(plus)?;
                affine(minus)?;
                if plus.add(minus).entries().any(|(_, c)| *c > Q::zero()) {
                    return Err(Error::BadInput("D+ + D- must be <= 0".into()));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DpdPresentation::Elliptic { .. } => "elliptic",
            DpdPresentation::Parabolic { .. } => "parabolic",
            DpdPresentation::Hyperbolic { .. } => "hyperbolic",
        }
    }
}

/// Makar-Limanov class from the fractional parts.
pub fn classify_ml(p: &DpdPresentation) -> Result<MlClass> {
    p.validate()?;
    Ok(match p {
        DpdPresentation::Elliptic { d } if d.fractional_support().len() <= 2 => MlClass::ML0,
        DpdPresentation::Elliptic { .. } => MlClass::ML2,
        DpdPresentation::Parabolic { d } if d.fractional_support().len() <= 1 => MlClass::ML0,
        DpdPresentation::Parabolic { .. } => MlClass::ML1,
        DpdPresentation::Hyperbolic { plus, minus } => {
            let small = [plus, minus].iter().filter(|d| d.fractional_support().len() <= 1).count();
            match small {
                2 => MlClass::ML0,
                1 => MlClass::ML1,
                _ => MlClass::ML2,
            }
        }
    })
}

/// Toric test for hyperbolic presentations.
///
/// Fractional parts are taken in `(-1, 0]`, so `D0 = ceil(D+) = -ceil(D-)`.
pub fn is_toric(p: &DpdPresentation) -> Result<bool> {
    let DpdPresentation::Hyperbolic { plus, minus } = p else {
        return Err(Error::WrongKind(p.kind().into()));
    };
    p.validate()?;
    let (sp, sm) = (plus.fractional_support(), minus.fractional_support());
    if sp != sm || sp.len() > 1 {
        return Ok(false);
    }
    Ok(plus.ceil().add(&minus.ceil()).entries().next().is_none())
}

fn frac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn danilov_gizatullin(d: i64, r: i64) -> Result<DpdPresentation> {
    danilov_gizatullin_at(d, r, Scalar::zero(), Scalar::one())
}

/// `(A^1, -1/r [p0], -1/(d-r) [p1])`.
pub fn danilov_gizatullin_at(d: i64, r: i64, p0: Scalar, p1: Scalar) -> Result<DpdPresentation> {
    if d < 2 || r < 1 || r > d - 1 {
        return Err(Error::BadParams(format!("need d >= 2 and 1 <= r <= d-1, got d = {d}, r = {r}")));
    }
    if p0 == p1 {
        return Err(Error::BadParams("p0 and p1 must differ".into()));
    }
    DpdPresentation::hyperbolic(QDivisor::point(p0, frac(-1, r)), QDivisor::point(p1, frac(-1, d - r)))
}

/// `(A^1, -1/r [p+], -1/(d-r) [p-] - sum [p_i])`, dropping `D+` when `r = 1`
/// and the `p-` term when `r = d - 1`.
pub fn special_gizatullin(d: i64, r: i64, p_plus: Scalar, p_minus: Scalar, points: &[Scalar]) -> Result<DpdPresentation> {
    if d < 3 || r < 1 || r > d - 1 {
        return Err(Error::BadParams(format!("need d >= 3 and 1 <= r <= d-1, got d = {d}, r = {r}")));
    }
    if points.is_empty() {
        return Err(Error::BadParams("the reduced divisor needs at least one point".into()));
    }
    let use_plus = r != 1;
    let use_minus = r != d - 1;
    if use_plus && use_minus && p_plus == p_minus {
        return Err(Error::BadParams("p+ and p- must differ".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::BadParams(format!("point {p} repeated")));
        }
        if (use_plus && *p == p_plus) || (use_minus && *p == p_minus) {
            return Err(Error::BadParams(format!("point {p} coincides with p+ or p-")));
        }
    }
    let plus = if use_plus { QDivisor::point(p_plus, frac(-1, r)) } else { QDivisor::zero() };
    let mut minus = if use_minus { QDivisor::point(p_minus, frac(-1, d - r)) } else { QDivisor::zero() };
    for p in points {
        minus = minus.add(&QDivisor::point(p.clone(), -Q::one()));
    }
    DpdPresentation::hyperbolic(plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn div(v: &[(i64, i64, i64)]) -> QDivisor {
        QDivisor::new(v.iter().map(|&(p, n, d)| (Coord::Finite(Scalar::from_int(p)), frac(n, d))).collect()).unwrap()
    }

    #[test]
    fn classification() {
        let dg = danilov_gizatullin(5, 2).unwrap();
        assert_eq!(dg, DpdPresentation::hyperbolic(div(&[(0, -1, 2)]), div(&[(1, -1, 3)])).unwrap());
        assert_eq!(classify_ml(&dg).unwrap(), MlClass::ML0);
        let par = DpdPresentation::Parabolic { d: div(&[(0, 1, 2), (1, 1, 3)]) };
        assert_eq!(classify_ml(&par).unwrap(), MlClass::ML1);
        let hyp = DpdPresentation::hyperbolic(div(&[(0, -1, 2), (1, -1, 2)]), div(&[(2, -1, 2), (3, -1, 2)])).unwrap();
        assert_eq!(classify_ml(&hyp).unwrap(), MlClass::ML2);
        let ell = DpdPresentation::Elliptic { d: div(&[(0, 1, 2), (1, 1, 2), (2, 1, 2)]) };
        assert_eq!(classify_ml(&ell).unwrap(), MlClass::ML2);
        assert_eq!(classify_ml(&danilov_gizatullin(2, 1).unwrap()).unwrap(), MlClass::ML0);
    }

    #[test]
    fn toric() {
        let h = DpdPresentation::hyperbolic(div(&[(0, -1, 2)]), div(&[(0, -1, 2)])).unwrap();
        assert!(is_toric(&h).unwrap());
        assert!(is_toric(&DpdPresentation::hyperbolic(QDivisor::zero(), QDivisor::zero()).unwrap()).unwrap());
        assert!(!is_toric(&danilov_gizatullin(5, 2).unwrap()).unwrap());
        let p = DpdPresentation::Parabolic { d: QDivisor::zero() };
        assert_eq!(is_toric(&p).unwrap_err().code(), "wrong_kind");
    }

    #[test]
    fn constructors() {
        let s = special_gizatullin(3, 2, Scalar::zero(), Scalar::one(), &[Scalar::from_int(5)]).unwrap();
        assert_eq!(s, DpdPresentation::hyperbolic(div(&[(0, -1, 2)]), div(&[(5, -1, 1)])).unwrap());
        assert_eq!(danilov_gizatullin(3, 3).unwrap_err().code(), "bad_params");
        assert_eq!(danilov_gizatullin(1, 1).unwrap_err().code(), "bad_params");
        let same = special_gizatullin(5, 2, Scalar::zero(), Scalar::zero(), &[Scalar::one()]);
        assert_eq!(same.unwrap_err().code(), "bad_params");
    }

    #[test]
    fn json_round_trip() {
        let dg = danilov_gizatullin(5, 2).unwrap();
        let v = serde_json::to_value(&dg).unwrap();
        assert_eq!(v, serde_json::json!({"kind":"hyperbolic","Dplus":[["0","-1/2"]],"Dminus":[["1","-1/3"]]}));
        let back: DpdPresentation = serde_json::from_value(v).unwrap();
        assert_eq!(back, dg);
    }
}
