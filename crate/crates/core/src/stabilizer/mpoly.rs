//! Sparse Laurent polynomials over [`Scalar`] in a fixed number of variables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::Result;
use crate::formal_series::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(nvars: usize, exps: Vec<i64>, c: Scalar) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        MPoly::monomial(nvars, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(nvars, e, Scalar::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<i64>, c: Scalar) {
        let s = match self.terms.remove(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(e, s);
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Scalar) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.mul(k));
        }
        r
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                r.add_term(e, c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut r = MPoly::constant(self.nvars, Scalar::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Largest exponent of variable `i`, if it occurs.
    pub fn degree_in(&self, i: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[i]).filter(|&x| x != 0).max()
    }

    /// Coefficient of `var_i^k`, as a polynomial not involving `var_i`.
    pub fn coeff_in(&self, i: usize, k: i64) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e = e.clone();
                e[i] = 0;
                r.add_term(e, c.clone());
            }
        }
        r
    }

    /// Replace `var_i` by `p`; `var_i` must occur with nonnegative exponents.
    pub fn substitute(&self, i: usize, p: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i];
            assert!(k >= 0, "negative power of a substituted variable");
            let mut e = e.clone();
            e[i] = 0;
            let rest = MPoly::monomial(self.nvars, e, c.clone());
            r = r.add(&rest.mul(&p.pow(k as u32)));
        }
        r
    }

    pub fn as_monomial(&self) -> Option<(&Vec<i64>, &Scalar)> {
        match self.terms.len() {
            1 => self.terms.iter().next(),
            _ => None,
        }
    }

    /// Divide by a monomial `c x^e`.
    pub fn div_monomial(&self, e: &[i64], c: &Scalar) -> Result<MPoly> {
        let inv = c.inv()?;
        let mut r = MPoly::zero(self.nvars);
        for (f, d) in &self.terms {
            let g = f.iter().zip(e).map(|(x, y)| x - y).collect();
            r.add_term(g, d.mul(&inv));
        }
        Ok(r)
    }

    /// Remove the largest monomial factor `x^e` (componentwise minimum).
    pub fn strip_monomial(&self) -> MPoly {
        let Some(first) = self.terms.keys().next() else {
            return self.clone();
        };
        let mut lo = first.clone();
        for e in self.terms.keys() {
            for (l, x) in lo.iter_mut().zip(e) {
                *l = (*l).min(*x);
            }
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(&lo).map(|(x, l)| x - l).collect(), c.clone())).collect(),
        }
    }

    pub fn eval(&self, vals: &[Scalar]) -> Result<Scalar> {
        let mut s = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in vals.iter().zip(e) {
                if k != 0 {
                    t = t.mul(&v.pow(k)?);
                }
            }
            s = s.add(&t);
        }
        Ok(s)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse(e.iter().sum::<i64>()));
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let mono = mono.join("*");
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if c.terms().count() == 1 => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            let coef = if c.terms().count() > 1 { format!("({body})") } else { body };
            let term = match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef,
                (false, "1") => mono,
                (false, _) => format!("{coef}*{mono}"),
            };
            match (idx, neg) {
                (0, true) => write!(out, "-{term}"),
                (0, false) => write!(out, "{term}"),
                (_, true) => write!(out, " - {term}"),
                (_, false) => write!(out, " + {term}"),
            }
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let a = MPoly::var(2, 0);
        let b = MPoly::var(2, 1);
        let p = a.mul(&a).sub(&b.scale(&Scalar::from_int(3)));
        assert_eq!(p.fmt_with(&names), "a^2 - 3*b");
        assert_eq!(p.substitute(1, &a).fmt_with(&names), "a^2 - 3*a");
        assert_eq!(p.substitute(1, &a).strip_monomial().fmt_with(&names), "a - 3");
        let vals = [Scalar::from_int(2), Scalar::from_int(1)];
        assert_eq!(p.eval(&vals).unwrap(), Scalar::one());
        assert!(a.sub(&a).is_zero());
    }
}
