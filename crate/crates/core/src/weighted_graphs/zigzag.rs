use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::tree::WeightedTree;
use super::TreeVertex;
use crate::error::{Error, Result};

/// A weighted chain `[[w0, ..., wn]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Zigzag {
    pub weights: Vec<BigInt>,
}

impl Zigzag {
    pub fn new(weights: Vec<BigInt>) -> Self {
        Zigzag { weights }
    }

    pub fn from_i64(w: &[i64]) -> Self {
        Zigzag { weights: w.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `[[0]]`, `[[0,0]]`, `[[0,0,0]]`, `[[0,0,0,0]]`, or `[[0,0,w2..]]` with every `wi <= -2`.
    pub fn is_standard(&self) -> bool {
        let w = &self.weights;
        if w.is_empty() {
            return false;
        }
        if w.len() <= 4 && w.iter().all(Zero::is_zero) {
            return true;
        }
        w.len() >= 3 && w[0].is_zero() && w[1].is_zero() && w[2..].iter().all(|x| *x <= BigInt::from(-2))
    }

    pub fn to_tree(&self) -> WeightedTree {
        let vertices = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, w)| TreeVertex { weight: w.clone(), ..TreeVertex::plain(i, 0) })
            .collect();
        let edges = (1..self.len()).map(|i| [i - 1, i]).collect();
        WeightedTree { vertices, edges }
    }

    pub fn from_tree(t: &WeightedTree) -> Option<Zigzag> {
        let order = t.path_order()?;
        Some(Zigzag { weights: order.iter().map(|&id| t.weight(id).unwrap().clone()).collect() })
    }
}

impl fmt::Debug for Zigzag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Zigzag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "[[{}]]", parts.join(","))
    }
}

impl Serialize for Zigzag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for w in &self.weights {
            match w.to_i64() {
                Some(x) => seq.serialize_element(&x)?,
                None => seq.serialize_element(&w.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Zigzag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Zigzag, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "super::int_serde")] BigInt);
        let v: Vec<W> = Vec::deserialize(d)?;
        Ok(Zigzag { weights: v.into_iter().map(|w| w.0).collect() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Left neighbor gains one, right neighbor loses one.
    Right,
    /// Left neighbor loses one, right neighbor gains one.
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Left,
    Right,
}

/// One step of a standardization log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    Elementary { index: usize, dir: Direction },
    Blowdown { index: usize },
    /// Blow up the edge between `index` and `index + 1`.
    BlowupEdge { index: usize },
    BlowupOuter { end: End },
    Reverse,
}

fn apply(w: &mut Vec<BigInt>, m: &Move) -> Result<()> {
    match *m {
        Move::Elementary { index, dir } => {
            let cur = w.get(index).ok_or(Error::BadIndex(index))?;
            if !cur.is_zero() {
                return Err(Error::NotApplicable(index));
            }
            let (dl, dr) = match dir {
                Direction::Right => (1, -1),
                Direction::Left => (-1, 1),
            };
            if index > 0 {
                w[index - 1] += dl;
            }
            if index + 1 < w.len() {
                w[index + 1] += dr;
            }
        }
        Move::Blowdown { index } => {
            let cur = w.get(index).ok_or(Error::BadIndex(index))?;
            if *cur != -BigInt::one() || w.len() < 2 {
                return Err(Error::NotContractibleVertex(index));
            }
            if index > 0 {
                w[index - 1] += 1;
            }
            if index + 1 < w.len() {
                w[index + 1] += 1;
            }
            w.remove(index);
        }
        Move::BlowupEdge { index } => {
            if index + 1 >= w.len() {
                return Err(Error::BadIndex(index));
            }
            w[index] -= 1;
            w[index + 1] -= 1;
            w.insert(index + 1, -BigInt::one());
        }
        Move::BlowupOuter { end } => {
            if w.is_empty() {
                return Err(Error::BadInput("empty chain".into()));
            }
            match end {
                End::Left => {
                    w[0] -= 1;
                    w.insert(0, -BigInt::one());
                }
                End::Right => {
                    *w.last_mut().unwrap() -= 1;
                    w.push(-BigInt::one());
                }
            }
        }
        Move::Reverse => {
            let z = revert(&Zigzag { weights: std::mem::take(w) })?;
            *w = z.weights;
        }
    }
    Ok(())
}

/// Apply one elementary transformation at a zero vertex.
pub fn elementary_transform(z: &Zigzag, index: usize, dir: Direction) -> Result<Zigzag> {
    let mut w = z.weights.clone();
    apply(&mut w, &Move::Elementary { index, dir })?;
    Ok(Zigzag { weights: w })
}

/// Replay a move log.
pub fn replay(z: &Zigzag, log: &[Move]) -> Result<Zigzag> {
    let mut w = z.weights.clone();
    for m in log {
        apply(&mut w, m)?;
    }
    Ok(Zigzag { weights: w })
}

/// Reverse the tail of a standard zigzag.
pub fn revert(z: &Zigzag) -> Result<Zigzag> {
    if !z.is_standard() {
        return Err(Error::NotStandard);
    }
    let mut w = z.weights.clone();
    if w.len() > 2 {
        w[2..].reverse();
    }
    Ok(Zigzag { weights: w })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Standardized {
    pub form: Zigzag,
    /// The other representative under reversion, when it differs.
    pub reversed_form: Option<Zigzag>,
    pub log: Vec<Move>,
}

struct Run {
    w: Vec<BigInt>,
    log: Vec<Move>,
}

impl Run {
    fn step(&mut self, m: Move) {
        apply(&mut self.w, &m).expect("standardization step");
        self.log.push(m);
    }

    fn repeat(&mut self, m: Move, times: &BigInt) {
        let n = times.to_u64().expect("move count");
        for _ in 0..n {
            self.step(m.clone());
        }
    }
}

/// Bring a chain to standard form by elementary moves, blowups and blowdowns.
///
/// Of the two forms related by reversion, the lexicographically smaller is returned.
pub fn standardize(z: &Zigzag) -> Result<Standardized> {
    if z.is_empty() {
        return Err(Error::BadInput("empty zigzag".into()));
    }
    let mut run = Run { w: z.weights.clone(), log: Vec::new() };
    if !z.is_standard() {
        reduce(&mut run)?;
    }
    let form = Zigzag { weights: run.w.clone() };
    let rev = revert(&form)?;
    if rev == form {
        return Ok(Standardized { form, reversed_form: None, log: run.log });
    }
    if rev < form {
        run.log.push(Move::Reverse);
        return Ok(Standardized { form: rev, reversed_form: Some(form), log: run.log });
    }
    Ok(Standardized { form, reversed_form: Some(rev), log: run.log })
}

fn reduce(run: &mut Run) -> Result<()> {
    let minus_one = -BigInt::one();
    while run.w.len() >= 2 {
        match run.w.iter().position(|x| *x == minus_one) {
            Some(i) => run.step(Move::Blowdown { index: i }),
            None => break,
        }
    }
    let Some(mut v) = run.w.iter().position(|x| !x.is_negative()) else {
        return Err(Error::NotStandardizable(format!(
            "{} has no vertex of nonnegative weight after blowdowns",
            Zigzag { weights: run.w.clone() }
        )));
    };
    while run.w[v].is_positive() {
        if v + 1 < run.w.len() {
            run.step(Move::BlowupEdge { index: v });
        } else if v > 0 {
            run.step(Move::BlowupEdge { index: v - 1 });
            v += 1;
        } else {
            run.step(Move::BlowupOuter { end: End::Right });
        }
    }
    if run.w.len() == 1 {
        return Ok(());
    }
    // make a neighbor of v zero
    let (u, raise) = if v + 1 < run.w.len() { (v + 1, Direction::Left) } else { (v - 1, Direction::Right) };
    let lower = if raise == Direction::Left { Direction::Right } else { Direction::Left };
    let wu = run.w[u].clone();
    if wu.is_negative() {
        run.repeat(Move::Elementary { index: v, dir: raise }, &-wu);
    } else {
        run.repeat(Move::Elementary { index: v, dir: lower }, &wu);
    }
    // slide the zero pair to the front
    let mut p = v.min(u);
    while p > 0 {
        let a = run.w[p - 1].clone();
        if a.is_negative() {
            run.repeat(Move::Elementary { index: p, dir: Direction::Right }, &-a);
        } else {
            run.repeat(Move::Elementary { index: p, dir: Direction::Left }, &a);
        }
        p -= 1;
    }
    // clean the tail
    loop {
        if run.w.len() <= 2 {
            return Ok(());
        }
        if let Some(i) = (2..run.w.len()).find(|&i| run.w[i] == minus_one) {
            run.step(Move::Blowdown { index: i });
            if i == 2 {
                run.step(Move::Elementary { index: 0, dir: Direction::Right });
            }
            continue;
        }
        if run.w[2..].iter().any(|x| !x.is_negative()) {
            if (Zigzag { weights: run.w.clone() }).is_standard() {
                return Ok(());
            }
            return reduce_tail(run);
        }
        return Ok(());
    }
}

/// `[[0,0,T]]` with a tail that is not negative definite: the tail is
/// reduced on its own, then the zero pair absorbs the drift of `w1`.
fn reduce_tail(run: &mut Run) -> Result<()> {
    let mut sub = Run { w: run.w[2..].to_vec(), log: Vec::new() };
    reduce(&mut sub)?;
    for m in sub.log {
        run.step(match m {
            Move::Elementary { index, dir } => Move::Elementary { index: index + 2, dir },
            Move::Blowdown { index } => Move::Blowdown { index: index + 2 },
            Move::BlowupEdge { index } => Move::BlowupEdge { index: index + 2 },
            Move::BlowupOuter { end: End::Left } => Move::BlowupEdge { index: 1 },
            Move::BlowupOuter { end: End::Right } => Move::BlowupOuter { end: End::Right },
            Move::Reverse => unreachable!("reduce does not reverse"),
        });
    }
    let w1 = run.w[1].clone();
    if w1.is_negative() {
        run.repeat(Move::Elementary { index: 0, dir: Direction::Left }, &-w1);
    } else {
        run.repeat(Move::Elementary { index: 0, dir: Direction::Right }, &w1);
    }
    let cur = Zigzag { weights: run.w.clone() };
    if cur.is_standard() {
        return Ok(());
    }
    Err(Error::NotStandardizable(format!("{cur} has more than one positive direction in its intersection form")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(w: &[i64]) -> Zigzag {
        Zigzag::from_i64(w)
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_transform(&z(&[-3, 0, -1]), 1, Direction::Right).unwrap(), z(&[-2, 0, -2]));
        assert_eq!(elementary_transform(&z(&[-2, 0, -2]), 1, Direction::Left).unwrap(), z(&[-3, 0, -1]));
        assert_eq!(elementary_transform(&z(&[-2, 0, -2]), 1, Direction::Right).unwrap(), z(&[-1, 0, -3]));
        let once = elementary_transform(&z(&[0, 0]), 0, Direction::Right).unwrap();
        assert_eq!(elementary_transform(&once, 0, Direction::Left).unwrap(), z(&[0, 0]));
        assert_eq!(elementary_transform(&z(&[1, 0]), 0, Direction::Left), Err(Error::NotApplicable(0)));
        assert_eq!(elementary_transform(&z(&[1, 0]), 5, Direction::Left), Err(Error::BadIndex(5)));
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&z(&[3])).unwrap().form, z(&[0, 0, -2, -2]));
        assert_eq!(standardize(&z(&[0, 0, -5])).unwrap().form, z(&[0, 0, -5]));
        let r = standardize(&z(&[2, -1, -3])).unwrap();
        assert_eq!(r.form, z(&[0, 0, -3, -2, -2]));
        assert_eq!(r.reversed_form, Some(z(&[0, 0, -2, -2, -3])));
        assert_eq!(replay(&z(&[2, -1, -3]), &r.log).unwrap(), r.form);
        assert_eq!(standardize(&z(&[-2, -2])).unwrap_err().code(), "not_standardizable");
        let r = standardize(&z(&[-1, 0, 1, 3])).unwrap();
        assert_eq!(r.form, z(&[0, 0, 0, 0]));
        assert_eq!(replay(&z(&[-1, 0, 1, 3]), &r.log).unwrap(), r.form);
    }

    #[test]
    fn revert_examples() {
        assert_eq!(revert(&z(&[0, 0, -2, -3])).unwrap(), z(&[0, 0, -3, -2]));
        assert_eq!(revert(&z(&[0, 0, -2, -2, -2])).unwrap(), z(&[0, 0, -2, -2, -2]));
        assert_eq!(revert(&z(&[0, 0, -4, -2, -3])).unwrap(), z(&[0, 0, -3, -2, -4]));
        assert_eq!(revert(&z(&[0, -1, -2])), Err(Error::NotStandard));
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&z(&[0, 0, -2])).unwrap();
        assert_eq!(s, "[0,0,-2]");
        let back: Zigzag = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z(&[0, 0, -2]));
    }
}
