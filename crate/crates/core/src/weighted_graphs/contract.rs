use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::tree::WeightedTree;
use crate::error::{Error, Result};

type Q = BigRational;

/// `F^2` for `F = sum m_i T_i`, using the stored multiplicities.
pub fn fiber_self_intersection(t: &WeightedTree) -> Result<BigInt> {
    let mult = |id: usize| -> Result<BigInt> {
        t.vertex(id)
            .and_then(|v| v.multiplicity)
            .map(BigInt::from)
            .ok_or_else(|| Error::NotAFiber(format!("vertex {id} has no multiplicity")))
    };
    let mut total = BigInt::zero();
    for v in &t.vertices {
        let m = mult(v.id)?;
        total += &m * &m * &v.weight;
    }
    for &[a, b] in &t.edges {
        total += BigInt::from(2) * mult(a)? * mult(b)?;
    }
    Ok(total)
}

/// Solve `F . T_i = 0` for all `i` with `m(anchor) = 1`.
pub fn infer_multiplicities(t: &WeightedTree, anchor: usize) -> Result<Vec<(usize, u64)>> {
    let ids: Vec<usize> = t.vertices.iter().map(|v| v.id).collect();
    let n = ids.len();
    let col = |id: usize| ids.iter().position(|&x| x == id).unwrap();
    let a = col(anchor);
    // rows: F.T_i = 0; unknowns: all m_j except the anchor
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(n);
    for v in &t.vertices {
        let mut row = vec![Q::zero(); n + 1];
        row[col(v.id)] += Q::from_integer(v.weight.clone());
        for nb in t.neighbors(v.id) {
            row[col(nb)] += Q::one();
        }
        // move the anchor column to the right-hand side
        row[n] = -row[a].clone();
        row[a] = Q::zero();
        rows.push(row);
    }
    let sol = solve_rect(rows, n, a).ok_or_else(|| Error::NotAFiber("multiplicity system is inconsistent".into()))?;
    let mut out = Vec::with_capacity(n);
    for (i, id) in ids.iter().enumerate() {
        let m = if i == a { Q::one() } else { sol[i].clone() };
        if !m.is_integer() || !m.is_positive() {
            return Err(Error::NotAFiber(format!("component {id} gets multiplicity {m}")));
        }
        out.push((*id, m.to_integer().to_u64().unwrap()));
    }
    Ok(out)
}

/// Unique solution of an overdetermined system, ignoring column `skip`.
fn solve_rect(mut rows: Vec<Vec<Q>>, n: usize, skip: usize) -> Option<Vec<Q>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if c == skip {
            continue;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            return None;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..=n {
                    let v = &rows[r][k] * &f;
                    rows[i][k] -= v;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut sol = vec![Q::zero(); n];
    for (r, c) in pivots {
        sol[c] = rows[r][n].clone();
    }
    Some(sol)
}

/// A sequence of `(-1)`-contractions that avoids the component meeting the section
/// and ends at a single `0`-curve.
///
/// Ties go to the highest id.
pub fn contraction_order(fiber: &WeightedTree, section_attach: usize) -> Result<Vec<usize>> {
    fiber.validate()?;
    if fiber.vertex(section_attach).is_none() {
        return Err(Error::BadIndex(section_attach));
    }
    let mut t = fiber.clone();
    if t.vertices.iter().any(|v| v.multiplicity.is_none()) {
        let ms = infer_multiplicities(&t, section_attach)?;
        for (v, (_, m)) in t.vertices.iter_mut().zip(ms) {
            v.multiplicity = Some(m);
        }
    }
    let f2 = fiber_self_intersection(&t)?;
    if !f2.is_zero() {
        return Err(Error::NotAFiber(format!("F^2 = {f2}")));
    }
    let minus_one = -BigInt::one();
    let mut order = Vec::new();
    while t.len() > 1 {
        let next = t
            .vertices
            .iter()
            .filter(|v| v.id != section_attach && v.weight == minus_one && t.degree(v.id) <= 2)
            .map(|v| v.id)
            .max()
            .ok_or_else(|| Error::NotAFiber("no (-1)-component away from the section".into()))?;
        t = t.blowdown_unchecked(next);
        order.push(next);
    }
    if !t.vertices[0].weight.is_zero() {
        return Err(Error::NotAFiber(format!("final component has weight {}", t.vertices[0].weight)));
    }
    Ok(order)
}
