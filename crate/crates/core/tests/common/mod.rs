//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use fibra_core::amalgam::{mat_mul, FiniteGroup, Group, Mat2, TreeOfGroups, Word, EdgeSpec};
use fibra_core::fiber_tower::{build_tower, BlowupSpec, Center, FiberModel};
use fibra_core::formal_series::{Coord, Field, Poly, Scalar, Series};
use fibra_core::puiseux::PuiseuxSpace;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn s(x: &str) -> Scalar {
    x.parse().unwrap()
}

pub fn poly(v: &[i64]) -> Poly {
    Poly::new(v.iter().map(|&x| Scalar::from_int(x)).collect())
}

pub const POOL: [&str; 5] = ["0", "1", "-1", "2", "1/2"];

pub fn random_coord(r: &mut ChaCha8Rng) -> Coord {
    if r.gen_bool(0.3) {
        Coord::Inf
    } else {
        Coord::Finite(s(POOL[r.gen_range(0..POOL.len())]))
    }
}

/// A valid tower with at most `depth` blowups; invalid draws are redrawn.
pub fn random_tower(r: &mut ChaCha8Rng, depth: usize) -> (BlowupSpec, FiberModel) {
    let target = r.gen_range(0..=depth);
    let mut spec = BlowupSpec::new(Scalar::zero(), vec![]);
    let mut model = build_tower(&spec).unwrap();
    let mut tries = 0;
    while spec.blowups.len() < target && tries < 200 {
        tries += 1;
        let c = Center::new(r.gen_range(0..model.len()), random_coord(r));
        let mut next = spec.clone();
        next.blowups.push(c);
        if let Ok(m) = build_tower(&next) {
            spec = next;
            model = m;
        }
    }
    (spec, model)
}

/// Points of the top surface at pool coordinates or infinity that still exist.
pub fn points(model: &FiberModel) -> Vec<Center> {
    let mut out = Vec::new();
    for k in 0..model.len() {
        let mut coords: Vec<Coord> = POOL.iter().map(|q| Coord::Finite(s(q))).collect();
        coords.push(Coord::Inf);
        for at in coords {
            let c = Center::new(k, at);
            if model.locate(&c).is_ok() {
                out.push(c);
            }
        }
    }
    out
}

pub fn smooth_points(model: &FiberModel) -> Vec<Center> {
    points(model).into_iter().filter(|c| model.locate(c).unwrap().y.is_none()).collect()
}

pub fn node_points(model: &FiberModel) -> Vec<Center> {
    model.nodes.iter().map(|n| n.repr.clone()).collect()
}

fn constant(q: &Scalar, order: usize) -> Series {
    Series::new(vec![q.clone()], order)
}

/// Local coordinates at `T_k(at)` written in the coordinates at the center of `T_k`.
pub fn push_once(at: &Coord, u: &Series, v: &Series) -> (Series, Series) {
    match at {
        Coord::Finite(q) => (u.clone(), u.mul(&v.add(&constant(q, v.order())))),
        Coord::Inf => (u.mul(v), v.clone()),
    }
}

/// Arc at a point of the top surface, as `(x - beta, y)` on the base.
pub fn push_to_base(model: &FiberModel, p: &Center, u: &Series, v: &Series) -> (Series, Series) {
    let mut trail = push_trail(model, p, u, v);
    trail.pop().unwrap().1
}

/// The arc at every level, top first, each paired with the point it passes through.
pub fn push_trail(model: &FiberModel, p: &Center, u: &Series, v: &Series) -> Vec<(Center, (Series, Series))> {
    let mut out = vec![(p.clone(), (u.clone(), v.clone()))];
    let mut at = p.clone();
    let (mut u, mut v) = (u.clone(), v.clone());
    while at.on != 0 {
        (u, v) = push_once(&at.at, &u, &v);
        at = model.components[at.on].center.clone().unwrap();
        out.push((at.clone(), (u.clone(), v.clone())));
    }
    let Coord::Finite(q) = &at.at else { panic!("center on the section") };
    let base = (u.clone(), v.add(&constant(q, v.order())));
    out.push((Center::new(0, at.at.clone()), base));
    out
}

/// `y(t(s))` where `x(t(s)) = s^m`.
pub fn normalize(x: &Series, y: &Series) -> (usize, Series) {
    let m = x.valuation().unwrap();
    let unit = Series::new(x.coeffs()[m..].to_vec(), x.order() - m);
    let root = unit.unit_root(m as u32, Field::Radical).unwrap();
    let sfun = Series::var(unit.order()).mul(&root);
    let tfun = sfun.reverse().unwrap();
    (m, y.compose(&tfun).unwrap())
}

/// Pui of a smooth point from two pushed arcs through it.
///
/// The expansion order is doubled until the arcs separate.
pub fn oracle_space(model: &FiberModel, p: &Center, order: usize) -> PuiseuxSpace {
    let mut order = order;
    loop {
        if let Some(w) = oracle_space_at(model, p, order) {
            return w;
        }
        order *= 2;
    }
}

fn oracle_space_at(model: &FiberModel, p: &Center, order: usize) -> Option<PuiseuxSpace> {
    let t = Series::var(order);
    let (x0, y0) = push_to_base(model, p, &t, &Series::zero(order));
    let (x1, y1) = push_to_base(model, p, &t, &t);
    let (m, a) = normalize(&x0, &y0);
    let (m1, b) = normalize(&x1, &y1);
    assert_eq!(m, m1);
    let lim = a.order().min(b.order());
    let e = (0..lim).find(|&i| a.coeff(i) != b.coeff(i))?;
    Some(PuiseuxSpace::base(a.truncate(e).to_poly(), m as u32, e as u32).unwrap())
}

/// `(positive, zero, negative)` eigenvalue counts of the chain's intersection matrix.
pub fn inertia(w: &[i64]) -> (usize, usize, usize) {
    let (p, z, n, _) = lattice_invariants(w);
    (p, z, n)
}

/// Inertia plus the discriminant of the lattice modulo its radical.
///
/// All four are unchanged by blowups, blowdowns and elementary moves.
pub fn lattice_invariants(w: &[i64]) -> (usize, usize, usize, BigInt) {
    // det(xI - M) by the tridiagonal recurrence; integer coefficients, low to high
    let mut prev: Vec<BigInt> = vec![BigInt::from(1)];
    let mut cur: Vec<BigInt> = vec![BigInt::from(-w[0]), BigInt::from(1)];
    for &wi in &w[1..] {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * wi;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    let zero = cur.iter().position(|c| !c.is_zero()).unwrap();
    let nz: Vec<&BigInt> = cur[zero..].iter().collect();
    let changes = |alt: bool| {
        let signs: Vec<bool> = nz
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c.is_positive() ^ (alt && i % 2 == 1))
            .collect();
        signs.windows(2).filter(|p| p[0] != p[1]).count()
    };
    let disc = match zero {
        0 => cur[0].abs(),
        1 => {
            // adj M = c k k^T for the primitive kernel vector k; trace adj = -coef_1
            let mut k = vec![BigInt::from(1), BigInt::from(-w[0])];
            for i in 1..w.len() - 1 {
                let next = -(&k[i] * w[i] + &k[i - 1]);
                k.push(next);
            }
            k.truncate(w.len());
            let norm: BigInt = k.iter().map(|x| x * x).sum();
            cur[1].abs() / norm
        }
        _ => BigInt::zero(),
    };
    (changes(false), zero, changes(true), disc)
}

pub const S: Mat2 = [[0, -1], [1, 0]];
pub const U: Mat2 = [[0, -1], [1, 1]];

pub fn mat_pow(m: &Mat2, k: usize) -> Mat2 {
    (0..k).fold([[1, 0], [0, 1]], |acc, _| mat_mul(&acc, m))
}

/// `Z/4 *_{Z/2} Z/6` with `2 <-> 3`.
pub fn z4_z6() -> TreeOfGroups<usize> {
    let groups: Vec<Box<dyn Group<usize>>> = vec![Box::new(FiniteGroup::cyclic(4)), Box::new(FiniteGroup::cyclic(6))];
    let edge = EdgeSpec::from_pairs([0, 1], vec![(0, 0), (2, 3)], [vec![0, 1], vec![0, 1, 2]]);
    TreeOfGroups::new(groups, vec![edge], 0).unwrap()
}

/// The isomorphism onto `SL2(Z)`: the `Z/4` generator goes to `S`, the `Z/6` one to `U`.
pub fn sl2(w: &Word<usize>) -> Mat2 {
    w.letters.iter().fold([[1, 0], [0, 1]], |acc, (v, e)| {
        let g = if *v == 0 { mat_pow(&S, *e) } else { mat_pow(&U, *e) };
        mat_mul(&acc, &g)
    })
}

/// `#{(a, b) in mu_n^2 : a^u b^v = 1 for every row}`.
pub fn torus_count(rows: &[[i64; 2]], n: i64) -> usize {
    let mut c = 0;
    for i in 0..n {
        for j in 0..n {
            if rows.iter().all(|r| (r[0] * i + r[1] * j).rem_euclid(n) == 0) {
                c += 1;
            }
        }
    }
    c
}
