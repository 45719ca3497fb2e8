//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#[path = "../common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::*;
use fibra_core::amalgam::Word;
use fibra_core::dpd::{classify_ml, danilov_gizatullin, is_toric, special_gizatullin, DpdPresentation, QDivisor};
use fibra_core::fiber_tower::{build_tower, extended_divisor, BlowupSpec, Center, FiberModel};
use fibra_core::formal_series::{Coord, Field, Poly, Scalar, Series, Q};
use fibra_core::puiseux::{arc_multiplicity, descend_finite, descend_infinite, pui_of_center, pui_of_point, PuiseuxSpace};
use fibra_core::stabilizer::{aut_report, fiber_stabilizer, torus_from_relations, torus_part, Fibration, TorusSummary};
use fibra_core::weighted_graphs::{contraction_order, replay, revert, standardize, MlClass, Zigzag};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const LIMITS: [Duration; 10] = [
    Duration::from_secs(1),
    Duration::from_secs(10),
    Duration::from_secs(30),
    Duration::from_secs(60),
    Duration::from_secs(60),
    Duration::from_secs(60),
    Duration::from_secs(30),
    Duration::from_secs(30),
    Duration::from_secs(30),
    Duration::from_secs(30),
];

fn spec_222() -> BlowupSpec {
    BlowupSpec::new(
        Scalar::zero(),
        vec![Center::new(0, Coord::zero()), Center::new(1, Coord::Inf), Center::new(2, Coord::Finite(Scalar::one()))],
    )
}

fn golden_222() -> Outcome {
    let model = build_tower(&spec_222()).map_err(|e| e.to_string())?;
    let w = pui_of_center(&model, 3, Field::Rational).map_err(|e| e.to_string())?;
    ensure!((w.psi.clone(), w.n, w.d) == (poly(&[0, 1]), 2, 2), "Pui(p3) = {w:?}");
    let mult: Vec<u64> = model.components.iter().map(|c| c.multiplicity).collect();
    ensure!(mult == [1, 1, 2, 2], "multiplicities {mult:?}");
    let desc = fiber_stabilizer(&model, Field::Rational).map_err(|e| e.to_string())?;
    ensure!(desc.constraints == ["c0 = 0", "b0^2 = a"], "constraints {:?}", desc.constraints);
    ensure!(desc.n_trunc == 1, "N = {}", desc.n_trunc);
    let torus = torus_part(&desc).map_err(|e| e.to_string())?;
    ensure!(torus.rank == 1 && torus.relations == [[-1, 2]], "torus {torus:?}");
    ensure!(torus.slice == TorusSummary { rank: 0, torsion: 2 }, "slice {:?}", torus.slice);
    let ext = extended_divisor(&model, &Zigzag::from_i64(&[0, -1])).map_err(|e| e.to_string())?;
    ensure!(ext.spine_weights == Zigzag::from_i64(&[0, -1, -2, -2, -2]), "spine {}", ext.spine_weights);
    ensure!(ext.feathers.len() == 1 && ext.feathers[0].attached_to == 3, "feathers {:?}", ext.feathers);
    let bridge = ext.feathers[0].components[0];
    ensure!(ext.feathers[0].components.len() == 1, "feather length");
    ensure!(model.components[bridge].weight == BigInt::from(-1), "feather weight");
    Ok("Pui(t,2,2), mult (1,1,2,2), {c0 = 0, b0^2 = a}, N = 1, b^2 = a, slice Z/2, spine [[0,-1,-2,-2,-2]] + (-1) feather".into())
}

fn zigzag_forms() -> Outcome {
    for d in 2..=8i64 {
        let mut want = vec![0, 0];
        want.extend(std::iter::repeat(-2).take(d as usize - 1));
        let got = standardize(&Zigzag::from_i64(&[d])).map_err(|e| e.to_string())?.form;
        ensure!(got == Zigzag::from_i64(&want), "[[{d}]] -> {got}");
    }
    // invariants of [[0,0,w..]], [[0]], [[0,0,0]] and [[0,0,0,0]]
    let admits_standard = |w: &[i64]| {
        let (pos, zero, _, disc) = lattice_invariants(w);
        let unimodular = disc == BigInt::from(1);
        (pos, zero) == (1, 0) || ((pos, zero) == (0, 1) || (pos, zero) == (1, 1) || (pos, zero) == (2, 0)) && unimodular
    };
    let mut r = rng(2);
    let (mut ok, mut refused) = (0, 0);
    for _ in 0..1000 {
        let len = r.gen_range(1..=8);
        let w: Vec<i64> = (0..len).map(|_| r.gen_range(-6..=6)).collect();
        let z = Zigzag::from_i64(&w);
        let (pos, zero, _) = inertia(&w);
        match standardize(&z) {
            Ok(st) => {
                ok += 1;
                ensure!(st.form.is_standard(), "{z} -> {} is not standard", st.form);
                let again = standardize(&st.form).map_err(|e| e.to_string())?;
                ensure!(again.form == st.form, "not idempotent on {z}");
                ensure!(replay(&z, &st.log).map_err(|e| e.to_string())? == st.form, "log replay differs on {z}");
                let rr = revert(&revert(&st.form).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                ensure!(rr == st.form, "revert twice on {}", st.form);
                let fw: Vec<i64> = st.form.weights.iter().map(|x| i64::try_from(x).unwrap()).collect();
                let (p2, z2, _) = inertia(&fw);
                ensure!((pos, zero) == (p2, z2), "{z} and {} have different inertia", st.form);
            }
            Err(e) => {
                refused += 1;
                ensure!(e.code() == "not_standardizable", "{z}: {e}");
                ensure!(!admits_standard(&w), "{z} refused but its lattice invariants match a standard form");
            }
        }
    }
    Ok(format!("d = 2..8 exact; {ok} random chains standardized, {refused} refused with lattice invariants of no standard form"))
}

/// Blow down `order` on the fiber graph by hand; ends at one 0-curve.
fn replay_contractions(model: &FiberModel, order: &[usize]) -> Result<(), String> {
    let mut w: BTreeMap<usize, i64> = model.components.iter().map(|c| (c.id, i64::try_from(&c.weight).unwrap())).collect();
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = w.keys().map(|&k| (k, BTreeSet::new())).collect();
    for [a, b] in &model.edges {
        adj.get_mut(a).unwrap().insert(*b);
        adj.get_mut(b).unwrap().insert(*a);
    }
    for &v in order {
        ensure!(v != model.section_attach, "contracts the section component");
        ensure!(w[&v] == -1 && adj[&v].len() <= 2, "T{v} is not a linear (-1)-curve");
        let nb: Vec<usize> = adj.remove(&v).unwrap().into_iter().collect();
        w.remove(&v);
        for &x in &nb {
            *w.get_mut(&x).unwrap() += 1;
            adj.get_mut(&x).unwrap().remove(&v);
        }
        if let [a, b] = nb[..] {
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
    }
    ensure!(w.len() == 1 && w.values().all(|&x| x == 0), "ends at {w:?}");
    Ok(())
}

fn fiber_consistency() -> Outcome {
    let mut r = rng(3);
    let mut comps = 0;
    for _ in 0..500 {
        let (spec, model) = random_tower(&mut r, 5);
        let m: BTreeMap<usize, i64> = model.components.iter().map(|c| (c.id, c.multiplicity as i64)).collect();
        let mut f2 = 0i64;
        for c in &model.components {
            let w = i64::try_from(&c.weight).unwrap();
            let nb: i64 = model.edges.iter().filter(|e| e.contains(&c.id)).map(|e| m[&(e[0] + e[1] - c.id)]).sum();
            ensure!(m[&c.id] * w + nb == 0, "F.T{} != 0 in {spec:?}", c.id);
            f2 += m[&c.id] * m[&c.id] * w;
        }
        f2 += 2 * model.edges.iter().map(|e| m[&e[0]] * m[&e[1]]).sum::<i64>();
        ensure!(f2 == 0, "F^2 = {f2} in {spec:?}");
        let order = contraction_order(&model.tree(), model.section_attach).map_err(|e| format!("{spec:?}: {e}"))?;
        replay_contractions(&model, &order).map_err(|e| format!("{spec:?}: {e}"))?;
        comps += model.len();
    }
    Ok(format!("500 towers ({comps} components): F.T_i = 0, F^2 = 0, contraction order replayed"))
}

const ORDER: usize = 16;

fn descent_oracle() -> Outcome {
    let mut r = rng(4);
    let mut checked = 0;
    for _ in 0..200 {
        let (spec, model) = random_tower(&mut r, 4);
        for p in smooth_points(&model) {
            let lib = pui_of_point(&model, &p, Field::Radical).map_err(|e| format!("{spec:?} at {p:?}: {e}"))?;
            let want = oracle_space(&model, &p, ORDER);
            ensure!(lib.equivalent(&want).unwrap(), "{spec:?} at {p:?}: {lib:?} vs oracle {want:?}");
            // sample arcs through p stay inside every intermediate space
            let t = Series::var(ORDER);
            let u = t.mul(&Series::new(vec![s("1"), s("3")], ORDER));
            let v = t.mul(&Series::new(vec![s("-2"), s("0"), s("5")], ORDER));
            let trail = push_trail(&model, &p, &u, &v);
            let (mut psi, mut n, mut d) = (Poly::zero(), 1u32, 1u32);
            for (i, (at, (x, y))) in trail.iter().enumerate() {
                if i + 1 == trail.len() {
                    let w = PuiseuxSpace::base(psi.add(&Poly::constant(coord_value(&at.at))), n, d).unwrap();
                    ensure!(w.equivalent(&lib).unwrap(), "descent steps disagree with pui_of_point");
                    ensure!(w.contains_arc(x, y, Field::Radical).unwrap(), "base arc escapes at {p:?}");
                    break;
                }
                let local = PuiseuxSpace::at(psi.clone(), n, d, at.clone()).map_err(|e| e.to_string())?;
                ensure!(local.contains_arc(x, y, Field::Radical).unwrap(), "{spec:?}: arc escapes at level {i} ({at:?})");
                if at.on == 0 {
                    continue;
                }
                (psi, n, d) = match &at.at {
                    Coord::Finite(q) => descend_finite(&psi, n, d, q),
                    Coord::Inf => descend_infinite(&psi, n, d, Field::Radical).map_err(|e| e.to_string())?,
                };
            }
            // an arc through a neighboring point of the same component is excluded
            let off = push_to_base(&model, &p, &t, &Series::new(vec![s("7")], ORDER));
            ensure!(!lib.contains_arc(&off.0, &off.1, Field::Radical).unwrap(), "{spec:?}: {p:?} space too coarse");
            checked += 1;
        }
    }
    Ok(format!("{checked} smooth points: equal to the substitution oracle, sample arcs kept at every level"))
}

fn coord_value(c: &Coord) -> Scalar {
    match c {
        Coord::Finite(q) => q.clone(),
        Coord::Inf => panic!("base point at infinity"),
    }
}

fn multiplicity() -> Outcome {
    let mut r = rng(5);
    let mut smooth = 0;
    let mut arcs = 0;
    let mut towers = 0;
    while arcs < 100 || towers < 200 {
        towers += 1;
        let (spec, model) = random_tower(&mut r, 4);
        for p in smooth_points(&model) {
            let w = pui_of_point(&model, &p, Field::Radical).map_err(|e| e.to_string())?;
            let comp = model.locate(&p).unwrap().x;
            ensure!(w.multiplicity() as u64 == model.components[comp].multiplicity, "{spec:?} at {p:?}");
            smooth += 1;
        }
        for p in node_points(&model) {
            if arcs >= 100 {
                break;
            }
            let (a, b) = (r.gen_range(1..=3), r.gen_range(1..=3));
            let t = Series::var(ORDER);
            let u = t.pow(a).mul(&Series::new(vec![s("1"), Scalar::from_int(r.gen_range(-3..=3))], ORDER));
            let v = t.pow(b).mul(&Series::new(vec![s("2"), Scalar::from_int(r.gen_range(-3..=3))], ORDER));
            let (x, _) = push_to_base(&model, &p, &u, &v);
            let got = arc_multiplicity(&model, &p, &u, &v).map_err(|e| e.to_string())?;
            ensure!(got == x.valuation().unwrap() as u64, "{spec:?} node {p:?}: {got} vs ord x = {:?}", x.valuation());
            arcs += 1;
        }
    }
    Ok(format!("{smooth} smooth points over {towers} towers; {arcs} node arcs match the pushed-down order"))
}

fn rooted_chain_cross_check() -> Outcome {
    let mut r = rng(3);
    let mut agree = 0;
    let mut failures = Vec::new();
    for _ in 0..500 {
        let (spec, model) = random_tower(&mut r, 5);
        let verdict = fiber_stabilizer(&model, Field::Radical).and_then(|d| torus_part(&d));
        match verdict {
            Ok(t) => {
                let gm = t.slice == TorusSummary { rank: 1, torsion: 1 };
                if gm == model.is_rooted_chain() {
                    agree += 1;
                } else {
                    failures.push(format!("{:?}: slice {:?}, rooted chain {}", spec.blowups, t.slice, model.is_rooted_chain()));
                }
            }
            Err(e) => failures.push(format!("{:?}: {e}", spec.blowups)),
        }
    }
    ensure!(failures.is_empty(), "{} of 500 diverge, first: {}", failures.len(), failures[0]);
    Ok(format!("{agree} towers: slice is G_m exactly on rooted chains"))
}

fn torus_brute_force() -> Outcome {
    let mut r = rng(7);
    for _ in 0..50 {
        let k = r.gen_range(1..=2);
        let rows: Vec<[i64; 2]> = (0..k).map(|_| [r.gen_range(-6..=6), r.gen_range(-6..=6)]).collect();
        let t = torus_from_relations(&rows);
        ensure!(t.torsion == t.smith.iter().product::<i64>() as u64, "torsion vs smith {t:?}");
        for n in 1..=60i64 {
            let predicted = n.pow(t.rank as u32) as usize * t.smith.iter().map(|d| n.gcd(d) as usize).product::<usize>();
            let counted = torus_count(&rows, n);
            ensure!(predicted == counted, "{rows:?} over mu_{n}: SNF {predicted}, enumeration {counted}");
            let slice = (0..n).filter(|&j| rows.iter().all(|r| (r[1] * j).rem_euclid(n) == 0)).count();
            let want = if t.slice.rank == 1 { n as usize } else { n.gcd(&(t.slice.torsion as i64)) as usize };
            ensure!(slice == want, "{rows:?}: slice over mu_{n}");
        }
    }
    Ok("50 systems agree with enumeration over mu_1..mu_60".into())
}

fn multi_fiber() -> Outcome {
    let single = |beta: &str| BlowupSpec::new(s(beta), vec![Center::new(0, Coord::zero())]);
    let fib = Fibration { base: Default::default(), fibers: vec![single("0"), single("1")] };
    let rep = aut_report(&fib, Field::Rational).map_err(|e| e.to_string())?;
    ensure!(rep.d0 == vec![(s("0"), 1), (s("1"), 1)], "D0 = {:?}", rep.d0);
    ensure!(rep.u_mu_generator == poly(&[0, -1, 1]), "generator {}", rep.u_mu_generator);
    ensure!(rep.upsilon == TorusSummary { rank: 1, torsion: 1 }, "Upsilon {:?}", rep.upsilon);
    ensure!(rep.flags.parabolic, "parabolic flag");
    let mut other = spec_222();
    other.base_point = s("0");
    let chain = BlowupSpec::new(s("1"), vec![Center::new(0, Coord::zero()), Center::new(1, Coord::zero())]);
    let fib = Fibration { base: Default::default(), fibers: vec![other, chain] };
    let rep = aut_report(&fib, Field::Rational).map_err(|e| e.to_string())?;
    ensure!(rep.upsilon == TorusSummary { rank: 0, torsion: 2 }, "Upsilon {:?}", rep.upsilon);
    ensure!(!rep.flags.parabolic, "parabolic flag");
    Ok("D0 = [0] + [1], generator t(t-1), Upsilon = G_m; with 222-1, Upsilon = Z/2".into())
}

fn d(entries: &[(&str, i64, i64)]) -> QDivisor {
    QDivisor::new(entries.iter().map(|(p, a, b)| (Coord::Finite(s(p)), Q::new((*a).into(), (*b).into()))).collect()).unwrap()
}

fn dpd_table() -> Outcome {
    use DpdPresentation::*;
    let rows: Vec<(DpdPresentation, MlClass)> = vec![
        (Elliptic { d: d(&[("0", 1, 2), ("1", 1, 3)]) }, MlClass::ML0),
        (Elliptic { d: d(&[("0", 1, 2), ("1", 1, 3), ("2", 1, 5)]) }, MlClass::ML2),
        (Parabolic { d: d(&[("0", 1, 2)]) }, MlClass::ML0),
        (Parabolic { d: d(&[("0", 1, 2), ("1", -1, 3)]) }, MlClass::ML1),
        (Hyperbolic { plus: d(&[("0", -1, 2)]), minus: d(&[("1", -1, 3)]) }, MlClass::ML0),
        (Hyperbolic { plus: d(&[("0", -1, 2), ("1", -1, 2)]), minus: d(&[("2", -1, 3)]) }, MlClass::ML1),
        (Hyperbolic { plus: d(&[("0", -1, 2)]), minus: d(&[("1", -1, 3), ("2", -1, 3)]) }, MlClass::ML1),
        (Hyperbolic { plus: d(&[("0", -1, 2), ("1", -1, 2)]), minus: d(&[("0", -1, 3), ("1", -1, 3)]) }, MlClass::ML2),
        (danilov_gizatullin(5, 2).map_err(|e| e.to_string())?, MlClass::ML0),
    ];
    for (p, want) in &rows {
        p.validate().map_err(|e| e.to_string())?;
        let got = classify_ml(p).map_err(|e| e.to_string())?;
        ensure!(got == *want, "{p:?}: {got:?}, expected {want:?}");
    }
    ensure!(!is_toric(&danilov_gizatullin(5, 2).unwrap()).unwrap(), "DG toric");
    ensure!(is_toric(&rows[4].0).is_ok_and(|t| !t), "hyperbolic toric flag");
    let _ = special_gizatullin(3, 2, s("0"), s("1"), &[s("5")]).map_err(|e| e.to_string())?;
    let mut r = rng(9);
    let pts = ["0", "1", "2", "-1", "1/2"];
    let rand_div = |r: &mut rand_chacha::ChaCha8Rng, sign: i64| {
        let k = r.gen_range(0..=3);
        let mut e: Vec<(&str, i64, i64)> = Vec::new();
        for p in pts.iter().take(k) {
            e.push((p, sign * r.gen_range(1..=7), r.gen_range(1..=4)));
        }
        d(&e)
    };
    for i in 0..200 {
        let p = match i % 3 {
            0 => Elliptic { d: rand_div(&mut r, 1).add(&d(&[("3", 1, 1)])) },
            1 => {
                let sign = if r.gen_bool(0.5) { 1 } else { -1 };
                Parabolic { d: rand_div(&mut r, sign) }
            }
            _ => Hyperbolic { plus: rand_div(&mut r, -1), minus: rand_div(&mut r, -1) },
        };
        if p.validate().is_err() {
            continue;
        }
        let base = classify_ml(&p).map_err(|e| e.to_string())?;
        let g = d(&[(pts[r.gen_range(0..pts.len())], r.gen_range(-3..=3), 1), ("7", r.gen_range(-3..=3), 1)]);
        // principal divisors on P^1 have degree 0
        let k = r.gen_range(-3..=3);
        let g0 = d(&[(pts[r.gen_range(0..pts.len())], k, 1), ("7", -k, 1)]);
        let moved = match &p {
            Elliptic { d } => Elliptic { d: d.add(&g0) },
            Parabolic { d } => Parabolic { d: d.add(&g) },
            Hyperbolic { plus, minus } => Hyperbolic { plus: plus.add(&g), minus: minus.add(&g.neg()) },
        };
        ensure!(classify_ml(&moved).map_err(|e| e.to_string())? == base, "gauge move changes {p:?}");
        if let Hyperbolic { plus, minus } = &p {
            let swapped = Hyperbolic { plus: minus.clone(), minus: plus.clone() };
            ensure!(classify_ml(&swapped).unwrap() == base, "swap changes {p:?}");
            ensure!(is_toric(&swapped).unwrap() == is_toric(&p).unwrap(), "swap changes toricity of {p:?}");
            if let Hyperbolic { .. } = moved {
                ensure!(is_toric(&moved).unwrap() == is_toric(&p).unwrap(), "gauge changes toricity of {p:?}");
            }
        }
    }
    Ok("9 case-table rows; gauge and swap invariance on 200 random presentations".into())
}

fn all_words(letters: &[(usize, usize)], max_len: usize) -> Vec<Word<usize>> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &(v, e) in letters {
                next.push(w.concat(&Word::letter(v, e)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn amalgam() -> Outcome {
    let t = z4_z6();
    let letters: Vec<(usize, usize)> = (1..4).map(|e| (0, e)).chain((1..6).map(|e| (1, e))).collect();
    let words = all_words(&letters, 5);
    let mut by_matrix: BTreeMap<[[i64; 2]; 2], Word<usize>> = BTreeMap::new();
    for w in &words {
        let nf = t.normal_form(w).map_err(|e| e.to_string())?;
        ensure!(sl2(&nf) == sl2(w), "normal form of {w:?} changes the element");
        ensure!(t.normal_form(&nf).unwrap() == nf, "not idempotent on {w:?}");
        match by_matrix.get(&sl2(w)) {
            Some(prev) => ensure!(*prev == nf, "{w:?}: equal elements with normal forms {prev:?} and {nf:?}"),
            None => {
                by_matrix.insert(sl2(w), nf);
            }
        }
    }
    let mut r = rng(10);
    for _ in 0..2000 {
        let u = &words[r.gen_range(0..words.len())];
        let v = &words[r.gen_range(0..words.len())];
        let lhs = t.normal_form(&u.concat(v)).unwrap();
        let rhs = t.mul(&t.normal_form(u).unwrap(), &t.normal_form(v).unwrap()).unwrap();
        ensure!(lhs == rhs, "nf(uv) != nf(nf(u) nf(v)) for {u:?}, {v:?}");
    }
    let short: Vec<&Word<usize>> = words.iter().filter(|w| w.len() <= 3).collect();
    for case in 0..50 {
        let g = short[r.gen_range(0..short.len())].clone();
        let p = case % 2;
        let order = if p == 0 { 4 } else { 6 };
        // a generator outside the edge group pins the vertex
        let e = if p == 0 { [1, 3][r.gen_range(0..2)] } else { [1, 2, 4, 5][r.gen_range(0..4)] };
        let mut gens = vec![Word::letter(p, e)];
        if r.gen_bool(0.5) {
            gens.push(Word::letter(p, r.gen_range(0..order)));
        }
        let gi = t.inv(&g);
        let conj: Vec<Word<usize>> = gens.iter().map(|h| t.mul(&t.mul(&g, h).unwrap(), &gi).unwrap()).collect();
        let bound = conj.iter().map(|c| t.reduced_length(c).unwrap()).max().unwrap();
        let (x, q) = t.bounded_fixed_vertex(&conj, bound, bound + 2).map_err(|e| format!("case {case}: {e}"))?;
        let xi = t.inv(&x);
        for c in &conj {
            let back = t.mul(&t.mul(&xi, c).unwrap(), &x).unwrap();
            let m = sl2(&back);
            let (gen, order) = if q == 0 { (S, 4) } else { (U, 6) };
            let k = (0..order).find(|&k| mat_pow(&gen, k) == m);
            ensure!(k.is_some(), "case {case}: conjugate not in G_{q}");
            let letter = t.normal_form(&Word::letter(q, k.unwrap())).unwrap();
            ensure!(back == letter, "case {case}: conjugate {back:?} is not the normal form {letter:?}");
        }
        ensure!(q == p, "case {case}: vertex type {q}, planted {p}");
        let same = t.vertex_key(&x, q).unwrap() == t.vertex_key(&g, p).unwrap();
        ensure!(same, "case {case}: recovered vertex differs from the planted one");
    }
    Ok(format!("{} words: normal forms faithful in SL2(Z) and multiplicative; 50 planted conjugators recovered", words.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("golden example 222-1", golden_222),
        ("zigzag standard forms", zigzag_forms),
        ("fiber consistency", fiber_consistency),
        ("descent vs oracle", descent_oracle),
        ("multiplicity", multiplicity),
        ("rooted-chain cross-check", rooted_chain_cross_check),
        ("torus SNF vs brute force", torus_brute_force),
        ("multi-fiber report", multi_fiber),
        ("DPD classification", dpd_table),
        ("amalgam", amalgam),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let out = match out {
            Ok(_) if took > LIMITS[i] => Err(format!("took {took:.2?}, limit {:?}", LIMITS[i])),
            o => o,
        };
        match out {
            Ok(detail) => println!("criterion {}: PASS {name} ({took:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({took:.2?}): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
