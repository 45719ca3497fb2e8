//! Structure report for the automorphism group of an A¹-fibration over the affine line.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{fiber_stabilizer, torus_part, TorusPart};
use crate::error::{Error, Result};
use crate::fiber_tower::{build_tower, BlowupSpec};
use crate::formal_series::{Field, Poly, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseCurve {
    #[serde(rename = "A1", alias = "A^1", alias = "affine_line")]
    A1,
    #[serde(untagged)]
    Other(String),
}

impl Default for BaseCurve {
    fn default() -> Self {
        BaseCurve::A1
    }
}

/// Special fibers over distinct points of the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fibration {
    #[serde(default)]
    pub base: BaseCurve,
    pub fibers: Vec<BlowupSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusSummary {
    pub rank: usize,
    pub torsion: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub base_point: Scalar,
    #[serde(rename = "N")]
    pub n_trunc: usize,
    pub h: Poly,
    pub torus: TorusPart,
    pub rooted_chain: bool,
    pub constraints: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Flags {
    pub parabolic: bool,
    pub toric: bool,
    pub rooted_chain: Vec<bool>,
    /// Per fiber: the `a = 1` slice is all of `G_m` exactly when the fiber is a rooted chain.
    pub slice_matches_rooted_chain: Vec<bool>,
}

/// Upper bound for the finite layer: a subgroup of the symmetric group on
/// the special fibers and their components.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteExtension {
    pub symmetric_degree: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutReport {
    pub version: String,
    pub fibers: Vec<FiberReport>,
    /// Exponent `d = N` of the unipotent part when there is one special fiber.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(rename = "D0")]
    pub d0: Vec<(Scalar, usize)>,
    #[serde(rename = "U_mu_generator")]
    pub u_mu_generator: Poly,
    /// Global conjugator interpolating the per-fiber ones.
    pub h: Poly,
    /// `Lambda_mu` for a single fiber, `Upsilon_mu` otherwise.
    #[serde(rename = "Upsilon")]
    pub upsilon: TorusSummary,
    pub flags: Flags,
    pub finite_extension: FiniteExtension,
}

/// `h` with `h(t) = h_j(t - beta_j) mod (t - beta_j)^{N_j}` for every `j`, and the modulus.
pub fn interpolate(conds: &[(Scalar, usize, Poly)]) -> Result<(Poly, Poly)> {
    let mut h = Poly::zero();
    let mut m = Poly::constant(Scalar::one());
    for (beta, n, hj) in conds {
        if *n == 0 {
            continue;
        }
        let to_local = Poly::new(vec![beta.clone(), Scalar::one()]);
        let to_global = Poly::new(vec![beta.neg(), Scalar::one()]);
        let h_loc = h.compose(&to_local).truncate(*n);
        let m_loc = m.compose(&to_local).to_series(*n);
        let diff = hj.truncate(*n).sub(&h_loc).to_series(*n);
        let k_loc = diff.mul(&m_loc.inv()?).truncate(*n).to_poly();
        h = h.add(&m.mul(&k_loc.compose(&to_global)));
        m = m.mul(&to_global.pow(*n));
    }
    Ok((h, m))
}

pub fn aut_report(fib: &Fibration, field: Field) -> Result<AutReport> {
    if fib.base != BaseCurve::A1 {
        return Err(Error::BaseUnsupported);
    }
    if fib.fibers.is_empty() {
        return Err(Error::BadInput("at least one special fiber is required".into()));
    }
    for (i, f) in fib.fibers.iter().enumerate() {
        if fib.fibers[..i].iter().any(|g| g.base_point == f.base_point) {
            return Err(Error::BadInput(format!("two fibers over {}", f.base_point)));
        }
    }
    let mut fibers = Vec::new();
    let mut components = 0;
    for spec in &fib.fibers {
        let model = build_tower(spec)?;
        components += model.len();
        let desc = fiber_stabilizer(&model, field)?;
        let torus = torus_part(&desc)?;
        fibers.push(FiberReport {
            base_point: spec.base_point.clone(),
            n_trunc: desc.n_trunc,
            h: desc.h.clone(),
            torus,
            rooted_chain: model.is_rooted_chain(),
            constraints: desc.constraints.clone(),
        });
    }
    let conds: Vec<(Scalar, usize, Poly)> =
        fibers.iter().map(|f| (f.base_point.clone(), f.n_trunc, f.h.clone())).collect();
    let (h, generator) = interpolate(&conds)?;
    let d0 = fibers.iter().filter(|f| f.n_trunc > 0).map(|f| (f.base_point.clone(), f.n_trunc)).collect();

    let slice_gcd = fibers.iter().fold(0u64, |g, f| {
        let s = &f.torus.slice;
        g.gcd(&if s.rank == 1 { 0 } else { s.torsion })
    });
    let parabolic = slice_gcd == 0;
    let single = fibers.len() == 1;
    let upsilon = if single {
        TorusSummary { rank: fibers[0].torus.rank, torsion: fibers[0].torus.torsion }
    } else if parabolic {
        TorusSummary { rank: 1, torsion: 1 }
    } else {
        TorusSummary { rank: 0, torsion: slice_gcd }
    };
    let flags = Flags {
        parabolic,
        toric: single && fibers[0].torus.rank == 2,
        rooted_chain: fibers.iter().map(|f| f.rooted_chain).collect(),
        slice_matches_rooted_chain: fibers.iter().map(|f| (f.torus.slice.rank == 1) == f.rooted_chain).collect(),
    };
    Ok(AutReport {
        version: crate::REPORT_VERSION.to_string(),
        d: single.then(|| fibers[0].n_trunc),
        fibers,
        d0,
        u_mu_generator: generator,
        h,
        upsilon,
        flags,
        finite_extension: FiniteExtension { symmetric_degree: components, exact: false },
    })
}
