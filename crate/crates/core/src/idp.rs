//! Minkowski sums and two independent checkers for the integer
//! decomposition property of a pair `(P, Q)`.
//!
//! The definitional checker searches `x = p + q` directly. The region
//! checker tests, for every lattice point `a` of `P + Q`, whether
//! `R_a = P ∩ (a - Q)` contains a lattice point.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::cubeface::CubeStructure;
use crate::error::{Error, Result};
use crate::exactlat::{to_i64, LatticeVector, RationalPoint};
use crate::halfspace::{Halfspace, HalfspaceSystem};
use crate::polytope::{minkowski_equivalent, Polytope};
use crate::smooth::is_smooth;

/// Counterexamples kept per report.
pub const WITNESS_CAP: usize = 10;
/// Positive decompositions kept per report.
const DECOMPOSITION_CAP: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `point` lies in `P + Q` but has no decomposition; `region_point` is a
    /// rational point of its region, proving the region nonempty.
    Counterexample {
        point: LatticeVector,
        region_point: Option<RationalPoint>,
    },
    Decomposition {
        x: LatticeVector,
        p: LatticeVector,
        q: LatticeVector,
    },
}

impl Witness {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Witness::Counterexample { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdpReport {
    pub pair: (String, String),
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
    /// Lattice points of `P + Q` examined.
    pub regions_checked: usize,
    /// Dilation factors examined, for single-polytope checks.
    pub checked_k: Vec<u64>,
}

impl IdpReport {
    fn new(verdict: bool, witnesses: Vec<Witness>, regions_checked: usize) -> Self {
        IdpReport {
            pair: ("P".into(), "Q".into()),
            verdict,
            witnesses,
            regions_checked,
            checked_k: Vec::new(),
        }
    }

    pub fn with_pair(mut self, p: impl Into<String>, q: impl Into<String>) -> Self {
        self.pair = (p.into(), q.into());
        self
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &LatticeVector> {
        self.witnesses.iter().filter_map(|w| match w {
            Witness::Counterexample { point, .. } => Some(point),
            _ => None,
        })
    }
}

pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q.ambient_dim(),
        });
    }
    let mut pts = Vec::with_capacity(p.num_vertices() * q.num_vertices());
    for a in p.vertices() {
        for b in q.vertices() {
            pts.push(a + b);
        }
    }
    Polytope::from_vertices_embedded(&pts)
}

/// Integer H-data of a lattice polytope for fast membership tests.
struct IntH {
    rows: Vec<(Vec<i64>, i64)>,
    eqs: Vec<(Vec<i64>, i64)>,
    /// An equation with fractional offset: no lattice points at all.
    empty: bool,
}

impl IntH {
    fn of(p: &Polytope) -> Result<Self> {
        let conv =
            |h: &Halfspace| -> Result<Vec<i64>> { h.normal.coords().iter().map(to_i64).collect() };
        let mut rows = Vec::new();
        for h in p.facets() {
            rows.push((conv(h)?, to_i64(&h.offset.floor().to_integer())?));
        }
        let mut eqs = Vec::new();
        let mut empty = false;
        for h in p.equations() {
            if !h.offset.is_integer() {
                empty = true;
            }
            eqs.push((conv(h)?, to_i64(&h.offset.to_integer())?));
        }
        Ok(IntH { rows, eqs, empty })
    }

    fn contains(&self, x: &[i64]) -> bool {
        let dot =
            |a: &[i64]| -> i128 { a.iter().zip(x).map(|(u, v)| *u as i128 * *v as i128).sum() };
        !self.empty
            && self.rows.iter().all(|(a, b)| dot(a) <= *b as i128)
            && self.eqs.iter().all(|(a, b)| dot(a) == *b as i128)
    }
}

fn to_i64s(v: &LatticeVector) -> Result<Vec<i64>> {
    v.coords().iter().map(to_i64).collect()
}

fn require_lattice(p: &Polytope, q: &Polytope) -> Result<()> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q.ambient_dim(),
        });
    }
    if !p.is_lattice() || !q.is_lattice() {
        return Err(Error::NotLatticePolytope);
    }
    Ok(())
}

/// `R_a = P ∩ (a - Q)` as an H-system.
pub fn region(p: &Polytope, q: &Polytope, a: &LatticeVector) -> HalfspaceSystem {
    let mut sys = p.halfspaces();
    let flip = |h: &Halfspace| {
        // a - x in Q  <=>  <-n, x> <= c - <n, a>
        let shift = BigRational::from_integer(h.normal.dot(a));
        Halfspace::new(-&h.normal, &h.offset - shift)
    };
    sys.inequalities.extend(q.facets().iter().map(flip));
    sys.equations.extend(q.equations().iter().map(flip));
    sys
}

/// Box containing `R_a`: the intersection of the boxes of `P` and `a - Q`.
fn region_box(
    p_box: &(Vec<BigInt>, Vec<BigInt>),
    q_box: &(Vec<BigInt>, Vec<BigInt>),
    a: &LatticeVector,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = a.dim();
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        let ai = &a.coords()[i];
        lo.push((&p_box.0[i]).max(&(ai - &q_box.1[i])).clone());
        hi.push((&p_box.1[i]).min(&(ai - &q_box.0[i])).clone());
    }
    (lo, hi)
}

/// Lattice points of `R_a`, sorted.
pub fn region_lattice_points(
    p: &Polytope,
    q: &Polytope,
    a: &LatticeVector,
) -> Result<Vec<LatticeVector>> {
    let (lo, hi) = region_box(&p.bounding_box(), &q.bounding_box(), a);
    region(p, q, a).lattice_points_in_box(&lo, &hi)
}

/// Definitional check: each lattice point `x` of `P + Q` is tested against
/// every lattice point `p` of `P` for `x - p ∈ Q`.
pub fn is_idp_pair_bruteforce(p: &Polytope, q: &Polytope) -> Result<IdpReport> {
    require_lattice(p, q)?;
    let sum = minkowski_sum(p, q)?;
    let qh = IntH::of(q)?;
    let p_pts: Vec<Vec<i64>> = p
        .lattice_points()
        .iter()
        .map(to_i64s)
        .collect::<Result<_>>()?;
    let xs = sum.lattice_points();
    let outcomes: Vec<Option<Vec<i64>>> = xs
        .par_iter()
        .map(|x| -> Result<Option<Vec<i64>>> {
            let xv = to_i64s(x)?;
            let mut diff = vec![0i64; xv.len()];
            for pp in &p_pts {
                for i in 0..xv.len() {
                    diff[i] = xv[i] - pp[i];
                }
                if qh.contains(&diff) {
                    return Ok(Some(pp.clone()));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    let mut counter = Vec::new();
    let mut decomp = Vec::new();
    for (x, found) in xs.iter().zip(&outcomes) {
        match found {
            None if counter.len() < WITNESS_CAP => counter.push(Witness::Counterexample {
                point: x.clone(),
                region_point: region(p, q, x).rational_point(),
            }),
            Some(pp) if decomp.len() < DECOMPOSITION_CAP => {
                let pv = LatticeVector::from_i64s(pp);
                decomp.push(Witness::Decomposition {
                    q: x - &pv,
                    x: x.clone(),
                    p: pv,
                })
            }
            _ => {}
        }
    }
    let verdict = outcomes.iter().all(Option::is_some);
    let witnesses = if verdict { decomp } else { counter };
    Ok(IdpReport::new(verdict, witnesses, xs.len()))
}

/// Region check: `(P, Q)` is IDP iff every `R_a`, `a` a lattice point of
/// `P + Q`, contains a lattice point. Regions are searched in parallel and
/// merged in lexicographic order of `a`.
pub fn is_idp_pair_ra(p: &Polytope, q: &Polytope) -> Result<IdpReport> {
    require_lattice(p, q)?;
    let sum = minkowski_sum(p, q)?;
    let p_box = p.bounding_box();
    let q_box = q.bounding_box();
    let base = region(p, q, &LatticeVector::zero(p.ambient_dim()));
    let q_count = q.facets().len();
    let q_eq = q.equations().len();
    let xs = sum.lattice_points();
    let outcomes: Vec<Option<LatticeVector>> = xs
        .par_iter()
        .map(|a| {
            let mut sys = base.clone();
            let n_p = p.facets().len();
            for (i, h) in q.facets().iter().enumerate() {
                sys.inequalities[n_p + i].offset =
                    &h.offset - BigRational::from_integer(h.normal.dot(a));
            }
            let n_pe = p.equations().len();
            for (i, h) in q.equations().iter().enumerate() {
                sys.equations[n_pe + i].offset =
                    &h.offset - BigRational::from_integer(h.normal.dot(a));
            }
            debug_assert_eq!(sys.inequalities.len(), n_p + q_count);
            debug_assert_eq!(sys.equations.len(), n_pe + q_eq);
            let (lo, hi) = region_box(&p_box, &q_box, a);
            sys.first_lattice_point_in_box(&lo, &hi)
        })
        .collect::<Result<_>>()?;
    let mut witnesses = Vec::new();
    for (a, found) in xs.iter().zip(&outcomes) {
        if found.is_none() && witnesses.len() < WITNESS_CAP {
            witnesses.push(Witness::Counterexample {
                point: a.clone(),
                region_point: region(p, q, a).rational_point(),
            });
        }
    }
    let verdict = outcomes.iter().all(Option::is_some);
    if verdict {
        for (a, found) in xs.iter().zip(&outcomes).take(DECOMPOSITION_CAP) {
            let pv = found.clone().expect("verdict holds");
            witnesses.push(Witness::Decomposition {
                q: a - &pv,
                x: a.clone(),
                p: pv,
            });
        }
    }
    Ok(IdpReport::new(verdict, witnesses, xs.len()))
}

/// Largest dilation factor that needs checking: `(P, kP)` is IDP for all
/// `k >= d - 1`, so `k = 1 ..= max(1, d - 2)` suffices, plus `extra_k`.
pub fn k_range(d: usize, extra_k: u64) -> std::ops::RangeInclusive<u64> {
    1..=(d.saturating_sub(2).max(1) as u64 + extra_k)
}

/// IDP of a single polytope via the pairs `(P, kP)`, `k` in [`k_range`].
pub fn is_idp(p: &Polytope, extra_k: u64) -> Result<IdpReport> {
    let mut out = IdpReport::new(true, Vec::new(), 0).with_pair("P", "kP");
    for k in k_range(p.dim(), extra_k) {
        let r = is_idp_pair_ra(p, &p.dilate(k))?;
        out.checked_k.push(k);
        out.regions_checked += r.regions_checked;
        if !r.verdict {
            if out.verdict {
                out.witnesses.clear();
            }
            out.verdict = false;
            out.pair.1 = format!("{k}P");
            let room = WITNESS_CAP - out.witnesses.len();
            out.witnesses.extend(r.witnesses.into_iter().take(room));
        } else if out.verdict && out.witnesses.is_empty() {
            out.witnesses = r.witnesses;
        }
    }
    Ok(out)
}

/// The pair check for Minkowski-equivalent smooth cubes.
pub fn idp_cube_pair(c: &CubeStructure, c2: &CubeStructure) -> Result<IdpReport> {
    let (p, q) = (c.polytope(), c2.polytope());
    if p.ambient_dim() != q.ambient_dim()
        || !p.is_lattice()
        || !q.is_lattice()
        || !is_smooth(p)?.smooth
        || !is_smooth(q)?.smooth
        || !minkowski_equivalent(p, q)
    {
        return Err(Error::NotEquivalentSmoothCubes);
    }
    is_idp_pair_ra(p, q)
}
