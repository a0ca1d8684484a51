//! Prismatoids: polytopes combinatorially equivalent to a prism `Q × [0,1]`
//! whose top and bottom facets are parallel. Slices are the sections at
//! integer heights between bottom and top.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlat::{
    complete_to_unimodular, primitive_direction, IntMatrix, LatticeVector, RationalPoint,
    UnimodularMap,
};
use crate::faces::VertexSet;
use crate::idp::{is_idp_pair_ra, IdpReport, Witness, WITNESS_CAP};
use crate::polytope::{minkowski_equivalent, Polytope};
use crate::report::{TheoremId, TheoremReport};
use crate::smooth::is_smooth;

/// A detected prism structure: bottom and top facet indices and the
/// vertical edges pairing bottom vertices with top vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prismatoid {
    pub bottom: usize,
    pub top: usize,
    /// `(bottom vertex, top vertex)`, sorted by bottom vertex.
    pub matching: Vec<(usize, usize)>,
    /// Outward normal of the top facet.
    pub up_normal: LatticeVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotAPrismatoid(pub String);

impl fmt::Display for NotAPrismatoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a prismatoid: {}", self.0)
    }
}

/// Checks that `bottom`/`top` are parallel facets inducing a prism face
/// lattice, returning the vertical matching.
fn prism_matching(
    p: &Polytope,
    bottom: usize,
    top: usize,
) -> std::result::Result<Vec<(usize, usize)>, String> {
    if p.facets()[bottom].normal != -&p.facets()[top].normal {
        return Err("facets are not parallel".into());
    }
    let b = p.incidence(bottom);
    let t = p.incidence(top);
    let n = p.num_vertices();
    if !b.is_disjoint(t) || b.len() + t.len() != n || b.len() != t.len() {
        return Err("bottom and top do not partition the vertices evenly".into());
    }
    let mut matching = Vec::with_capacity(b.len());
    let mut used = VertexSet::empty(n);
    for v in b.iter() {
        let up: Vec<usize> = p
            .neighbors(v)
            .into_iter()
            .filter(|&w| t.contains(w))
            .collect();
        let [w] = up.as_slice() else {
            return Err(format!(
                "bottom vertex {} has {} vertical edges",
                p.vertices()[v],
                up.len()
            ));
        };
        if used.contains(*w) {
            return Err("vertical edges are not a matching".into());
        }
        used.insert(*w);
        matching.push((v, *w));
    }
    let sigma = |s: &VertexSet| -> VertexSet {
        VertexSet::from_indices(
            n,
            s.iter()
                .map(|v| matching.iter().find(|m| m.0 == v).expect("bottom vertex").1),
        )
    };
    let lat = p.face_lattice();
    let bottom_faces: Vec<usize> = (0..lat.len())
        .filter(|&id| lat.face(id).dim >= 0 && lat.face(id).vertices.is_subset(b))
        .collect();
    let nonempty = lat.len() - 1;
    if nonempty != 3 * bottom_faces.len() {
        return Err(format!(
            "{nonempty} faces, a prism over the bottom has {}",
            3 * bottom_faces.len()
        ));
    }
    for &id in &bottom_faces {
        let f = lat.face(id);
        let image = sigma(&f.vertices);
        match lat.find(&image) {
            Some(g) if lat.face(g).dim == f.dim => {}
            _ => {
                return Err(format!(
                    "bottom face {:?} has no top counterpart",
                    f.vertices.to_vec()
                ))
            }
        }
        match lat.find(&f.vertices.union(&image)) {
            Some(g) if lat.face(g).dim == f.dim + 1 => {}
            _ => {
                return Err(format!(
                    "bottom face {:?} has no side face",
                    f.vertices.to_vec()
                ))
            }
        }
    }
    Ok(matching)
}

/// Tries the parallel facet pairs in order of their normal read from the
/// last coordinate backwards, so a facet `x_d = const` is preferred as the
/// bottom. The bottom of each pair is the facet whose normal comes first.
pub fn detect_prismatoid(p: &Polytope) -> std::result::Result<Prismatoid, NotAPrismatoid> {
    if !p.is_full_dimensional() || p.dim() < 2 {
        return Err(NotAPrismatoid(
            "needs a full-dimensional polytope of dimension at least 2".into(),
        ));
    }
    let rev = |f: usize| -> Vec<BigInt> {
        p.facets()[f]
            .normal
            .coords()
            .iter()
            .rev()
            .cloned()
            .collect()
    };
    let mut candidates: Vec<(Vec<BigInt>, usize, usize)> = p
        .opposite_facet_pairs()
        .into_iter()
        .map(|(f, g)| {
            if rev(f) <= rev(g) {
                (rev(f), f, g)
            } else {
                (rev(g), g, f)
            }
        })
        .collect();
    candidates.sort();
    if candidates.is_empty() {
        return Err(NotAPrismatoid("no parallel facet pair".into()));
    }
    let mut last = String::new();
    for (_, bottom, top) in candidates {
        match prism_matching(p, bottom, top) {
            Ok(matching) => {
                return Ok(Prismatoid {
                    bottom,
                    top,
                    matching,
                    up_normal: p.facets()[top].normal.clone(),
                })
            }
            Err(e) => last = e,
        }
    }
    Err(NotAPrismatoid(last))
}

/// Map putting the prism axis along `e_d`. Smooth lattice prismatoids get
/// their first bottom vertex at the origin with edge directions
/// `e_1..e_d`, the vertical edge going to `e_d`.
fn normalizing_map(p: &Polytope, s: &Prismatoid) -> Result<UnimodularMap> {
    if p.is_lattice() && is_smooth(p)?.smooth {
        let (v, w) = s.matching[0];
        let base = &p.vertices()[v];
        let mut flat: Vec<LatticeVector> = p
            .neighbors(v)
            .into_iter()
            .filter(|&u| u != w)
            .map(|u| primitive_direction(&(&p.vertices()[u] - base)).expect("distinct vertices"))
            .collect();
        flat.sort_by(|a, b| b.cmp(a));
        flat.push(primitive_direction(&(&p.vertices()[w] - base)).expect("distinct vertices"));
        let u = IntMatrix::from_columns(&flat)
            .inverse_unimodular()
            .expect("smooth star is a lattice basis");
        let t = -&u.apply(&base.to_lattice().expect("lattice vertex"));
        UnimodularMap::new(u, t)
    } else {
        UnimodularMap::linear(complete_to_unimodular(&s.up_normal)?)
    }
}

/// A unimodular image of a prismatoid with bottom and top in hyperplanes
/// `x_d = const`, bottom below.
pub fn normalize_axis(p: &Polytope) -> Result<(Polytope, UnimodularMap)> {
    let s = detect_prismatoid(p).map_err(|_| Error::NotPrismatoid)?;
    let map = normalizing_map(p, &s)?;
    let image = p.map(&map)?;
    Ok((image, map))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    /// Offset `l` above the bottom.
    pub level: u64,
    /// `P ∩ {x_d = b + l}` with `x_d` dropped.
    pub polytope: Polytope,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceDecomposition {
    pub axis_normal: LatticeVector,
    pub bottom_height: BigInt,
    pub top_height: BigInt,
    pub slices: Vec<Slice>,
    /// The prism structure the slices were taken along.
    pub prism: Prismatoid,
}

impl SliceDecomposition {
    pub fn height(&self) -> u64 {
        u64::try_from(&self.top_height - &self.bottom_height).expect("small height")
    }

    pub fn bottom(&self) -> &Polytope {
        &self.slices[0].polytope
    }

    pub fn top(&self) -> &Polytope {
        &self.slices.last().expect("at least two slices").polytope
    }
}

fn last_coord(p: &RationalPoint) -> &BigRational {
    p.coords().last().expect("dimension at least 1")
}

/// Slices of a prismatoid whose bottom and top are the facets `x_d = b`
/// and `x_d = b + h`. Each slice is the hull of the points where edges of
/// `P` meet the level.
pub fn slices(p: &Polytope) -> Result<SliceDecomposition> {
    if !p.is_full_dimensional() || p.dim() < 2 {
        return Err(Error::NotPrismatoid);
    }
    let d = p.ambient_dim();
    let up = LatticeVector::unit(d, d - 1);
    let down = -&up;
    let find = |n: &LatticeVector| p.facets().iter().position(|f| f.normal == *n);
    let (Some(bottom), Some(top)) = (find(&down), find(&up)) else {
        return Err(Error::Precondition(
            "bottom and top are not level; normalize the axis first".into(),
        ));
    };
    let matching = prism_matching(p, bottom, top).map_err(|_| Error::NotPrismatoid)?;
    let b = -&p.facets()[bottom].offset;
    let t = p.facets()[top].offset.clone();
    if !b.is_integer() || !t.is_integer() {
        return Err(Error::NonIntegralHeights {
            bottom: b.to_string(),
            top: t.to_string(),
        });
    }
    let (b, t) = (b.to_integer(), t.to_integer());
    let h = u64::try_from(&t - &b).map_err(|_| Error::EnumerationOverflow)?;
    let edges = p.face_lattice().edges();
    let mut out = Vec::with_capacity(h as usize + 1);
    for l in 0..=h {
        let level = BigRational::from_integer(&b + BigInt::from(l));
        let mut pts: Vec<RationalPoint> = Vec::new();
        for &(i, j) in &edges {
            let (vi, vj) = (&p.vertices()[i], &p.vertices()[j]);
            let (hi, hj) = (last_coord(vi), last_coord(vj));
            if *hi == level {
                pts.push(vi.drop_last());
            }
            if *hj == level {
                pts.push(vj.drop_last());
            }
            if (hi < &level && &level < hj) || (hj < &level && &level < hi) {
                let s = (&level - hi) / (hj - hi);
                let diff = vj - vi;
                pts.push((vi + &diff.scale(&s)).drop_last());
            }
        }
        pts.sort();
        pts.dedup();
        out.push(Slice {
            level: l,
            polytope: Polytope::from_vertices(&pts)?,
        });
    }
    Ok(SliceDecomposition {
        axis_normal: up,
        bottom_height: b,
        top_height: t,
        slices: out,
        prism: Prismatoid {
            bottom,
            top,
            matching,
            up_normal: p.facets()[top].normal.clone(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceLemmaChecks {
    /// Top and bottom share a normal fan.
    pub top_bottom: TheoremReport,
    /// Per slice: integral, of dimension `d - 1`, equivalent to the bottom.
    /// Per vertical edge: meets each level in `b_i + l·(u, 1)`, `u` integral.
    pub slices: TheoremReport,
}

/// Normalizes `p` and checks the slice statements on it, one instance per
/// slice and per vertical edge.
pub fn verify_slice_lemmas(p: &Polytope) -> Result<SliceLemmaChecks> {
    let (q, _) = normalize_axis(p)?;
    let dec = slices(&q)?;
    let d = q.dim();
    let mut tb = TheoremReport::new(TheoremId::TopBottomEquivalent);
    tb.record(
        "top/bottom",
        if minkowski_equivalent(dec.bottom(), dec.top()) {
            Ok(())
        } else {
            Err("normal fans of top and bottom differ".into())
        },
    );
    let mut sr = TheoremReport::new(TheoremId::IntegralSlices);
    for s in &dec.slices {
        let outcome = if let Some(v) = s.polytope.vertices().iter().find(|v| !v.is_integral()) {
            Err(format!("vertex {v} is not integral"))
        } else if s.polytope.dim() + 1 != d {
            Err(format!("slice has dimension {}", s.polytope.dim()))
        } else if !minkowski_equivalent(&s.polytope, dec.bottom()) {
            Err("not Minkowski equivalent to the bottom".into())
        } else {
            Ok(())
        };
        sr.record(format!("slice l={}", s.level), outcome);
    }
    let h = BigRational::from_integer(BigInt::from(dec.height()));
    for &(bi, ti) in &dec.prism.matching {
        let (bv, tv) = (&q.vertices()[bi], &q.vertices()[ti]);
        let step = (tv - bv).scale(&(BigRational::one() / &h));
        let outcome = if !step.is_integral() {
            Err(format!("edge {bv} to {tv}: step {step} is not integral"))
        } else {
            let mut missing = None;
            for s in &dec.slices {
                let pt = (bv + &step.scale(&BigRational::from_integer(BigInt::from(s.level))))
                    .drop_last();
                if s.polytope.vertex_index(&pt).is_none() {
                    missing = Some(format!("{pt} is not a vertex of slice l={}", s.level));
                    break;
                }
            }
            missing.map_or(Ok(()), Err)
        };
        sr.record(format!("edge from {bv}"), outcome);
    }
    Ok(SliceLemmaChecks {
        top_bottom: tb,
        slices: sr,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceIdpReport {
    /// Conjunction over all slice pairs.
    pub verdict: bool,
    pub slice_pairs: usize,
    /// `(l, m)` with `(S_l, S'_m)` not IDP.
    pub failing_pairs: Vec<(u64, u64)>,
    pub witnesses: Vec<Witness>,
    /// The region checker run on the full pair.
    pub direct: IdpReport,
}

impl SliceIdpReport {
    pub fn agrees(&self) -> bool {
        self.verdict == self.direct.verdict
    }
}

/// IDP of `(P, P')` from IDP of every slice pair, with a direct check of
/// the full pair alongside. Both polytopes are moved by the map that
/// normalizes `P`, so their slices are taken along the same axis.
pub fn idp_via_slices(p: &Polytope, p2: &Polytope) -> Result<SliceIdpReport> {
    let s = detect_prismatoid(p).map_err(|_| Error::NotPrismatoid)?;
    detect_prismatoid(p2).map_err(|_| Error::NotPrismatoid)?;
    if !p.is_lattice() || !p2.is_lattice() {
        return Err(Error::NotLatticePolytope);
    }
    if !is_smooth(p)?.smooth || !is_smooth(p2)?.smooth {
        return Err(Error::Precondition("prismatoids must be smooth".into()));
    }
    if !minkowski_equivalent(p, p2) {
        return Err(Error::Precondition(
            "prismatoids are not Minkowski equivalent".into(),
        ));
    }
    let map = normalizing_map(p, &s)?;
    let d1 = slices(&p.map(&map)?)?;
    let d2 = slices(&p2.map(&map)?)?;
    let mut verdict = true;
    let mut slice_pairs = 0;
    let mut failing_pairs = Vec::new();
    let mut witnesses = Vec::new();
    for a in &d1.slices {
        for b in &d2.slices {
            slice_pairs += 1;
            let r = is_idp_pair_ra(&a.polytope, &b.polytope)?;
            if !r.verdict {
                verdict = false;
                failing_pairs.push((a.level, b.level));
                for w in r.witnesses {
                    if witnesses.len() < WITNESS_CAP {
                        witnesses.push(w);
                    }
                }
            }
        }
    }
    let direct = is_idp_pair_ra(p, p2)?;
    Ok(SliceIdpReport {
        verdict,
        slice_pairs,
        failing_pairs,
        witnesses,
        direct,
    })
}

/// Height of the prism axis, for reporting.
pub fn axis_height(dec: &SliceDecomposition) -> BigInt {
    let h = &dec.top_height - &dec.bottom_height;
    debug_assert!(!h.is_zero());
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[&[i64]]) -> Polytope {
        Polytope::from_i64s(v).unwrap()
    }

    /// Prism over `base` with top `base + shift` at height `h`.
    fn lift(base: &[&[i64]], shift: &[i64], h: i64) -> Polytope {
        let mut pts: Vec<Vec<i64>> = Vec::new();
        for v in base {
            let mut b = v.to_vec();
            b.push(0);
            pts.push(b);
            let mut t: Vec<i64> = v.iter().zip(shift).map(|(a, s)| a + s).collect();
            t.push(h);
            pts.push(t);
        }
        let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
        poly(&refs)
    }

    const P0: [&[i64]; 4] = [&[0, 0], &[2, 0], &[0, 1], &[1, 1]];
    const SQ: [&[i64]; 4] = [&[0, 0], &[1, 0], &[0, 1], &[1, 1]];

    #[test]
    fn unit_cube_detected_along_z() {
        let c = Polytope::unit_cube(3);
        let s = detect_prismatoid(&c).unwrap();
        assert_eq!(
            c.facets()[s.bottom].normal,
            LatticeVector::from_i64s(&[0, 0, -1])
        );
        assert_eq!(s.up_normal, LatticeVector::from_i64s(&[0, 0, 1]));
        let (img, map) = normalize_axis(&c).unwrap();
        assert!(map.is_identity());
        assert_eq!(img, c);
        let dec = slices(&c).unwrap();
        assert_eq!(dec.slices.len(), 2);
        assert!(dec
            .slices
            .iter()
            .all(|s| s.polytope == Polytope::unit_cube(2)));
    }

    #[test]
    fn simplex_refused() {
        let s = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(detect_prismatoid(&s).is_err());
        assert_eq!(normalize_axis(&s).unwrap_err(), Error::NotPrismatoid);
        let pyramid = poly(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[2, 2, 0], &[1, 1, 1]]);
        assert!(detect_prismatoid(&pyramid).is_err());
    }

    #[test]
    fn sheared_prismatoid_slices() {
        let p = lift(&P0, &[1, 1], 1);
        let dec = slices(&p).unwrap();
        assert_eq!(dec.slices[0].polytope, poly(&P0));
        assert_eq!(
            dec.slices[1].polytope,
            poly(&P0).translate(&LatticeVector::from_i64s(&[1, 1]))
        );
        let checks = verify_slice_lemmas(&p).unwrap();
        assert!(checks.top_bottom.all_passed());
        assert!(checks.slices.all_passed(), "{:?}", checks.slices.failures);
    }

    #[test]
    fn sheared_cube_is_straightened() {
        let p = lift(&SQ, &[1, 1], 1);
        let (img, _) = normalize_axis(&p).unwrap();
        assert_eq!(img, Polytope::unit_cube(3));
    }

    #[test]
    fn tall_cube_has_three_slices() {
        let p = lift(&SQ, &[0, 0], 2);
        let dec = slices(&p).unwrap();
        assert_eq!(dec.slices.len(), 3);
        assert_eq!(dec.height(), 2);
        assert_eq!(axis_height(&dec), BigInt::from(2));
    }

    #[test]
    fn non_smooth_lift_has_fractional_slice() {
        let p = lift(&SQ, &[1, 0], 2);
        assert!(!is_smooth(&p).unwrap().smooth);
        let checks = verify_slice_lemmas(&p).unwrap();
        assert!(!checks.slices.all_passed());
        assert!(checks
            .slices
            .failures
            .iter()
            .any(|f| f.instance == "slice l=1" && f.witness.contains("not integral")));
    }

    #[test]
    fn level_check_and_heights() {
        let half = BigRational::new(1.into(), 2.into());
        let raised = Polytope::unit_cube(3).translate_rational(&RationalPoint::new(vec![
            BigRational::zero(),
            BigRational::zero(),
            half,
        ]));
        assert!(matches!(
            slices(&raised),
            Err(Error::NonIntegralHeights { .. })
        ));
        // old x becomes the last coordinate; P0 has no facet pair normal to x
        let rot = IntMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let turned = lift(&P0, &[0, 0], 1)
            .map(&UnimodularMap::linear(rot).unwrap())
            .unwrap();
        assert!(matches!(slices(&turned), Err(Error::Precondition(_))));
        let (img, _) = normalize_axis(&turned).unwrap();
        assert!(slices(&img).is_ok());
    }

    #[test]
    fn slice_idp_examples() {
        let c = Polytope::unit_cube(3);
        let r = idp_via_slices(&c, &c).unwrap();
        assert!(r.verdict && r.agrees());
        assert_eq!(r.slice_pairs, 4);
        let p = lift(&P0, &[1, 1], 1);
        let r = idp_via_slices(&p, &p.dilate(2)).unwrap();
        assert!(r.verdict && r.agrees());
        assert_eq!(r.slice_pairs, 6);
        assert!(matches!(
            idp_via_slices(&c, &p),
            Err(Error::Precondition(_))
        ));
    }
}
