//! Combinatorial cubes: recognition, the `F_I^J` face labeling, opposite
//! faces and facet parallelism.
//!
//! A label `(I, J)` names the face where the coordinates in `I` sit on the
//! 0-side and those in `J` on the 1-side. Axes are 1-based.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polytope::{parallel, Polytope};
use crate::report::{TheoremId, TheoremReport};

const MAX_AXES: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceLabel {
    lower: u32,
    upper: u32,
}

fn axis_bit(axis: usize) -> Result<u32> {
    if axis == 0 || axis > MAX_AXES {
        return Err(Error::InvalidLabel(format!("axis {axis} out of range")));
    }
    Ok(1 << (axis - 1))
}

fn axes_of(mask: u32) -> Vec<usize> {
    (1..=MAX_AXES)
        .filter(|&a| mask & (1 << (a - 1)) != 0)
        .collect()
}

impl FaceLabel {
    /// The whole cube, `F_∅`.
    pub const WHOLE: FaceLabel = FaceLabel { lower: 0, upper: 0 };

    pub fn new(lower: &[usize], upper: &[usize]) -> Result<Self> {
        let mut l = 0u32;
        for &a in lower {
            l |= axis_bit(a)?;
        }
        let mut u = 0u32;
        for &a in upper {
            u |= axis_bit(a)?;
        }
        Self::from_masks(l, u)
    }

    /// Bit `k - 1` stands for axis `k`.
    pub fn from_masks(lower: u32, upper: u32) -> Result<Self> {
        if lower & upper != 0 {
            return Err(Error::InvalidLabel(format!(
                "axes {:?} are in both I and J",
                axes_of(lower & upper)
            )));
        }
        Ok(FaceLabel { lower, upper })
    }

    /// The primary facet `F_k`.
    pub fn lower_facet(axis: usize) -> Result<Self> {
        Self::new(&[axis], &[])
    }

    /// The facet `F_k̄` opposite `F_k`.
    pub fn upper_facet(axis: usize) -> Result<Self> {
        Self::new(&[], &[axis])
    }

    pub fn lower_mask(&self) -> u32 {
        self.lower
    }

    pub fn upper_mask(&self) -> u32 {
        self.upper
    }

    pub fn lower(&self) -> Vec<usize> {
        axes_of(self.lower)
    }

    pub fn upper(&self) -> Vec<usize> {
        axes_of(self.upper)
    }

    /// `|I| + |J|`.
    pub fn codim(&self) -> usize {
        (self.lower | self.upper).count_ones() as usize
    }

    pub fn is_primary(&self) -> bool {
        self.upper == 0
    }

    pub fn fixes(&self, axis: usize) -> bool {
        axis_bit(axis).is_ok_and(|b| (self.lower | self.upper) & b != 0)
    }

    /// Largest axis mentioned, 0 for the whole cube.
    pub fn max_axis(&self) -> usize {
        (32 - (self.lower | self.upper).leading_zeros()) as usize
    }

    /// True iff the face named by `self` lies inside the one named by
    /// `other`.
    pub fn is_subface_of(&self, other: &FaceLabel) -> bool {
        other.lower & !self.lower == 0 && other.upper & !self.upper == 0
    }

    /// Label of the intersection of the two faces; `None` when it is empty.
    pub fn meet(&self, other: &FaceLabel) -> Option<FaceLabel> {
        Self::from_masks(self.lower | other.lower, self.upper | other.upper).ok()
    }

    /// Every label of a `d`-cube, ordered by codimension then mask.
    pub fn all(d: usize) -> Vec<FaceLabel> {
        let mut out = Vec::new();
        let n = 3usize.pow(d as u32);
        for mut code in 0..n {
            let (mut l, mut u) = (0u32, 0u32);
            for k in 0..d {
                match code % 3 {
                    1 => l |= 1 << k,
                    2 => u |= 1 << k,
                    _ => {}
                }
                code /= 3;
            }
            out.push(FaceLabel { lower: l, upper: u });
        }
        out.sort_by_key(|f| (f.codim(), *f));
        out
    }
}

impl fmt::Display for FaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in 1..=MAX_AXES {
            let b = 1u32 << (a - 1);
            let tag = if self.lower & b != 0 {
                ""
            } else if self.upper & b != 0 {
                "bar"
            } else {
                continue;
            };
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{a}{tag}")?;
        }
        Ok(())
    }
}

impl FromStr for FaceLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for tok in s.split_whitespace() {
            let (num, up) = match tok.strip_suffix("bar") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let a: usize = num
                .parse()
                .map_err(|_| Error::InvalidLabel(format!("bad label token {tok:?}")))?;
            if up {
                upper.push(a);
            } else {
                lower.push(a);
            }
        }
        FaceLabel::new(&lower, &upper)
    }
}

/// The label with `axis` moved between `I` and `J`.
pub fn opposite(label: FaceLabel, axis: usize) -> Result<FaceLabel> {
    let b = axis_bit(axis).map_err(|_| Error::AxisNotFixed(axis))?;
    if label.lower & b != 0 {
        FaceLabel::from_masks(label.lower & !b, label.upper | b)
    } else if label.upper & b != 0 {
        FaceLabel::from_masks(label.lower | b, label.upper & !b)
    } else {
        Err(Error::AxisNotFixed(axis))
    }
}

/// Why a polytope was refused as a combinatorial cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotACube(pub String);

impl fmt::Display for NotACube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a cube: {}", self.0)
    }
}

/// A polytope together with a face labeling realizing an isomorphism onto
/// the face poset of `[0,1]^d`.
#[derive(Clone, Debug)]
pub struct CubeStructure {
    polytope: Polytope,
    base_vertex: usize,
    lower_facets: Vec<usize>,
    upper_facets: Vec<usize>,
    by_label: BTreeMap<FaceLabel, usize>,
    by_face: Vec<Option<FaceLabel>>,
}

/// Recognizes a combinatorial cube. The base vertex (label `F_{1..d}`) is
/// the lexicographically smallest vertex, and axis `k` is its `k`-th
/// incident facet in facet order.
pub fn recognize_cube(p: &Polytope) -> std::result::Result<CubeStructure, NotACube> {
    let refuse = |why: String| Err(NotACube(why));
    if !p.is_full_dimensional() {
        return refuse(format!("dimension {} in R^{}", p.dim(), p.ambient_dim()));
    }
    let d = p.dim();
    if d == 0 || d > MAX_AXES {
        return refuse(format!("unsupported dimension {d}"));
    }
    if d >= usize::BITS as usize || p.num_vertices() != 1usize << d {
        return refuse(format!("{} vertices, expected 2^{d}", p.num_vertices()));
    }
    if p.facets().len() != 2 * d {
        return refuse(format!("{} facets, expected {}", p.facets().len(), 2 * d));
    }
    for v in 0..p.num_vertices() {
        let k = p.facets_at(v).len();
        if k != d {
            return refuse(format!("vertex {} lies on {k} facets", p.vertices()[v]));
        }
    }
    let base_vertex = 0;
    let lower_facets = p.facets_at(base_vertex);
    let mut upper_facets = Vec::with_capacity(d);
    for &f in &lower_facets {
        let disjoint: Vec<usize> = (0..p.facets().len())
            .filter(|&g| p.incidence(f).is_disjoint(p.incidence(g)))
            .collect();
        match disjoint.as_slice() {
            [g] if !lower_facets.contains(g) && !upper_facets.contains(g) => upper_facets.push(*g),
            _ => return refuse(format!("facet {f} has no unique opposite facet")),
        }
    }

    let lat = p.face_lattice();
    let mut by_label = BTreeMap::new();
    let mut by_face = vec![None; lat.len()];
    for (id, face) in lat.faces().iter().enumerate() {
        if face.dim < 0 {
            continue;
        }
        let (mut l, mut u) = (0u32, 0u32);
        for &f in &face.facets {
            if let Some(k) = lower_facets.iter().position(|&x| x == f) {
                l |= 1 << k;
            } else if let Some(k) = upper_facets.iter().position(|&x| x == f) {
                u |= 1 << k;
            }
        }
        let Ok(label) = FaceLabel::from_masks(l, u) else {
            return refuse(format!("face {id} meets opposite facets"));
        };
        if face.dim != (d - label.codim()) as isize {
            return refuse(format!("face {label:?} has dimension {}", face.dim));
        }
        if by_label.insert(label, id).is_some() {
            return refuse(format!("label {label} assigned twice"));
        }
        by_face[id] = Some(label);
    }
    if by_label.len() != 3usize.pow(d as u32) {
        return refuse(format!("{} nonempty faces, expected 3^{d}", by_label.len()));
    }
    for (a, &fa) in &by_label {
        for (b, &fb) in &by_label {
            if lat.contains(fa, fb) != b.is_subface_of(a) {
                return refuse(format!("containment of {b} in {a} disagrees with labels"));
            }
        }
    }
    Ok(CubeStructure {
        polytope: p.clone(),
        base_vertex,
        lower_facets,
        upper_facets,
        by_label,
        by_face,
    })
}

/// Outcome of the two parallelism implications checked on one cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelChecks {
    pub ridges_force_facets: TheoremReport,
    pub three_force_fourth: TheoremReport,
}

impl CubeStructure {
    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn dim(&self) -> usize {
        self.lower_facets.len()
    }

    pub fn base_vertex(&self) -> usize {
        self.base_vertex
    }

    /// Facet index of `F_k` (`upper = false`) or `F_k̄`.
    pub fn facet(&self, axis: usize, upper: bool) -> usize {
        assert!((1..=self.dim()).contains(&axis), "axis {axis} out of range");
        if upper {
            self.upper_facets[axis - 1]
        } else {
            self.lower_facets[axis - 1]
        }
    }

    fn check_label(&self, label: &FaceLabel) -> Result<()> {
        if label.max_axis() > self.dim() {
            return Err(Error::InvalidLabel(format!(
                "label {label} exceeds dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn face_id(&self, label: &FaceLabel) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    pub fn label_of(&self, face_id: usize) -> Option<FaceLabel> {
        self.by_face.get(face_id).copied().flatten()
    }

    /// All `(label, face id)` pairs in label order.
    pub fn labels(&self) -> impl Iterator<Item = (FaceLabel, usize)> + '_ {
        self.by_label.iter().map(|(l, &id)| (*l, id))
    }

    /// The geometric face `F_I^J`.
    pub fn face_of(&self, label: &FaceLabel) -> Result<Polytope> {
        self.check_label(label)?;
        let id = self.face_id(label).expect("every valid label names a face");
        self.polytope.face_polytope(id)
    }

    /// Parallelism of two labelled faces of this cube.
    pub fn faces_parallel(&self, a: &FaceLabel, b: &FaceLabel) -> Result<bool> {
        self.check_label(a)?;
        self.check_label(b)?;
        let fa = self.face_id(a).expect("valid label");
        let fb = self.face_id(b).expect("valid label");
        Ok(parallel(&self.polytope, fa, &self.polytope, fb))
    }

    /// Least axis `k` with `F_k ∥ F_k̄`.
    pub fn parallel_facet_pair(&self) -> Option<usize> {
        (1..=self.dim()).find(|&k| self.facets_parallel(k))
    }

    pub fn facets_parallel(&self, axis: usize) -> bool {
        let p = &self.polytope;
        let lo = p.facet_face_id(self.facet(axis, false));
        let hi = p.facet_face_id(self.facet(axis, true));
        parallel(p, lo, p, hi)
    }

    /// Checks, over all axis choices and both sides of every axis, that
    /// parallel ridge pairs in two facets force the facets through them to
    /// be parallel, and that three mutually parallel codimension-2 faces
    /// around an axis pair force the fourth.
    pub fn verify_parallel_propositions(&self) -> ParallelChecks {
        let d = self.dim();
        let mut ridges = TheoremReport::new(TheoremId::ParallelRidgesForceFacets);
        let mut quads = TheoremReport::new(TheoremId::ThreeParallelForceFourth);
        let lab =
            |lower: &[usize], upper: &[usize]| FaceLabel::new(lower, upper).expect("disjoint");
        let par = |a: &FaceLabel, b: &FaceLabel| self.faces_parallel(a, b).expect("in range");
        // A face fixing axis a on side s, plus z on the 0-side or 1-side.
        let with_z = |a: usize, s: bool, z: usize, zup: bool| {
            let mut lower = Vec::new();
            let mut upper = Vec::new();
            if s {
                upper.push(a)
            } else {
                lower.push(a)
            }
            if zup {
                upper.push(z)
            } else {
                lower.push(z)
            }
            lab(&lower, &upper)
        };
        for z in 1..=d {
            for x in 1..=d {
                for y in x + 1..=d {
                    if x == z || y == z {
                        continue;
                    }
                    for (sx, sy) in [(false, false), (false, true), (true, false), (true, true)] {
                        let hyp = par(&with_z(x, sx, z, false), &with_z(x, sx, z, true))
                            && par(&with_z(y, sy, z, false), &with_z(y, sy, z, true));
                        let instance = format!("x={x}{} y={y}{} z={z}", bar(sx), bar(sy));
                        if !hyp || self.facets_parallel(z) {
                            ridges.pass();
                        } else {
                            ridges.fail(instance, format!("F_{z} not parallel to F_{z}bar"));
                        }
                    }
                }
            }
        }
        for x in 1..=d {
            for y in x + 1..=d {
                let four = [
                    lab(&[x, y], &[]),
                    lab(&[x], &[y]),
                    lab(&[y], &[x]),
                    lab(&[], &[x, y]),
                ];
                // Parallelism is an equivalence relation; count the class
                // sizes among the four faces.
                let mut best = 0;
                for a in &four {
                    best = best.max(four.iter().filter(|b| par(a, b)).count());
                }
                if best == 3 {
                    quads.fail(
                        format!("x={x} y={y}"),
                        "exactly three of the four faces are parallel",
                    );
                } else {
                    quads.pass();
                }
            }
        }
        ParallelChecks {
            ridges_force_facets: ridges,
            three_force_fourth: quads,
        }
    }
}

fn bar(up: bool) -> &'static str {
    if up {
        "bar"
    } else {
        ""
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapezoid() -> Polytope {
        Polytope::from_i64s(&[&[0, 0], &[2, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn label_text_round_trip() {
        let l = FaceLabel::new(&[1, 3], &[2]).unwrap();
        assert_eq!(l.to_string(), "1 2bar 3");
        assert_eq!("1 2bar 3".parse::<FaceLabel>().unwrap(), l);
        assert_eq!(FaceLabel::WHOLE.to_string(), "");
        assert!("1 1bar".parse::<FaceLabel>().is_err());
        assert!("0".parse::<FaceLabel>().is_err());
    }

    #[test]
    fn opposite_examples() {
        let f1 = FaceLabel::lower_facet(1).unwrap();
        assert_eq!(opposite(f1, 1).unwrap(), FaceLabel::upper_facet(1).unwrap());
        let xy = FaceLabel::new(&[1, 2], &[]).unwrap();
        assert_eq!(
            opposite(xy, 2).unwrap(),
            FaceLabel::new(&[1], &[2]).unwrap()
        );
        assert_eq!(opposite(FaceLabel::WHOLE, 1), Err(Error::AxisNotFixed(1)));
        assert_eq!(opposite(xy, 3), Err(Error::AxisNotFixed(3)));
    }

    #[test]
    fn all_labels_count() {
        assert_eq!(FaceLabel::all(3).len(), 27);
        assert_eq!(FaceLabel::all(3)[0], FaceLabel::WHOLE);
        assert_eq!(
            FaceLabel::all(2).iter().filter(|l| l.codim() == 2).count(),
            4
        );
    }

    #[test]
    fn unit_cube_canonical_labels() {
        let c = recognize_cube(&Polytope::unit_cube(3)).unwrap();
        let f1 = c.face_of(&"1".parse().unwrap()).unwrap();
        assert_eq!(f1.dim(), 2);
        assert!(f1
            .vertices()
            .iter()
            .all(|v| v.coords()[0] == crate::exactlat::rat(0)));
        let e = c.face_of(&"1 2bar".parse().unwrap()).unwrap();
        assert_eq!(e.dim(), 1);
        assert!(e
            .vertices()
            .iter()
            .all(|v| v.coords()[0] == crate::exactlat::rat(0)
                && v.coords()[1] == crate::exactlat::rat(1)));
        assert_eq!(c.parallel_facet_pair(), Some(1));
        let base = c.face_of(&"1 2 3".parse().unwrap()).unwrap();
        assert_eq!(base.vertices()[0].to_string(), "(0,0,0)");
    }

    #[test]
    fn trapezoid_labels() {
        let c = recognize_cube(&trapezoid()).unwrap();
        let top = c.face_of(&"2bar".parse().unwrap()).unwrap();
        let ys: Vec<String> = top
            .vertices()
            .iter()
            .map(|v| v.coords()[1].to_string())
            .collect();
        assert_eq!(ys, vec!["1", "1"]);
        // the horizontal pair is axis 2 here: facet order puts x >= 0 first
        assert_eq!(c.parallel_facet_pair(), Some(2));
        assert!(!c.facets_parallel(1));
    }

    #[test]
    fn simplex_is_refused() {
        let s = Polytope::from_i64s(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert!(recognize_cube(&s).is_err());
        let oct = Polytope::from_i64s(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ])
        .unwrap();
        assert!(recognize_cube(&oct).is_err());
    }

    #[test]
    fn bad_label_rejected_by_face_of() {
        let c = recognize_cube(&Polytope::unit_cube(2)).unwrap();
        assert!(c.face_of(&"3".parse().unwrap()).is_err());
    }

    #[test]
    fn unit_cube_propositions_hold() {
        let c = recognize_cube(&Polytope::unit_cube(3)).unwrap();
        let r = c.verify_parallel_propositions();
        assert_eq!(r.ridges_force_facets.instances, 12);
        assert!(r.ridges_force_facets.all_passed());
        assert_eq!(r.three_force_fourth.instances, 3);
        assert!(r.three_force_fourth.all_passed());
    }
}
