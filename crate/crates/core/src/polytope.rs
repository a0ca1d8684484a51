//! Exact polytopes with both V- and H-representations, their face lattices,
//! normal fans and lattice points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlat::{
    primitive_direction, rank_integer, rref, LatticeVector, RationalPoint, UnimodularMap,
};
use crate::faces::{FaceLattice, VertexSet};
use crate::halfspace::{Halfspace, HalfspaceSystem};
use crate::hull;

/// Facet inequality `<normal, x> <= offset`, normal primitive and outward.
pub type Facet = Halfspace;

/// A convex polytope in `R^d`.
///
/// Vertices are sorted lexicographically and facets by `(normal, offset)`.
/// Lower-dimensional polytopes also carry the equations of their affine
/// hull; their facet inequalities are only meaningful on that hull.
#[derive(Clone)]
pub struct Polytope {
    ambient_dim: usize,
    dim: usize,
    vertices: Vec<RationalPoint>,
    facets: Vec<Facet>,
    equations: Vec<Halfspace>,
    incidence: Vec<VertexSet>,
    lattice: OnceLock<FaceLattice>,
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("dim", &self.dim)
            .field("ambient_dim", &self.ambient_dim)
            .field(
                "vertices",
                &self
                    .vertices
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

/// A basis of the linear space parallel to a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSpan {
    pub basis: Vec<LatticeVector>,
    pub dim: usize,
}

/// Maximal cone of the normal fan at a vertex, given by the primitive
/// normals of the facets through that vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexCone {
    pub apex: usize,
    pub generators: Vec<LatticeVector>,
}

/// A facet normal `y` of `P` with `max_P <x,y> < min_Q <x,y>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub normal: LatticeVector,
    pub max_on_p: BigRational,
    pub min_on_q: BigRational,
    pub facet_id: usize,
}

impl Polytope {
    /// Convex hull of full-dimensional input.
    pub fn from_vertices(points: &[RationalPoint]) -> Result<Self> {
        Self::build(points, false)
    }

    /// Convex hull of arbitrary input; lower-dimensional sets are handled in
    /// a coordinate chart of their affine hull.
    pub fn from_vertices_embedded(points: &[RationalPoint]) -> Result<Self> {
        Self::build(points, true)
    }

    pub fn from_lattice_points(points: &[LatticeVector]) -> Result<Self> {
        let pts: Vec<RationalPoint> = points.iter().map(LatticeVector::to_point).collect();
        Self::from_vertices(&pts)
    }

    /// Convenience constructor for integer vertex lists.
    pub fn from_i64s(points: &[&[i64]]) -> Result<Self> {
        let pts: Vec<RationalPoint> = points.iter().map(|p| RationalPoint::from_i64s(p)).collect();
        Self::from_vertices(&pts)
    }

    /// The unit cube `[0,1]^d`.
    pub fn unit_cube(d: usize) -> Self {
        let pts: Vec<RationalPoint> = (0..1usize << d)
            .map(|mask| {
                let c: Vec<i64> = (0..d).map(|i| ((mask >> i) & 1) as i64).collect();
                RationalPoint::from_i64s(&c)
            })
            .collect();
        Self::from_vertices(&pts).expect("unit cube is full-dimensional")
    }

    pub fn point(p: RationalPoint) -> Self {
        Self::from_vertices_embedded(&[p]).expect("single point")
    }

    fn build(points: &[RationalPoint], allow_lower: bool) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let d = first.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
        let pts: Vec<RationalPoint> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let base = pts[0].clone();
        let directions: Vec<Vec<BigRational>> = pts[1..]
            .iter()
            .map(|p| (p - &base).coords().to_vec())
            .collect();
        let (red, pivots) = if directions.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            rref(&directions)
        };
        let k = pivots.len();
        if k < d && !allow_lower {
            return Err(Error::NotFullDimensional { dim: k, ambient: d });
        }

        let equations = affine_hull_equations(d, &red, &pivots, &base);

        let facets: Vec<Facet> = if k == 0 {
            Vec::new()
        } else {
            let chart: Vec<RationalPoint> = pts
                .iter()
                .map(|p| {
                    RationalPoint::new(pivots.iter().map(|&c| p.coords()[c].clone()).collect())
                })
                .collect();
            let mut lifted: Vec<Facet> = hull::facets(&chart)
                .into_iter()
                .map(|h| {
                    let mut n = vec![BigInt::zero(); d];
                    for (i, &c) in pivots.iter().enumerate() {
                        n[c] = h.normal.coords()[i].clone();
                    }
                    Halfspace::new(LatticeVector::new(n), h.offset)
                })
                .collect();
            lifted.sort();
            lifted
        };

        // Vertices: points whose tight facet normals have full rank k.
        let vertices: Vec<RationalPoint> = if k == 0 {
            vec![base.clone()]
        } else {
            pts.iter()
                .filter(|p| {
                    let tight: Vec<Vec<BigInt>> = facets
                        .iter()
                        .filter(|f| f.tight_at(p))
                        .map(|f| f.normal.coords().to_vec())
                        .collect();
                    tight.len() >= k && rank_integer(&tight) == k
                })
                .cloned()
                .collect()
        };

        let incidence: Vec<VertexSet> = facets
            .iter()
            .map(|f| {
                VertexSet::from_indices(
                    vertices.len(),
                    vertices
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| f.tight_at(v))
                        .map(|(i, _)| i),
                )
            })
            .collect();

        let poly = Polytope {
            ambient_dim: d,
            dim: k,
            vertices,
            facets,
            equations,
            incidence,
            lattice: OnceLock::new(),
        };
        poly.cross_check();
        Ok(poly)
    }

    /// V/H consistency: every vertex satisfies every inequality and equation,
    /// every vertex is on at least `dim` facets, every facet holds at least
    /// `dim` vertices, and facet normals are distinct.
    fn cross_check(&self) {
        for v in &self.vertices {
            assert!(
                self.facets.iter().all(|f| f.satisfied_by(v)),
                "vertex violates a facet"
            );
            assert!(
                self.equations.iter().all(|e| e.tight_at(v)),
                "vertex off the affine hull"
            );
        }
        if self.dim > 0 {
            for i in 0..self.vertices.len() {
                let on = self.incidence.iter().filter(|s| s.contains(i)).count();
                assert!(on >= self.dim, "vertex on fewer than dim facets");
            }
            for s in &self.incidence {
                assert!(s.len() >= self.dim, "facet with too few vertices");
            }
        }
        let normals: BTreeSet<&LatticeVector> = self.facets.iter().map(|f| &f.normal).collect();
        assert_eq!(normals.len(), self.facets.len(), "repeated facet normal");
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Halfspace] {
        &self.equations
    }

    /// Vertices on facet `f`.
    pub fn incidence(&self, f: usize) -> &VertexSet {
        &self.incidence[f]
    }

    /// Facets through vertex `v`.
    pub fn facets_at(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| self.incidence[f].contains(v))
            .collect()
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(RationalPoint::is_integral)
    }

    pub fn lattice_vertices(&self) -> Result<Vec<LatticeVector>> {
        self.vertices
            .iter()
            .map(|v| v.to_lattice().ok_or(Error::NotLatticePolytope))
            .collect()
    }

    pub fn vertex_index(&self, p: &RationalPoint) -> Option<usize> {
        self.vertices.binary_search(p).ok()
    }

    pub fn halfspaces(&self) -> HalfspaceSystem {
        HalfspaceSystem::new(
            self.ambient_dim,
            self.facets.clone(),
            self.equations.clone(),
        )
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.facets.iter().all(|f| f.satisfied_by(p))
            && self.equations.iter().all(|e| e.tight_at(p))
    }

    pub fn contains_lattice(&self, x: &LatticeVector) -> bool {
        self.halfspaces().contains_lattice(x)
    }

    /// Integer bounding box `(floor(min), ceil(max))` per coordinate.
    pub fn bounding_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let d = self.ambient_dim;
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for i in 0..d {
            let vals = self.vertices.iter().map(|v| &v.coords()[i]);
            let min = vals.clone().min().expect("nonempty");
            let max = vals.max().expect("nonempty");
            lo.push(min.floor().to_integer());
            hi.push(max.ceil().to_integer());
        }
        (lo, hi)
    }

    /// All integer points of the polytope, sorted lexicographically.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        let (lo, hi) = self.bounding_box();
        self.halfspaces()
            .lattice_points_in_box(&lo, &hi)
            .expect("bounding box coordinates fit in i64")
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| {
            FaceLattice::build(self.vertices.len(), &self.incidence, |s| {
                affine_dim(&self.vertices, s) as isize
            })
        })
    }

    /// Neighbours of vertex `v` along edges.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.face_lattice()
            .edges()
            .into_iter()
            .filter_map(|(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// The face with the given id as a (possibly lower-dimensional) polytope.
    pub fn face_polytope(&self, face: usize) -> Result<Polytope> {
        let verts: Vec<RationalPoint> = self
            .face_lattice()
            .face(face)
            .vertices
            .iter()
            .map(|i| self.vertices[i].clone())
            .collect();
        Polytope::from_vertices_embedded(&verts)
    }

    /// Linear space parallel to a face: independent vertex differences,
    /// scaled to primitive integer vectors.
    pub fn lin_span(&self, face: usize) -> LinearSpan {
        let verts: Vec<usize> = self.face_lattice().face(face).vertices.to_vec();
        let Some(&first) = verts.first() else {
            return LinearSpan {
                basis: Vec::new(),
                dim: 0,
            };
        };
        let mut basis: Vec<LatticeVector> = Vec::new();
        for &v in &verts[1..] {
            let diff = &self.vertices[v] - &self.vertices[first];
            let Ok(dir) = primitive_direction(&diff) else {
                continue;
            };
            let mut rows: Vec<Vec<BigInt>> = basis.iter().map(|b| b.coords().to_vec()).collect();
            rows.push(dir.coords().to_vec());
            if rank_integer(&rows) == rows.len() {
                basis.push(dir);
            }
        }
        let dim = basis.len();
        LinearSpan { basis, dim }
    }

    /// Normal cones at the vertices (the maximal cones of the normal fan).
    pub fn vertex_cones(&self) -> Vec<VertexCone> {
        (0..self.vertices.len())
            .map(|v| {
                let mut generators: Vec<LatticeVector> = self
                    .facets_at(v)
                    .into_iter()
                    .map(|f| self.facets[f].normal.clone())
                    .collect();
                generators.sort();
                VertexCone {
                    apex: v,
                    generators,
                }
            })
            .collect()
    }

    pub fn translate(&self, t: &LatticeVector) -> Polytope {
        let pts: Vec<RationalPoint> = self.vertices.iter().map(|v| v.translate(t)).collect();
        Polytope::from_vertices_embedded(&pts).expect("translation preserves dimension")
    }

    pub fn translate_rational(&self, t: &RationalPoint) -> Polytope {
        let pts: Vec<RationalPoint> = self.vertices.iter().map(|v| v + t).collect();
        Polytope::from_vertices_embedded(&pts).expect("translation preserves dimension")
    }

    /// `-P`.
    pub fn negate(&self) -> Polytope {
        let pts: Vec<RationalPoint> = self.vertices.iter().map(|v| -v).collect();
        Polytope::from_vertices_embedded(&pts).expect("negation preserves dimension")
    }

    /// `kP` for a positive integer `k`.
    pub fn dilate(&self, k: u64) -> Polytope {
        assert!(k >= 1, "dilation factor must be positive");
        let f = BigRational::from_integer(BigInt::from(k));
        let pts: Vec<RationalPoint> = self.vertices.iter().map(|v| v.scale(&f)).collect();
        Polytope::from_vertices_embedded(&pts).expect("dilation preserves dimension")
    }

    pub fn map(&self, u: &UnimodularMap) -> Result<Polytope> {
        crate::exactlat::apply_unimodular(u, self)
    }

    /// Facet ids of the two polytopes whose normals are negatives of each
    /// other: `(f, g)` with `normal(g) = -normal(f)`, `f < g`.
    pub fn opposite_facet_pairs(&self) -> Vec<(usize, usize)> {
        let by_normal: BTreeMap<&LatticeVector, usize> = self
            .facets
            .iter()
            .enumerate()
            .map(|(i, f)| (&f.normal, i))
            .collect();
        let mut out = Vec::new();
        for (i, f) in self.facets.iter().enumerate() {
            if let Some(&j) = by_normal.get(&-&f.normal) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Face id of the facet with index `f`.
    pub fn facet_face_id(&self, f: usize) -> usize {
        self.face_lattice()
            .find(&self.incidence[f])
            .expect("facets are faces")
    }
}

/// Integer equations `<n, x> = c` cutting out the affine hull described by
/// the reduced direction rows `red` (pivot columns `pivots`) through `base`.
fn affine_hull_equations(
    d: usize,
    red: &[Vec<BigRational>],
    pivots: &[usize],
    base: &RationalPoint,
) -> Vec<Halfspace> {
    let mut out = Vec::new();
    for j in (0..d).filter(|j| !pivots.contains(j)) {
        let mut n = vec![BigRational::zero(); d];
        n[j] = BigRational::one();
        for (i, &p) in pivots.iter().enumerate() {
            n[p] = -red[i][j].clone();
        }
        let normal = primitive_direction(&RationalPoint::new(n)).expect("nonzero equation");
        let offset = normal.dot_point(base);
        out.push(Halfspace::new(normal, offset));
    }
    out
}

/// Affine dimension of a nonempty set of points given by index.
fn affine_dim(vertices: &[RationalPoint], set: &VertexSet) -> usize {
    let idx = set.to_vec();
    let Some(&first) = idx.first() else {
        return 0;
    };
    let rows: Vec<Vec<BigInt>> = idx[1..]
        .iter()
        .map(|&i| {
            let diff = &vertices[i] - &vertices[first];
            diff.scaled_integral().1.into_coords()
        })
        .collect();
    if rows.is_empty() {
        0
    } else {
        rank_integer(&rows)
    }
}

/// `lin(F) = lin(G)` for face `f` of `p` and face `g` of `q`; false when the
/// dimensions differ.
pub fn parallel(p: &Polytope, f: usize, q: &Polytope, g: usize) -> bool {
    if p.ambient_dim() != q.ambient_dim() {
        return false;
    }
    let sf = p.lin_span(f);
    let sg = q.lin_span(g);
    if sf.dim != sg.dim || p.face_lattice().face(f).dim != q.face_lattice().face(g).dim {
        return false;
    }
    if sf.dim == 0 {
        return true;
    }
    let rows: Vec<Vec<BigInt>> = sf
        .basis
        .iter()
        .chain(&sg.basis)
        .map(|b| b.coords().to_vec())
        .collect();
    rank_integer(&rows) == sf.dim
}

/// Key of a face in the normal fan: the sorted primitive normals of the
/// facets containing it, which are the rays of its normal cone.
fn cone_keys(p: &Polytope) -> BTreeMap<Vec<LatticeVector>, usize> {
    let lat = p.face_lattice();
    (0..lat.len())
        .filter(|&id| lat.face(id).dim >= 0)
        .map(|id| {
            let mut key: Vec<LatticeVector> = lat
                .face(id)
                .facets
                .iter()
                .map(|&f| p.facets()[f].normal.clone())
                .collect();
            key.sort();
            (key, id)
        })
        .collect()
}

/// Face bijection `P -> Q` induced by equal normal fans, indexed by face id
/// of `P` (the empty face maps to the empty face). `None` if the fans
/// differ or either polytope is not full-dimensional.
pub fn minkowski_bijection(p: &Polytope, q: &Polytope) -> Option<Vec<usize>> {
    if p.ambient_dim() != q.ambient_dim() || !p.is_full_dimensional() || !q.is_full_dimensional() {
        return None;
    }
    let pn: BTreeSet<&LatticeVector> = p.facets().iter().map(|f| &f.normal).collect();
    let qn: BTreeSet<&LatticeVector> = q.facets().iter().map(|f| &f.normal).collect();
    if pn != qn {
        return None;
    }
    let pc: BTreeSet<Vec<LatticeVector>> =
        p.vertex_cones().into_iter().map(|c| c.generators).collect();
    let qc: BTreeSet<Vec<LatticeVector>> =
        q.vertex_cones().into_iter().map(|c| c.generators).collect();
    if pc != qc {
        return None;
    }
    let pk = cone_keys(p);
    let qk = cone_keys(q);
    if pk.len() != qk.len() || pk.keys().ne(qk.keys()) {
        return None;
    }
    let mut map = vec![0usize; p.face_lattice().len()];
    for (key, &id) in &pk {
        map[id] = qk[key];
    }
    Some(map)
}

/// True iff the normal fans of `p` and `q` coincide.
pub fn minkowski_equivalent(p: &Polytope, q: &Polytope) -> bool {
    minkowski_bijection(p, q).is_some()
}

/// True iff `p` and `q` share a point.
pub fn intersects(p: &Polytope, q: &Polytope) -> bool {
    let mut sys = p.halfspaces();
    sys.inequalities.extend(q.facets().iter().cloned());
    sys.equations.extend(q.equations().iter().cloned());
    sys.rational_point().is_some()
}

/// A hyperplane parallel to a facet of `p` separating `p` from `q`, for
/// disjoint `p`, `q` with `p` and `-q` Minkowski equivalent. All facet
/// normals are scanned; the widest gap wins, ties going to the first facet.
pub fn separating_facet_hyperplane(p: &Polytope, q: &Polytope) -> Result<SeparationCertificate> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q.ambient_dim(),
        });
    }
    if intersects(p, q) {
        return Err(Error::NotDisjoint);
    }
    if !minkowski_equivalent(p, &q.negate()) {
        return Err(Error::Precondition(
            "P and -Q are not Minkowski equivalent".into(),
        ));
    }
    let mut best: Option<SeparationCertificate> = None;
    for (facet_id, f) in p.facets().iter().enumerate() {
        let min_on_q = q
            .vertices()
            .iter()
            .map(|v| f.normal.dot_point(v))
            .min()
            .expect("nonempty");
        if f.offset >= min_on_q {
            continue;
        }
        let gap = &min_on_q - &f.offset;
        if best
            .as_ref()
            .is_none_or(|b| gap > &b.min_on_q - &b.max_on_p)
        {
            best = Some(SeparationCertificate {
                normal: f.normal.clone(),
                max_on_p: f.offset.clone(),
                min_on_q,
                facet_id,
            });
        }
    }
    if let Some(cert) = best {
        return Ok(cert);
    }
    Err(Error::LemmaViolation(
        "no facet normal of P separates P from Q".into(),
    ))
}

/// Validates a certificate against the two polytopes directly.
pub fn check_certificate(p: &Polytope, q: &Polytope, cert: &SeparationCertificate) -> bool {
    let max_p = p.vertices().iter().map(|v| cert.normal.dot_point(v)).max();
    let min_q = q.vertices().iter().map(|v| cert.normal.dot_point(v)).min();
    p.facets().get(cert.facet_id).map(|f| &f.normal) == Some(&cert.normal)
        && max_p.as_ref() == Some(&cert.max_on_p)
        && min_q.as_ref() == Some(&cert.min_on_q)
        && cert.max_on_p < cert.min_on_q
}
