//! Simplicity, smoothness and the standard position of smooth cubes.

use std::fmt;

use num_traits::Zero;

use crate::cubeface::{recognize_cube, CubeStructure};
use crate::error::{Error, Result};
use crate::exactlat::{
    lattice_basis_check, primitive_direction, IntMatrix, LatticeVector, RationalPoint,
    UnimodularMap,
};
use crate::polytope::Polytope;

/// A vertex with the primitive directions of its incident edges, listed in
/// neighbour order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexStar {
    pub vertex: RationalPoint,
    pub vertex_id: usize,
    pub edge_dirs: Vec<LatticeVector>,
}

pub fn vertex_star(p: &Polytope, v: usize) -> VertexStar {
    let vertex = p.vertices()[v].clone();
    let edge_dirs = p
        .neighbors(v)
        .into_iter()
        .map(|w| primitive_direction(&(&p.vertices()[w] - &vertex)).expect("distinct vertices"))
        .collect();
    VertexStar {
        vertex,
        vertex_id: v,
        edge_dirs,
    }
}

/// True iff every vertex lies on exactly `dim P` edges.
pub fn is_simple(p: &Polytope) -> bool {
    let d = p.dim();
    (0..p.num_vertices()).all(|v| p.neighbors(v).len() == d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonSmooth {
    /// The vertex lies on the wrong number of edges.
    NotSimple { vertex: RationalPoint, edges: usize },
    /// The edge directions do not form a lattice basis.
    BadStar {
        vertex: RationalPoint,
        edge_dirs: Vec<LatticeVector>,
        det: String,
    },
}

impl NonSmooth {
    pub fn vertex(&self) -> &RationalPoint {
        match self {
            NonSmooth::NotSimple { vertex, .. } | NonSmooth::BadStar { vertex, .. } => vertex,
        }
    }
}

impl fmt::Display for NonSmooth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonSmooth::NotSimple { vertex, edges } => {
                write!(f, "vertex {vertex} lies on {edges} edges")
            }
            NonSmooth::BadStar { vertex, det, .. } => {
                write!(f, "vertex {vertex} has edge-direction determinant {det}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothReport {
    pub smooth: bool,
    pub witness: Option<NonSmooth>,
}

/// Smoothness with the first failing vertex as witness.
pub fn is_smooth(p: &Polytope) -> Result<SmoothReport> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: p.dim(),
            ambient: p.ambient_dim(),
        });
    }
    if !p.is_lattice() {
        return Err(Error::NotLatticePolytope);
    }
    let d = p.dim();
    for v in 0..p.num_vertices() {
        let star = vertex_star(p, v);
        if star.edge_dirs.len() != d {
            return Ok(SmoothReport {
                smooth: false,
                witness: Some(NonSmooth::NotSimple {
                    edges: star.edge_dirs.len(),
                    vertex: star.vertex,
                }),
            });
        }
        if !lattice_basis_check(&star.edge_dirs)? {
            let det = IntMatrix::from_columns(&star.edge_dirs).det().to_string();
            return Ok(SmoothReport {
                smooth: false,
                witness: Some(NonSmooth::BadStar {
                    vertex: star.vertex,
                    edge_dirs: star.edge_dirs,
                    det,
                }),
            });
        }
    }
    Ok(SmoothReport {
        smooth: true,
        witness: None,
    })
}

/// Primitive direction of the edge leaving `F_k` at the base vertex: the
/// edge lying in every lower facet except `F_k`.
pub fn axis_edge_dirs(c: &CubeStructure) -> Vec<LatticeVector> {
    let p = c.polytope();
    let b = c.base_vertex();
    let base = &p.vertices()[b];
    (1..=c.dim())
        .map(|k| {
            let w = p
                .neighbors(b)
                .into_iter()
                .find(|&w| {
                    (1..=c.dim()).all(|j| p.incidence(c.facet(j, false)).contains(w) == (j != k))
                })
                .expect("each axis has one edge at the base vertex");
            primitive_direction(&(&p.vertices()[w] - base)).expect("distinct vertices")
        })
        .collect()
}

/// Moves a smooth cube so that its base vertex sits at the origin with
/// edge directions `e_1..e_d`, axis `k` going to `e_k`. Returns the
/// relabelled image and the map applied.
pub fn standard_position(c: &CubeStructure) -> Result<(CubeStructure, UnimodularMap)> {
    let report = is_smooth(c.polytope())?;
    if let Some(w) = report.witness {
        return Err(Error::NotSmooth(w.to_string()));
    }
    let dirs = axis_edge_dirs(c);
    let s = IntMatrix::from_columns(&dirs);
    let u = s
        .inverse_unimodular()
        .expect("smooth star is a lattice basis");
    let base = c.polytope().vertices()[c.base_vertex()]
        .to_lattice()
        .expect("lattice vertex");
    let t = -&u.apply(&base);
    let map = UnimodularMap::new(u, t)?;
    let image = c.polytope().map(&map)?;
    let cube = recognize_cube(&image).expect("unimodular images of cubes are cubes");
    debug_assert!(cube.polytope().vertices()[cube.base_vertex()]
        .coords()
        .iter()
        .all(|x| x.is_zero()));
    Ok((cube, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::random_unimodular;

    fn dirs(v: &[&[i64]]) -> Vec<LatticeVector> {
        v.iter().map(|c| LatticeVector::from_i64s(c)).collect()
    }

    fn sorted(mut v: Vec<LatticeVector>) -> Vec<LatticeVector> {
        v.sort();
        v
    }

    fn trapezoid() -> Polytope {
        Polytope::from_i64s(&[&[0, 0], &[2, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    fn reeve(q: i64) -> Polytope {
        Polytope::from_i64s(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, q]]).unwrap()
    }

    #[test]
    fn stars() {
        let sq = Polytope::unit_cube(2);
        assert_eq!(
            sorted(vertex_star(&sq, 0).edge_dirs),
            dirs(&[&[0, 1], &[1, 0]])
        );
        let t = trapezoid();
        let v = t.vertex_index(&RationalPoint::from_i64s(&[2, 0])).unwrap();
        assert_eq!(
            sorted(vertex_star(&t, v).edge_dirs),
            dirs(&[&[-1, 0], &[-1, 1]])
        );
        let r = reeve(2);
        let v = r
            .vertex_index(&RationalPoint::from_i64s(&[1, 1, 2]))
            .unwrap();
        let star = vertex_star(&r, v);
        assert_eq!(star.edge_dirs.len(), 3);
        assert!(star.edge_dirs.iter().all(|e| e.content() == 1.into()));
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&Polytope::unit_cube(3)));
        let pyramid = Polytope::from_i64s(&[
            &[1, 1, 0],
            &[1, -1, 0],
            &[-1, 1, 0],
            &[-1, -1, 0],
            &[0, 0, 1],
        ])
        .unwrap();
        assert!(!is_simple(&pyramid));
        let r = is_smooth(&pyramid).unwrap();
        assert!(matches!(
            r.witness,
            Some(NonSmooth::NotSimple { edges: 4, .. })
        ));
    }

    #[test]
    fn smoothness_examples() {
        assert!(is_smooth(&Polytope::unit_cube(3)).unwrap().smooth);
        assert!(is_smooth(&trapezoid()).unwrap().smooth);
        let r = is_smooth(&reeve(2)).unwrap();
        assert!(!r.smooth);
        assert!(matches!(r.witness, Some(NonSmooth::BadStar { .. })));
        assert!(is_smooth(&reeve(1)).unwrap().smooth);
        let half = Polytope::from_vertices(&[
            RationalPoint::from_i64s(&[0, 0]),
            RationalPoint::from_i64s(&[1, 0]),
            RationalPoint::new(vec![
                crate::exactlat::rat(0),
                num_rational::BigRational::new(1.into(), 2.into()),
            ]),
        ])
        .unwrap();
        assert_eq!(is_smooth(&half), Err(Error::NotLatticePolytope));
    }

    #[test]
    fn standard_position_examples() {
        let cube = recognize_cube(&Polytope::unit_cube(3)).unwrap();
        let (img, map) = standard_position(&cube).unwrap();
        assert!(map.is_identity());
        assert_eq!(img.polytope(), &Polytope::unit_cube(3));

        let t = recognize_cube(&trapezoid()).unwrap();
        let (img, map) = standard_position(&t).unwrap();
        assert!(map.is_identity());
        assert_eq!(img.polytope(), &trapezoid());

        for seed in 0..5 {
            let u = random_unimodular(3, seed, 4);
            let u = UnimodularMap::new(u.matrix().clone(), LatticeVector::from_i64s(&[3, -1, 7]))
                .unwrap();
            let scrambled = Polytope::unit_cube(3).map(&u).unwrap();
            let c = recognize_cube(&scrambled).unwrap();
            let (img, _) = standard_position(&c).unwrap();
            assert_eq!(img.polytope(), &Polytope::unit_cube(3));
            let star = sorted(vertex_star(img.polytope(), img.base_vertex()).edge_dirs);
            assert_eq!(star, dirs(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        }
    }

    #[test]
    fn standard_position_refuses_non_smooth() {
        // a parallelogram cube with a non-unimodular corner
        let p = Polytope::from_i64s(&[&[0, 0], &[2, 1], &[1, 2], &[3, 3]]).unwrap();
        let c = recognize_cube(&p).unwrap();
        assert!(matches!(standard_position(&c), Err(Error::NotSmooth(_))));
    }
}
