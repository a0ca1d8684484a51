mod common;

use common::{cubes, Oracle};
use latcube::cubeface::{opposite, recognize_cube, CubeStructure, FaceLabel};
use latcube::faces::VertexSet;
use latcube::gen::{gen_smooth_cube, GenParams};
use latcube::polytope::Polytope;
use proptest::prelude::*;

fn vertex_set(c: &CubeStructure, l: &FaceLabel) -> VertexSet {
    let p = c.polytope();
    p.face_lattice()
        .face(c.face_id(l).unwrap())
        .vertices
        .clone()
}

fn check_laws(c: &CubeStructure) {
    let d = c.dim();
    let p = c.polytope();
    let labels = FaceLabel::all(d);
    assert_eq!(labels.len(), 3usize.pow(d as u32));
    for l in &labels {
        let id = c.face_id(l).unwrap();
        assert_eq!(c.label_of(id), Some(*l));
        assert_eq!(
            p.face_lattice().face(id).dim,
            (d - l.codim()) as isize,
            "{l}"
        );
    }
    for a in &labels {
        let va = vertex_set(c, a);
        for b in &labels {
            let vb = vertex_set(c, b);
            assert_eq!(va.is_subset(&vb), a.is_subface_of(b), "{a} in {b}");
            let meet = va.intersection(&vb);
            match a.meet(b) {
                Some(m) => assert_eq!(meet, vertex_set(c, &m), "{a} meet {b}"),
                None => assert!(meet.is_empty(), "{a} meet {b}"),
            }
        }
    }
}

/// Labels of oracle facets, matched by tight vertex set.
fn facet_labels(c: &CubeStructure, o: &Oracle) -> Vec<FaceLabel> {
    let p = c.polytope();
    o.facets
        .iter()
        .map(|f| {
            let vs = VertexSet::from_indices(p.num_vertices(), f.tight.iter().copied());
            let id = p.face_lattice().find(&vs).expect("oracle facet is a face");
            c.label_of(id).unwrap()
        })
        .collect()
}

fn generated(dim: usize, seed: u64) -> CubeStructure {
    gen_smooth_cube(&GenParams::new(dim, 4, 2, seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn face_laws_hold(dim in 2usize..=3, seed in any::<u64>()) {
        check_laws(&generated(dim, seed));
    }

    #[test]
    fn parallel_only_if_opposite(dim in 2usize..=3, seed in any::<u64>()) {
        let c = generated(dim, seed);
        let o = Oracle::new(c.polytope());
        prop_assert_eq!(o.facets.len(), 2 * dim);
        let labels = facet_labels(&c, &o);
        let mut seen_parallel = false;
        for (i, f) in o.facets.iter().enumerate() {
            for (j, g) in o.facets.iter().enumerate() {
                let anti = f.normal.iter().zip(&g.normal).all(|(a, b)| *a == -*b);
                if anti {
                    seen_parallel = true;
                    let axis = labels[i].max_axis();
                    prop_assert_eq!(opposite(labels[i], axis).unwrap(), labels[j]);
                    prop_assert!(c.facets_parallel(axis));
                }
            }
        }
        prop_assert!(seen_parallel);
        prop_assert_eq!(c.parallel_facet_pair().is_some(), o.has_parallel_facets());
    }

    #[test]
    fn opposite_is_an_involution(lower in 0u32..16, upper in 0u32..16, axis in 1usize..=4) {
        prop_assume!(lower & upper == 0);
        let l = FaceLabel::from_masks(lower, upper).unwrap();
        match opposite(l, axis) {
            Ok(m) => {
                prop_assert!(l.fixes(axis));
                prop_assert_eq!(opposite(m, axis).unwrap(), l);
                prop_assert_eq!(m.codim(), l.codim());
            }
            Err(_) => prop_assert!(!l.fixes(axis)),
        }
    }

    #[test]
    fn label_text_round_trips(lower in 0u32..64, upper in 0u32..64) {
        prop_assume!(lower & upper == 0);
        let l = FaceLabel::from_masks(lower, upper).unwrap();
        prop_assert_eq!(l.to_string().parse::<FaceLabel>().unwrap(), l);
    }
}

#[test]
fn four_cubes_obey_the_laws() {
    for p in cubes(4, 3, 60) {
        check_laws(&recognize_cube(&p).unwrap());
    }
}

#[test]
fn opposite_within_a_facet() {
    let xy = FaceLabel::new(&[1, 2], &[]).unwrap();
    assert_eq!(
        opposite(xy, 2).unwrap(),
        FaceLabel::new(&[1], &[2]).unwrap()
    );
    assert!(opposite(xy, 3).is_err());
}

#[test]
fn non_cubes_are_rejected() {
    let triangle = Polytope::from_i64s(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
    assert!(recognize_cube(&triangle).is_err());
    let octahedron = Polytope::from_i64s(&[
        &[1, 0, 0],
        &[-1, 0, 0],
        &[0, 1, 0],
        &[0, -1, 0],
        &[0, 0, 1],
        &[0, 0, -1],
    ])
    .unwrap();
    assert!(recognize_cube(&octahedron).is_err());
    // Right number of faces in each dimension is not enough on its own:
    // a pentagon has 5 vertices, a square has 4.
    let pentagon = Polytope::from_i64s(&[&[0, 0], &[2, 0], &[2, 1], &[1, 2], &[0, 1]]).unwrap();
    assert!(recognize_cube(&pentagon).is_err());
}
