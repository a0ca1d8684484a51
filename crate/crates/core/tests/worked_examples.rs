mod common;

use common::{cubes, idp_pair, idp_up_to, prismatoids, Oracle};
use latcube::cubeface::{opposite, recognize_cube, FaceLabel};
use latcube::exactlat::{lattice_basis_check, LatticeVector};
use latcube::gen::trapezoid;
use latcube::idp::{idp_cube_pair, is_idp, is_idp_pair_ra};
use latcube::polytope::Polytope;
use latcube::prismatoid::{detect_prismatoid, idp_via_slices, verify_slice_lemmas};

fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64s(c)
}

#[test]
fn planar_determinant_condition() {
    // 1 - mn = ±1 with m = 1, n = 0.
    assert!(lattice_basis_check(&[lv(&[-1, 0]), lv(&[-1, -1])]).unwrap());
    assert!(lattice_basis_check(&[lv(&[1, 0]), lv(&[0, 1])]).unwrap());
    assert!(!lattice_basis_check(&[lv(&[1, 1]), lv(&[0, 2])]).unwrap());
}

#[test]
fn opposite_faces_inside_a_facet() {
    let xy = FaceLabel::new(&[1, 2], &[]).unwrap();
    assert_eq!(opposite(xy, 2).unwrap().to_string(), "1 2bar");
}

#[test]
fn polygon_pairs_are_idp() {
    let sq = Polytope::unit_cube(2);
    assert!(is_idp_pair_ra(&sq, &sq).unwrap().verdict);
    let p0 = trapezoid(2, 1, 1).unwrap();
    let r = is_idp_pair_ra(&p0, &p0.dilate(3)).unwrap();
    assert!(r.verdict);
    assert!(idp_pair(&Oracle::new(&p0), &Oracle::new(&p0.dilate(3))));
    // Same normal fan, longer parallel edges.
    let longer = trapezoid(5, 4, 1).unwrap();
    assert!(is_idp_pair_ra(&p0, &longer).unwrap().verdict);
    for p in cubes(2, 10, 5) {
        let r = is_idp(&p, 0).unwrap();
        assert!(r.verdict);
        assert_eq!(r.checked_k, vec![1]);
    }
}

#[test]
fn dilates_are_idp_from_dimension_minus_one() {
    // (P, kP) is IDP for k >= d - 1; for d = 3 that starts at k = 2, which
    // the Reeve simplex shows is sharp.
    let r = latcube::gen::reeve_simplex(2).unwrap();
    assert!(!is_idp_pair_ra(&r, &r).unwrap().verdict);
    assert!(is_idp_pair_ra(&r, &r.dilate(2)).unwrap().verdict);
    assert!(is_idp_pair_ra(&r, &r.dilate(3)).unwrap().verdict);
}

#[test]
fn generated_three_cubes() {
    for p in cubes(3, 6, 77) {
        let c = recognize_cube(&p).unwrap();
        assert!(c.parallel_facet_pair().is_some());
        assert!(
            detect_prismatoid(&p).is_ok(),
            "smooth cubes are prismatoids"
        );
        let checks = verify_slice_lemmas(&p).unwrap();
        assert!(checks.top_bottom.all_passed() && checks.slices.all_passed());
        let r = is_idp(&p, 0).unwrap();
        assert!(r.verdict);
        assert_eq!(r.checked_k, vec![1]);
        assert!(idp_up_to(&Oracle::new(&p), 1));
        let c2 = recognize_cube(&p.dilate(2)).unwrap();
        assert!(idp_cube_pair(&c, &c2).unwrap().verdict);
        let s = idp_via_slices(&p, &p.dilate(2)).unwrap();
        assert!(s.verdict && s.agrees());
    }
}

#[test]
fn prismatoids_with_themselves() {
    for p in prismatoids(5, 31) {
        let s = idp_via_slices(&p, &p).unwrap();
        assert!(s.verdict && s.agrees());
        assert!(idp_pair(&Oracle::new(&p), &Oracle::new(&p)));
    }
}
