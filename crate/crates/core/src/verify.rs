//! Runs each verified statement over a corpus of instances and merges the
//! outcomes into one deterministic report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cubeface::{recognize_cube, CubeStructure};
use crate::error::{Error, Result};
use crate::exactlat::{to_i64, LatticeVector};
use crate::gen::fan_deformation;
use crate::idp::{idp_cube_pair, is_idp, is_idp_pair_bruteforce, is_idp_pair_ra};
use crate::polytope::{check_certificate, separating_facet_hyperplane, Polytope};
use crate::prismatoid::{detect_prismatoid, idp_via_slices, verify_slice_lemmas};
use crate::report::{TheoremId, TheoremReport};
use crate::smooth::is_smooth;

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub polytope: Polytope,
}

impl Instance {
    pub fn new(id: impl Into<String>, polytope: Polytope) -> Self {
        Instance {
            id: id.into(),
            polytope,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Dilation factors checked beyond the bound for single-polytope IDP.
    pub extra_k: u64,
}

/// Checks `theorem` on every instance. Instances are processed in
/// parallel; the merged report follows corpus order.
pub fn verify(theorem: TheoremId, corpus: &[Instance], opts: &VerifyOptions) -> TheoremReport {
    let parts: Vec<TheoremReport> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, inst)| verify_one(theorem, i as u64, inst, opts))
        .collect();
    let mut out = TheoremReport::new(theorem);
    for p in parts {
        out.absorb(p);
    }
    out
}

/// Companion polytopes sharing the normal fan of `p`: a translate, the
/// dilate `2p` and, when one exists, a lattice fan deformation.
pub fn companions(p: &Polytope, seed: u64) -> Vec<(String, Polytope)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t: Vec<i64> = (0..p.ambient_dim())
        .map(|_| rng.gen_range(-3..=3))
        .collect();
    let mut out = vec![
        (
            "translate".to_string(),
            p.translate(&LatticeVector::from_i64s(&t)),
        ),
        ("2P".to_string(), p.dilate(2)),
    ];
    if let Some(q) = fan_deformation(p, rng.gen(), 8) {
        out.push(("deform".to_string(), q));
    }
    out
}

/// A lattice point outside `2p`, chosen from `seed`.
pub fn point_outside_double(p: &Polytope, seed: u64) -> Result<LatticeVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = p.dilate(2).bounding_box();
    let d = p.ambient_dim();
    let axis = rng.gen_range(0..d);
    let mut a = Vec::with_capacity(d);
    for i in 0..d {
        let (l, h) = (to_i64(&lo[i])?, to_i64(&hi[i])?);
        a.push(if i == axis {
            if rng.gen() {
                h + 1 + rng.gen_range(0..3)
            } else {
                l - 1 - rng.gen_range(0..3)
            }
        } else {
            rng.gen_range(l..=h)
        });
    }
    Ok(LatticeVector::from_i64s(&a))
}

fn smooth_lattice(p: &Polytope) -> bool {
    p.is_full_dimensional() && p.is_lattice() && is_smooth(p).is_ok_and(|r| r.smooth)
}

fn smooth_cube(p: &Polytope) -> Option<CubeStructure> {
    if !smooth_lattice(p) {
        return None;
    }
    recognize_cube(p).ok()
}

fn err_text(e: Error) -> String {
    format!("error: {e}")
}

fn verify_one(
    theorem: TheoremId,
    index: u64,
    inst: &Instance,
    opts: &VerifyOptions,
) -> TheoremReport {
    let mut r = TheoremReport::new(theorem);
    let p = &inst.polytope;
    let id = inst.id.as_str();
    let skip = |r: &mut TheoremReport, why: &str| r.skip(format!("{id}: {why}"));
    match theorem {
        TheoremId::PlanarParallelSides | TheoremId::ParallelFacets => {
            if theorem == TheoremId::PlanarParallelSides && p.ambient_dim() != 2 {
                skip(&mut r, "not planar");
                return r;
            }
            let Some(c) = smooth_cube(p) else {
                skip(&mut r, "not a smooth cube");
                return r;
            };
            r.record(
                id,
                c.parallel_facet_pair()
                    .map(|_| ())
                    .ok_or_else(|| "no parallel facet pair".to_string()),
            );
        }
        TheoremId::ParallelRidgesForceFacets | TheoremId::ThreeParallelForceFourth => {
            let Some(c) = smooth_cube(p).filter(|c| c.dim() >= 3) else {
                skip(&mut r, "not a smooth cube of dimension at least 3");
                return r;
            };
            let checks = c.verify_parallel_propositions();
            let mut part = if theorem == TheoremId::ParallelRidgesForceFacets {
                checks.ridges_force_facets
            } else {
                checks.three_force_fourth
            };
            for f in &mut part.failures {
                f.instance = format!("{id}: {}", f.instance);
            }
            r.absorb(part);
        }
        TheoremId::TopBottomEquivalent | TheoremId::IntegralSlices => {
            if !smooth_lattice(p) || detect_prismatoid(p).is_err() {
                skip(&mut r, "not a smooth prismatoid");
                return r;
            }
            match verify_slice_lemmas(p) {
                Ok(checks) => {
                    let mut part = if theorem == TheoremId::TopBottomEquivalent {
                        checks.top_bottom
                    } else {
                        checks.slices
                    };
                    for f in &mut part.failures {
                        f.instance = format!("{id}: {}", f.instance);
                    }
                    r.absorb(part);
                }
                Err(e) => r.fail(id, err_text(e)),
            }
        }
        TheoremId::EquivalentPolygonsIdp => {
            if p.ambient_dim() != 2 || !p.is_full_dimensional() || !p.is_lattice() {
                skip(&mut r, "not a lattice polygon");
                return r;
            }
            for (name, q) in companions(p, index) {
                let outcome = match is_idp_pair_ra(p, &q) {
                    Ok(rep) if rep.verdict => Ok(()),
                    Ok(rep) => Err(format!("counterexamples {:?}", points(&rep))),
                    Err(e) => Err(err_text(e)),
                };
                r.record(format!("{id} with {name}"), outcome);
            }
        }
        TheoremId::SlicePairsLift | TheoremId::EquivalentPrismatoidsIdp => {
            if !smooth_lattice(p) || detect_prismatoid(p).is_err() {
                skip(&mut r, "not a smooth prismatoid");
                return r;
            }
            if theorem == TheoremId::EquivalentPrismatoidsIdp && p.dim() != 3 {
                skip(&mut r, "not 3-dimensional");
                return r;
            }
            for (name, q) in companions(p, index) {
                if !smooth_lattice(&q) {
                    skip(&mut r, &format!("companion {name} is not smooth"));
                    continue;
                }
                let outcome = if theorem == TheoremId::SlicePairsLift {
                    match idp_via_slices(p, &q) {
                        Ok(rep) if rep.verdict && rep.agrees() => Ok(()),
                        Ok(rep) => Err(format!(
                            "slices say {}, direct check says {}; failing slice pairs {:?}",
                            rep.verdict, rep.direct.verdict, rep.failing_pairs
                        )),
                        Err(e) => Err(err_text(e)),
                    }
                } else {
                    match is_idp_pair_ra(p, &q) {
                        Ok(rep) if rep.verdict => Ok(()),
                        Ok(rep) => Err(format!("counterexamples {:?}", points(&rep))),
                        Err(e) => Err(err_text(e)),
                    }
                };
                r.record(format!("{id} with {name}"), outcome);
            }
        }
        TheoremId::EquivalentCubesIdp => {
            let Some(c) = smooth_cube(p) else {
                skip(&mut r, "not a smooth cube");
                return r;
            };
            for (name, q) in companions(p, index) {
                let Some(c2) = smooth_cube(&q) else {
                    skip(&mut r, &format!("companion {name} is not a smooth cube"));
                    continue;
                };
                let outcome = match idp_cube_pair(&c, &c2) {
                    Ok(rep) if rep.verdict => Ok(()),
                    Ok(rep) => Err(format!("counterexamples {:?}", points(&rep))),
                    Err(e) => Err(err_text(e)),
                };
                r.record(format!("{id} with {name}"), outcome);
            }
        }
        TheoremId::SmoothCubesIdp => {
            if smooth_cube(p).is_none() {
                skip(&mut r, "not a smooth cube");
                return r;
            }
            let outcome = match is_idp(p, opts.extra_k) {
                Ok(rep) if rep.verdict => Ok(()),
                Ok(rep) => Err(format!(
                    "{}: counterexamples {:?}",
                    rep.pair.1,
                    points(&rep)
                )),
                Err(e) => Err(err_text(e)),
            };
            r.record(id, outcome);
        }
        TheoremId::RegionCriterionAgrees => {
            if !p.is_lattice() {
                skip(&mut r, "not a lattice polytope");
                return r;
            }
            let mut pairs = vec![("itself".to_string(), p.clone())];
            pairs.extend(companions(p, index));
            for (name, q) in pairs {
                let outcome = match (is_idp_pair_ra(p, &q), is_idp_pair_bruteforce(p, &q)) {
                    (Ok(a), Ok(b)) if a.verdict == b.verdict => Ok(()),
                    (Ok(a), Ok(b)) => Err(format!(
                        "region check says {}, definitional check says {}",
                        a.verdict, b.verdict
                    )),
                    (Err(e), _) | (_, Err(e)) => Err(err_text(e)),
                };
                r.record(format!("{id} with {name}"), outcome);
            }
        }
        TheoremId::FacetSeparation => {
            if !p.is_full_dimensional() || !p.is_lattice() {
                skip(&mut r, "not a full-dimensional lattice polytope");
                return r;
            }
            let outcome = point_outside_double(p, index).and_then(|a| {
                let q = p.negate().translate(&a);
                let cert = separating_facet_hyperplane(p, &q)?;
                if check_certificate(p, &q, &cert) {
                    Ok(())
                } else {
                    Err(Error::LemmaViolation(format!(
                        "invalid certificate for a = {a}"
                    )))
                }
            });
            r.record(id, outcome.map_err(err_text));
        }
    }
    r
}

fn points(rep: &crate::idp::IdpReport) -> Vec<String> {
    rep.counterexamples().map(|c| c.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{reeve_simplex, trapezoid};

    fn corpus() -> Vec<Instance> {
        vec![
            Instance::new("square", Polytope::unit_cube(2)),
            Instance::new("p0", trapezoid(2, 1, 1).unwrap()),
            Instance::new("cube", Polytope::unit_cube(3)),
            Instance::new("reeve2", reeve_simplex(2).unwrap()),
        ]
    }

    #[test]
    fn every_statement_runs_on_a_small_corpus() {
        let opts = VerifyOptions { extra_k: 1 };
        for t in TheoremId::ALL {
            let r = verify(t, &corpus(), &opts);
            assert!(r.is_consistent());
            assert!(r.all_passed(), "{t}: {:?}", r.failures);
            assert!(r.instances > 0 || !r.skipped.is_empty(), "{t}");
        }
    }

    #[test]
    fn reeve_fails_idp_and_is_skipped_elsewhere() {
        let c = vec![Instance::new("reeve2", reeve_simplex(2).unwrap())];
        let r = verify(TheoremId::ParallelFacets, &c, &VerifyOptions::default());
        assert_eq!(r.instances, 0);
        assert_eq!(r.skipped.len(), 1);
        let r = verify(
            TheoremId::RegionCriterionAgrees,
            &c,
            &VerifyOptions::default(),
        );
        assert!(r.all_passed());
    }

    #[test]
    fn outside_point_is_outside() {
        let p = trapezoid(3, 1, 2).unwrap();
        for seed in 0..20 {
            let a = point_outside_double(&p, seed).unwrap();
            assert!(!p.dilate(2).contains_lattice(&a));
        }
    }
}
