//! Seeded generators for smooth cubes and prismatoids, plus negative
//! controls.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`; the same
//! parameters always give the same polytope. Instance `i` of a corpus uses
//! seed `seed + i`.
//!
//! Coordinates: before scrambling every generated polytope lies in
//! `[-K, K]^d` with `K = 2·coord_bound + 2` (planar bases stay within
//! `[0, coord_bound]`). Scrambling applies a unimodular matrix with entries
//! at most `3^scramble_rounds` and a translation in `[-coord_bound,
//! coord_bound]^d`, so outputs satisfy
//! `|x_i| <= d·3^scramble_rounds·K + coord_bound` ([`GenParams::output_bound`]).

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cubeface::{recognize_cube, CubeStructure};
use crate::error::{Error, Result};
use crate::exactlat::{random_unimodular, solve, LatticeVector, RationalPoint, UnimodularMap};
use crate::polytope::{minkowski_equivalent, Polytope};
use crate::prismatoid::detect_prismatoid;
use crate::smooth::{is_smooth, vertex_star};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub dim: usize,
    pub coord_bound: i64,
    pub scramble_rounds: u32,
    pub seed: u64,
}

impl GenParams {
    pub fn new(dim: usize, coord_bound: i64, scramble_rounds: u32, seed: u64) -> Self {
        GenParams {
            dim,
            coord_bound,
            scramble_rounds,
            seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenParams {
            seed,
            ..self.clone()
        }
    }

    /// Coordinate bound `K` before scrambling.
    pub fn raw_bound(&self) -> i64 {
        2 * self.coord_bound + 2
    }

    /// Bound on every output coordinate.
    pub fn output_bound(&self) -> BigInt {
        BigInt::from(self.dim) * BigInt::from(3u32).pow(self.scramble_rounds) * self.raw_bound()
            + self.coord_bound
    }

    fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.dim) {
            return Err(Error::Precondition(format!(
                "dimension {} not in 2..=4",
                self.dim
            )));
        }
        if self.coord_bound < 1 {
            return Err(Error::Precondition("coord_bound must be positive".into()));
        }
        Ok(())
    }
}

/// `conv{(0,0), (w0,0), (0,h), (w1,h)}`; smooth iff `h` divides `w1 - w0`.
pub fn trapezoid(w0: i64, w1: i64, h: i64) -> Result<Polytope> {
    if w0 < 1 || w1 < 1 || h < 1 || (w1 - w0) % h != 0 {
        return Err(Error::Precondition(format!(
            "trapezoid needs w0, w1, h >= 1 and h | w1 - w0 (got {w0}, {w1}, {h})"
        )));
    }
    Polytope::from_i64s(&[&[0, 0], &[w0, 0], &[0, h], &[w1, h]])
}

fn raw_trapezoid(rng: &mut ChaCha8Rng, bound: i64) -> Polytope {
    let h = rng.gen_range(1..=bound.min(4));
    let w0 = rng.gen_range(1..=bound);
    let choices: Vec<i64> = (1..=bound).filter(|w| (w - w0) % h == 0).collect();
    let w1 = choices[rng.gen_range(0..choices.len())];
    trapezoid(w0, w1, h).expect("valid parameters")
}

fn scramble_with(p: &Polytope, rng: &mut ChaCha8Rng, params: &GenParams) -> Polytope {
    let d = p.ambient_dim();
    let u = random_unimodular(d, rng.gen(), params.scramble_rounds);
    let b = params.coord_bound;
    let t: Vec<i64> = (0..d).map(|_| rng.gen_range(-b..=b)).collect();
    let map =
        UnimodularMap::new(u.matrix().clone(), LatticeVector::from_i64s(&t)).expect("unimodular");
    p.map(&map).expect("unimodular images keep dimension")
}

/// Random unimodular map and translation; `scramble_rounds = 0` gives a
/// pure translation.
pub fn scramble(p: &Polytope, params: &GenParams) -> Polytope {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    scramble_with(p, &mut rng, params)
}

fn ensure_smooth(p: &Polytope) -> Result<()> {
    match is_smooth(p)?.witness {
        None => Ok(()),
        Some(w) => Err(Error::NotSmooth(w.to_string())),
    }
}

fn cube_of(p: &Polytope) -> Result<CubeStructure> {
    recognize_cube(p).map_err(|e| Error::Precondition(e.to_string()))
}

/// A smooth 2-cube: a trapezoid with `h | (w1 - w0)`, scrambled.
pub fn gen_smooth_2cube(params: &GenParams) -> Result<CubeStructure> {
    if params.dim != 2 {
        return Err(Error::Precondition("gen_smooth_2cube needs dim = 2".into()));
    }
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let raw = raw_trapezoid(&mut rng, params.coord_bound);
    let out = scramble_with(&raw, &mut rng, params);
    ensure_smooth(&out)?;
    cube_of(&out)
}

/// Moves every facet of a simple polytope by `-1`, `0` or `+1` and keeps
/// the result if it is a lattice polytope with the same normal fan.
pub fn fan_deformation(p: &Polytope, seed: u64, attempts: usize) -> Option<Polytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..attempts).find_map(|_| deform_once(p, &mut rng))
}

fn deform_once(p: &Polytope, rng: &mut ChaCha8Rng) -> Option<Polytope> {
    if !p.is_full_dimensional() {
        return None;
    }
    let offsets: Vec<BigRational> = p
        .facets()
        .iter()
        .map(|f| &f.offset + BigRational::from_integer(BigInt::from(rng.gen_range(-1i64..=1))))
        .collect();
    let mut pts = Vec::with_capacity(p.num_vertices());
    for v in 0..p.num_vertices() {
        let fs = p.facets_at(v);
        if fs.len() != p.dim() {
            return None;
        }
        let a: Vec<Vec<BigRational>> = fs
            .iter()
            .map(|&f| {
                p.facets()[f]
                    .normal
                    .coords()
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect()
            })
            .collect();
        let b: Vec<BigRational> = fs.iter().map(|&f| offsets[f].clone()).collect();
        let x = RationalPoint::new(solve(&a, &b)?);
        if !x.is_integral() {
            return None;
        }
        pts.push(x);
    }
    let q = Polytope::from_vertices(&pts).ok()?;
    minkowski_equivalent(p, &q).then_some(q)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiftStats {
    pub attempts: usize,
    pub rejected: usize,
    /// Rejection reasons in attempt order.
    pub reasons: Vec<String>,
    /// The deformed-top search failed and a sheared or straight prism was
    /// used.
    pub fallback: bool,
}

const LIFT_BUDGET: usize = 24;

fn within(p: &Polytope, k: i64) -> bool {
    let k = BigRational::from_integer(BigInt::from(k));
    p.vertices()
        .iter()
        .all(|v| v.coords().iter().all(|c| -&k <= *c && *c <= k))
}

/// `conv(B × {0} ∪ (T + h·u) × {h})` for `T` Minkowski equivalent to `B`.
fn stack(base: &Polytope, top: &Polytope, h: i64, u: &[i64]) -> Result<Polytope> {
    let mut pts = Vec::with_capacity(base.num_vertices() + top.num_vertices());
    let lift = |v: &RationalPoint, z: i64, shift: &[i64]| {
        let mut c: Vec<BigRational> = v
            .coords()
            .iter()
            .zip(shift)
            .map(|(x, s)| x + BigRational::from_integer(BigInt::from(*s)))
            .collect();
        c.push(BigRational::from_integer(BigInt::from(z)));
        RationalPoint::new(c)
    };
    let zero = vec![0i64; u.len()];
    for v in base.vertices() {
        pts.push(lift(v, 0, &zero));
    }
    let hu: Vec<i64> = u.iter().map(|x| x * h).collect();
    for v in top.vertices() {
        pts.push(lift(v, h, &hu));
    }
    Polytope::from_vertices(&pts)
}

/// A smooth polytope one dimension up whose bottom is `base`: the top is a
/// fan deformation of the base at height `h ∈ {1, 2}`, sheared by
/// `u ∈ {-1, 0, 1}^{d-1}`. Candidates are re-verified and resampled; when
/// the budget runs out a sheared prism (straight if the shear would leave
/// `[-K, K]`) is used.
fn lift_smooth(
    base: &Polytope,
    rng: &mut ChaCha8Rng,
    k: i64,
    need_cube: bool,
) -> Result<(Polytope, LiftStats)> {
    ensure_smooth(base)?;
    let m = base.ambient_dim();
    let mut stats = LiftStats::default();
    let accept = |p: &Polytope| -> std::result::Result<(), String> {
        if !within(p, k) {
            return Err("coordinates exceed bound".into());
        }
        if need_cube && recognize_cube(p).is_err() {
            return Err("not a cube".into());
        }
        if detect_prismatoid(p).is_err() {
            return Err("not a prismatoid".into());
        }
        match is_smooth(p) {
            Ok(r) if r.smooth => Ok(()),
            Ok(r) => Err(format!("not smooth: {}", r.witness.expect("witness"))),
            Err(e) => Err(e.to_string()),
        }
    };
    for _ in 0..LIFT_BUDGET {
        stats.attempts += 1;
        let h = rng.gen_range(1..=2i64);
        let u: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..=1)).collect();
        let seed = rng.gen();
        let Some(top) = fan_deformation(base, seed, 4) else {
            stats.rejected += 1;
            stats.reasons.push("no lattice fan deformation".into());
            continue;
        };
        let cand = stack(base, &top, h, &u)?;
        match accept(&cand) {
            Ok(()) => return Ok((cand, stats)),
            Err(why) => {
                stats.rejected += 1;
                stats.reasons.push(why);
            }
        }
    }
    stats.fallback = true;
    let u: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..=1)).collect();
    for shear in [u, vec![0; m]] {
        let cand = stack(base, base, 1, &shear)?;
        if accept(&cand).is_ok() {
            return Ok((cand, stats));
        }
    }
    Err(Error::GenerationExhausted {
        attempts: stats.attempts,
        reason: stats.reasons.last().cloned().unwrap_or_default(),
    })
}

/// Lifts a smooth `(d-1)`-cube to a smooth `d`-cube (unscrambled).
pub fn gen_smooth_cube_lift(base: &CubeStructure, params: &GenParams) -> Result<CubeStructure> {
    gen_smooth_cube_lift_with_stats(base, params).map(|(c, _)| c)
}

pub fn gen_smooth_cube_lift_with_stats(
    base: &CubeStructure,
    params: &GenParams,
) -> Result<(CubeStructure, LiftStats)> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (p, stats) = lift_smooth(base.polytope(), &mut rng, params.raw_bound(), true)?;
    Ok((cube_of(&p)?, stats))
}

/// A scrambled smooth `dim`-cube, built by lifting a trapezoid.
pub fn gen_smooth_cube(params: &GenParams) -> Result<CubeStructure> {
    gen_smooth_cube_with_stats(params).map(|(c, _)| c)
}

pub fn gen_smooth_cube_with_stats(params: &GenParams) -> Result<(CubeStructure, LiftStats)> {
    params.validate()?;
    if params.dim == 2 {
        return Ok((gen_smooth_2cube(params)?, LiftStats::default()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut p = raw_trapezoid(&mut rng, params.coord_bound);
    let mut total = LiftStats::default();
    for _ in 2..params.dim {
        let (q, s) = lift_smooth(&p, &mut rng, params.raw_bound(), true)?;
        total.attempts += s.attempts;
        total.rejected += s.rejected;
        total.reasons.extend(s.reasons);
        total.fallback |= s.fallback;
        p = q;
    }
    let out = scramble_with(&p, &mut rng, params);
    ensure_smooth(&out)?;
    Ok((cube_of(&out)?, total))
}

/// Cuts the corner at vertex `v` of a smooth polygon whose two edges both
/// have lattice length at least 2, keeping it smooth.
fn cut_corner(p: &Polytope, v: usize) -> Option<Polytope> {
    let star = vertex_star(p, v);
    let base = &p.vertices()[v];
    for (w, dir) in p.neighbors(v).into_iter().zip(&star.edge_dirs) {
        if base.translate(dir) == p.vertices()[w] {
            return None;
        }
    }
    let mut pts: Vec<RationalPoint> = p
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != v)
        .map(|(_, x)| x.clone())
        .collect();
    for dir in &star.edge_dirs {
        pts.push(base.translate(dir));
    }
    Polytope::from_vertices(&pts).ok()
}

/// A smooth polygon: a trapezoid with up to two corners cut.
fn raw_smooth_polygon(rng: &mut ChaCha8Rng, bound: i64) -> Polytope {
    let mut p = raw_trapezoid(rng, bound);
    for _ in 0..rng.gen_range(0..=2) {
        let v = rng.gen_range(0..p.num_vertices());
        if let Some(q) = cut_corner(&p, v) {
            p = q;
        }
    }
    p
}

/// A scrambled smooth 3-prismatoid over a smooth polygon.
pub fn gen_smooth_prismatoid(params: &GenParams) -> Result<Polytope> {
    params.validate()?;
    if params.dim != 3 {
        return Err(Error::Precondition(
            "prismatoids are generated in dimension 3".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let base = raw_smooth_polygon(&mut rng, params.coord_bound);
    let (p, _) = lift_smooth(&base, &mut rng, params.raw_bound(), false)?;
    let out = scramble_with(&p, &mut rng, params);
    ensure_smooth(&out)?;
    detect_prismatoid(&out).map_err(|e| Error::Precondition(e.to_string()))?;
    Ok(out)
}

/// `conv{0, e1, e2, e1 + e2 + q·e3}`.
pub fn reeve_simplex(q: i64) -> Result<Polytope> {
    if q < 1 {
        return Err(Error::Precondition("q must be positive".into()));
    }
    Polytope::from_i64s(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, q]])
}

/// Instances `seed, seed + 1, ...` of [`gen_smooth_cube`].
pub fn cube_corpus(params: &GenParams, count: usize) -> Result<Vec<(GenParams, CubeStructure)>> {
    (0..count as u64)
        .map(|i| {
            let p = params.with_seed(params.seed.wrapping_add(i));
            gen_smooth_cube(&p).map(|c| (p, c))
        })
        .collect()
}
