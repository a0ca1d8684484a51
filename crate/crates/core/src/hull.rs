//! Facet enumeration for full-dimensional point sets by the double
//! description method.
//!
//! The facets of `conv(V) ⊂ R^k` are the extreme rays of the cone
//! `{(c, b) : b - <c, v> >= 0 for all v in V}`. Points are inserted one at a
//! time as constraints; rays are combined only across adjacent pairs
//! (combinatorial adjacency test on zero sets). All arithmetic is integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactlat::{primitive, rank_integer, LatticeVector, RationalPoint};
use crate::faces::VertexSet;
use crate::halfspace::Halfspace;

struct Ray {
    v: Vec<BigInt>,
    zeros: VertexSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn make_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|c| c / &g).collect()
    }
}

/// Facet inequalities of the convex hull of `points`, which must affinely
/// span `R^k` (`k = points[0].dim()`). Normals are primitive and outward.
pub(crate) fn facets(points: &[RationalPoint]) -> Vec<Halfspace> {
    let k = points[0].dim();
    let n = k + 1;
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let (den, scaled) = p.scaled_integral();
            let mut r: Vec<BigInt> = scaled.coords().iter().map(|c| -c).collect();
            r.push(den);
            r
        })
        .collect();
    let m = rows.len();

    // Initial simplex cone from n independent rows.
    let mut basis: Vec<usize> = Vec::with_capacity(n);
    for i in 0..m {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if rank_integer(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == n {
                break;
            }
        }
    }
    assert_eq!(basis.len(), n, "points do not affinely span R^{k}");

    let mut processed = VertexSet::empty(m);
    for &b in &basis {
        processed.insert(b);
    }
    let mut rays: Vec<Ray> = initial_rays(&rows, &basis, m);

    for (i, row) in rows.iter().enumerate() {
        if processed.contains(i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        processed.insert(i);
        if minus.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if common.len() + 2 < n {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(j, r)| j != p && j != q && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                // vals[p] > 0 > vals[q]; the combination vanishes on row i.
                let a = &vals[p];
                let b = -&vals[q];
                let v: Vec<BigInt> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[q].v)
                    .map(|(x, y)| &b * x + a * y)
                    .collect();
                let mut zeros = common;
                zeros.insert(i);
                fresh.push(Ray {
                    v: make_primitive(v),
                    zeros,
                });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(vals) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(i);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out: Vec<Halfspace> = rays
        .into_iter()
        .map(|r| {
            let c = LatticeVector::new(r.v[..k].to_vec());
            let g = c.content();
            assert!(!g.is_zero(), "trivial ray in a pointed polytope cone");
            let normal = primitive(&c).expect("nonzero normal");
            let offset = BigRational::new(r.v[k].clone(), g);
            Halfspace::new(normal, offset)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn initial_rays(rows: &[Vec<BigInt>], basis: &[usize], m: usize) -> Vec<Ray> {
    let n = basis.len();
    let b: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|&i| {
            rows[i]
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        })
        .collect();
    // Columns of B^{-1}, scaled to primitive integers: B r_j = t e_j, t > 0.
    let mut rays = Vec::with_capacity(n);
    for j in 0..n {
        let rhs: Vec<BigRational> = (0..n)
            .map(|i| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let sol = crate::exactlat::solve(&b, &rhs).expect("independent basis rows");
        let den = sol.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let v: Vec<BigInt> = sol
            .iter()
            .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let v = make_primitive(v);
        let mut zeros = VertexSet::empty(m);
        for (i, &row) in basis.iter().enumerate() {
            if i != j {
                debug_assert!(dot(&rows[row], &v).is_zero());
                zeros.insert(row);
            }
        }
        rays.push(Ray { v, zeros });
    }
    rays
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::rat;

    fn pts(v: &[&[i64]]) -> Vec<RationalPoint> {
        v.iter().map(|c| RationalPoint::from_i64s(c)).collect()
    }

    #[test]
    fn square_facets() {
        let f = facets(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        assert_eq!(f.len(), 4);
        let normals: Vec<_> = f.iter().map(|h| h.normal.clone()).collect();
        assert!(normals.contains(&LatticeVector::from_i64s(&[-1, 0])));
        assert!(normals.contains(&LatticeVector::from_i64s(&[1, 0])));
    }

    #[test]
    fn interior_and_duplicate_points_ignored() {
        let f = facets(&pts(&[
            &[0, 0],
            &[4, 0],
            &[0, 4],
            &[1, 1],
            &[2, 2],
            &[0, 0],
            &[2, 0],
        ]));
        assert_eq!(f.len(), 3);
        assert!(f.contains(&Halfspace::new(LatticeVector::from_i64s(&[1, 1]), rat(4))));
    }

    #[test]
    fn segment_in_one_dimension() {
        let f = facets(&pts(&[&[3], &[-1], &[0]]));
        assert_eq!(
            f,
            vec![
                Halfspace::new(LatticeVector::from_i64s(&[-1]), rat(1)),
                Halfspace::new(LatticeVector::from_i64s(&[1]), rat(3)),
            ]
        );
    }

    #[test]
    fn cube_and_octahedron() {
        let mut cube = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    cube.push(RationalPoint::from_i64s(&[x, y, z]));
                }
            }
        }
        assert_eq!(facets(&cube).len(), 6);
        let oct = pts(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ]);
        assert_eq!(facets(&oct).len(), 8);
    }
}
