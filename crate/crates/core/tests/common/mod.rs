//! Test-side oracles. Deliberately naive and independent of the library's
//! hull, face lattice and IDP code: facets come from brute force over
//! vertex subsets, in `i128`.
#![allow(dead_code)]

use std::collections::BTreeMap;

use latcube::gen::{cube_corpus, gen_smooth_prismatoid, GenParams};
use latcube::polytope::Polytope;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub type Pt = Vec<i128>;

pub fn ints(p: &Polytope) -> Vec<Pt> {
    p.vertices()
        .iter()
        .map(|v| {
            v.coords()
                .iter()
                .map(|c| {
                    assert!(c.is_integer(), "non-lattice vertex");
                    c.to_integer().to_i128().unwrap()
                })
                .collect()
        })
        .collect()
}

pub fn det(mut m: Vec<Vec<i128>>) -> i128 {
    // Bareiss elimination.
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normal to the hyperplane through `pts` (d points in R^d); zero if they
/// are affinely dependent.
fn normal_through(pts: &[&Pt]) -> Pt {
    let d = pts[0].len();
    let rows: Vec<Pt> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| (0..d).filter(|&c| c != j).map(|c| r[c]).collect())
                .collect();
            let m = if d == 1 { 1 } else { det(minor) };
            if j % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        out(cur);
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Facet `normal · x <= offset` with primitive normal and its tight points.
#[derive(Clone, Debug)]
pub struct OFacet {
    pub normal: Pt,
    pub offset: i128,
    pub tight: Vec<usize>,
}

/// Facets of the hull of full-dimensional `pts`.
pub fn facets(pts: &[Pt]) -> Vec<OFacet> {
    let d = pts[0].len();
    let mut found: BTreeMap<Pt, OFacet> = BTreeMap::new();
    subsets(pts.len(), d, 0, &mut Vec::new(), &mut |s| {
        let refs: Vec<&Pt> = s.iter().map(|&i| &pts[i]).collect();
        let mut n = normal_through(&refs);
        let g = n.iter().fold(0i128, |g, &x| g.gcd(&x));
        if g == 0 {
            return;
        }
        n.iter_mut().for_each(|x| *x /= g);
        let off = dot(&n, &pts[s[0]]);
        let vals: Vec<i128> = pts.iter().map(|p| dot(&n, p)).collect();
        let (lo, hi) = (
            vals.iter().all(|&v| v >= off),
            vals.iter().all(|&v| v <= off),
        );
        let (n, off) = match (lo, hi) {
            (_, true) => (n, off),
            (true, false) => (n.iter().map(|x| -x).collect(), -off),
            _ => return,
        };
        let tight = (0..pts.len())
            .filter(|&i| dot(&n, &pts[i]) == off)
            .collect();
        found.entry(n.clone()).or_insert(OFacet {
            normal: n,
            offset: off,
            tight,
        });
    });
    found.into_values().collect()
}

pub struct Oracle {
    pub dim: usize,
    pub verts: Vec<Pt>,
    pub facets: Vec<OFacet>,
}

impl Oracle {
    pub fn new(p: &Polytope) -> Self {
        Self::from_points(ints(p))
    }

    pub fn from_points(verts: Vec<Pt>) -> Self {
        let facets = facets(&verts);
        Oracle {
            dim: verts[0].len(),
            verts,
            facets,
        }
    }

    /// `x ∈ k·P`.
    pub fn contains_scaled(&self, x: &[i128], k: i128) -> bool {
        self.facets
            .iter()
            .all(|f| dot(&f.normal, x) <= k * f.offset)
    }

    pub fn contains(&self, x: &[i128]) -> bool {
        self.contains_scaled(x, 1)
    }

    fn bbox(&self, k: i128) -> Vec<(i128, i128)> {
        (0..self.dim)
            .map(|i| {
                let it = self.verts.iter().map(|v| v[i]);
                (k * it.clone().min().unwrap(), k * it.max().unwrap())
            })
            .collect()
    }

    pub fn lattice_points_scaled(&self, k: i128) -> Vec<Pt> {
        let mut out = Vec::new();
        box_points(&self.bbox(k), &mut Vec::new(), &mut |x| {
            if self.contains_scaled(x, k) {
                out.push(x.to_vec());
            }
        });
        out
    }

    pub fn lattice_points(&self) -> Vec<Pt> {
        self.lattice_points_scaled(1)
    }

    /// Primitive facet normals at each vertex form a lattice basis.
    pub fn is_smooth(&self) -> bool {
        (0..self.verts.len()).all(|v| {
            let at: Vec<&OFacet> = self
                .facets
                .iter()
                .filter(|f| f.tight.contains(&v))
                .collect();
            at.len() == self.dim && det(at.iter().map(|f| f.normal.clone()).collect()).abs() == 1
        })
    }

    pub fn has_parallel_facets(&self) -> bool {
        self.facets.iter().any(|f| {
            let neg: Pt = f.normal.iter().map(|x| -x).collect();
            self.facets.iter().any(|g| g.normal == neg)
        })
    }

    pub fn is_simple_cube_shape(&self) -> bool {
        self.verts.len() == 1 << self.dim && self.facets.len() == 2 * self.dim
    }
}

fn box_points(b: &[(i128, i128)], cur: &mut Vec<i128>, f: &mut dyn FnMut(&[i128])) {
    if cur.len() == b.len() {
        f(cur);
        return;
    }
    let (lo, hi) = b[cur.len()];
    for x in lo..=hi {
        cur.push(x);
        box_points(b, cur, f);
        cur.pop();
    }
}

/// IDP of `(P, Q)` straight from the definition.
pub fn idp_pair(p: &Oracle, q: &Oracle) -> bool {
    let mut sum = Vec::new();
    for a in &p.verts {
        for b in &q.verts {
            let s: Pt = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if !sum.contains(&s) {
                sum.push(s);
            }
        }
    }
    let pq = Oracle::from_points(sum);
    let lp = p.lattice_points();
    pq.lattice_points().iter().all(|x| {
        lp.iter().any(|a| {
            let r: Pt = x.iter().zip(a).map(|(s, t)| s - t).collect();
            q.contains(&r)
        })
    })
}

/// `(P, kP)` for `k` in `1..=kmax`, using `kP + P = (k+1)P`.
pub fn idp_up_to(p: &Oracle, kmax: i128) -> bool {
    let lp = p.lattice_points();
    (1..=kmax).all(|k| {
        p.lattice_points_scaled(k + 1).iter().all(|x| {
            lp.iter().any(|a| {
                let r: Pt = x.iter().zip(a).map(|(s, t)| s - t).collect();
                p.contains_scaled(&r, k)
            })
        })
    })
}

pub fn params(dim: usize, seed: u64) -> GenParams {
    GenParams::new(dim, 4, 2, seed)
}

pub fn cubes(dim: usize, count: usize, seed: u64) -> Vec<Polytope> {
    let mut p = params(dim, seed);
    if dim == 4 {
        p.coord_bound = 2;
        p.scramble_rounds = 1;
    }
    cube_corpus(&p, count)
        .unwrap()
        .into_iter()
        .map(|(_, c)| c.polytope().clone())
        .collect()
}

pub fn prismatoids(count: usize, seed: u64) -> Vec<Polytope> {
    (0..count as u64)
        .map(|i| gen_smooth_prismatoid(&params(3, seed + i)).unwrap())
        .collect()
}
