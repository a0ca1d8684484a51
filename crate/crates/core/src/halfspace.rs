//! Exact H-representations: membership, lattice-point enumeration over an
//! integer box, and vertex search for a rational feasible point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::exactlat::{solve, to_i64, LatticeVector, RationalPoint};

/// The closed halfspace `<normal, x> <= offset` (or the hyperplane
/// `<normal, x> = offset` when used as an equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: LatticeVector,
    pub offset: BigRational,
}

impl Halfspace {
    pub fn new(normal: LatticeVector, offset: BigRational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn value(&self, p: &RationalPoint) -> BigRational {
        self.normal.dot_point(p)
    }

    pub fn satisfied_by(&self, p: &RationalPoint) -> bool {
        self.value(p) <= self.offset
    }

    pub fn tight_at(&self, p: &RationalPoint) -> bool {
        self.value(p) == self.offset
    }
}

/// Intersection of halfspaces and hyperplanes in `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceSystem {
    pub dim: usize,
    pub inequalities: Vec<Halfspace>,
    pub equations: Vec<Halfspace>,
}

/// `a . x <= b` with integer data.
struct IntConstraint {
    a: Vec<BigInt>,
    b: BigInt,
}

impl HalfspaceSystem {
    pub fn new(dim: usize, inequalities: Vec<Halfspace>, equations: Vec<Halfspace>) -> Self {
        HalfspaceSystem {
            dim,
            inequalities,
            equations,
        }
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.inequalities.iter().all(|h| h.satisfied_by(p))
            && self.equations.iter().all(|h| h.tight_at(p))
    }

    pub fn contains_lattice(&self, x: &LatticeVector) -> bool {
        let xv = x.coords();
        let val = |h: &Halfspace| -> BigInt {
            h.normal.coords().iter().zip(xv).map(|(a, b)| a * b).sum()
        };
        self.inequalities
            .iter()
            .all(|h| BigRational::from_integer(val(h)) <= h.offset)
            && self
                .equations
                .iter()
                .all(|h| BigRational::from_integer(val(h)) == h.offset)
    }

    /// Integer form of the system, `None` when an equation has no integer
    /// solutions because its offset is fractional.
    fn integer_constraints(&self) -> Option<Vec<IntConstraint>> {
        let mut out = Vec::with_capacity(self.inequalities.len() + 2 * self.equations.len());
        for h in &self.inequalities {
            out.push(IntConstraint {
                a: h.normal.coords().to_vec(),
                b: h.offset.floor().to_integer(),
            });
        }
        for h in &self.equations {
            if !h.offset.is_integer() {
                return None;
            }
            let c = h.offset.to_integer();
            out.push(IntConstraint {
                a: h.normal.coords().to_vec(),
                b: c.clone(),
            });
            out.push(IntConstraint {
                a: h.normal.coords().iter().map(|x| -x).collect(),
                b: -c,
            });
        }
        Some(out)
    }

    /// All lattice points in the box `lo ..= hi`, lexicographically sorted.
    pub fn lattice_points_in_box(
        &self,
        lo: &[BigInt],
        hi: &[BigInt],
    ) -> Result<Vec<LatticeVector>> {
        let mut out = Vec::new();
        self.scan_box(lo, hi, &mut |x| {
            out.push(LatticeVector::from_i64s(x));
            true
        })?;
        Ok(out)
    }

    /// The lexicographically first lattice point in the box, if any.
    pub fn first_lattice_point_in_box(
        &self,
        lo: &[BigInt],
        hi: &[BigInt],
    ) -> Result<Option<LatticeVector>> {
        let mut found = None;
        self.scan_box(lo, hi, &mut |x| {
            found = Some(LatticeVector::from_i64s(x));
            false
        })?;
        Ok(found)
    }

    /// Visits lattice points of the box satisfying the system in
    /// lexicographic order until `visit` returns false. Each coordinate is
    /// clamped to the range left open by the constraints once the earlier
    /// coordinates are fixed and the later ones range over the box, so the
    /// last coordinate's range is exact.
    fn scan_box(
        &self,
        lo: &[BigInt],
        hi: &[BigInt],
        visit: &mut dyn FnMut(&[i64]) -> bool,
    ) -> Result<()> {
        let d = self.dim;
        assert_eq!(lo.len(), d);
        assert_eq!(hi.len(), d);
        let Some(cons) = self.integer_constraints() else {
            return Ok(());
        };
        let lo: Vec<i64> = lo.iter().map(to_i64).collect::<Result<_>>()?;
        let hi: Vec<i64> = hi.iter().map(to_i64).collect::<Result<_>>()?;
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(());
        }
        // tail_min[k][c] = min over the box of sum_{j > k} a_j x_j
        let mut tail_min = vec![vec![BigInt::zero(); cons.len()]; d];
        for (ci, c) in cons.iter().enumerate() {
            let mut acc = BigInt::zero();
            for k in (0..d).rev() {
                tail_min[k][ci] = acc.clone();
                let a = &c.a[k];
                let lo_term = a * lo[k];
                let hi_term = a * hi[k];
                acc += if lo_term < hi_term { lo_term } else { hi_term };
            }
        }
        let mut x = vec![0i64; d];
        let partial = vec![BigInt::zero(); cons.len()];
        scan_level(0, &cons, &tail_min, &lo, &hi, &mut x, &partial, visit);
        Ok(())
    }

    /// A rational point of the system: a vertex found by trying every set of
    /// `dim` constraints as the active set. `None` iff the system is empty
    /// (for bounded systems).
    pub fn rational_point(&self) -> Option<RationalPoint> {
        let rows: Vec<&Halfspace> = self.equations.iter().chain(&self.inequalities).collect();
        let d = self.dim;
        if rows.len() < d {
            return None;
        }
        let mut found = None;
        for_each_combination(rows.len(), d, &mut |idx| {
            let a: Vec<Vec<BigRational>> = idx
                .iter()
                .map(|&i| {
                    rows[i]
                        .normal
                        .coords()
                        .iter()
                        .map(|c| BigRational::from_integer(c.clone()))
                        .collect()
                })
                .collect();
            let b: Vec<BigRational> = idx.iter().map(|&i| rows[i].offset.clone()).collect();
            if let Some(sol) = solve(&a, &b) {
                let p = RationalPoint::new(sol);
                if self.contains(&p) {
                    found = Some(p);
                    return false;
                }
            }
            true
        });
        found
    }
}

#[allow(clippy::too_many_arguments)]
fn scan_level(
    k: usize,
    cons: &[IntConstraint],
    tail_min: &[Vec<BigInt>],
    lo: &[i64],
    hi: &[i64],
    x: &mut [i64],
    partial: &[BigInt],
    visit: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    let d = lo.len();
    let mut lower = lo[k];
    let mut upper = hi[k];
    for (ci, c) in cons.iter().enumerate() {
        let a = &c.a[k];
        let slack = &c.b - &partial[ci] - &tail_min[k][ci];
        if a.is_zero() {
            if slack.is_negative() {
                return true;
            }
            continue;
        }
        if a.is_positive() {
            let bound = slack.div_floor(a);
            if bound < BigInt::from(upper) {
                upper = to_i64(&bound).unwrap_or(i64::MIN);
            }
        } else {
            // a < 0: x >= ceil(slack / a)
            let bound = -((-slack).div_floor(a));
            if bound > BigInt::from(lower) {
                lower = to_i64(&bound).unwrap_or(i64::MAX);
            }
        }
        if lower > upper {
            return true;
        }
    }
    for v in lower..=upper {
        x[k] = v;
        if k + 1 == d {
            if !visit(x) {
                return false;
            }
            continue;
        }
        let vb = BigInt::from(v);
        let next: Vec<BigInt> = cons
            .iter()
            .zip(partial)
            .map(|(c, p)| p + &c.a[k] * &vb)
            .collect();
        if !scan_level(k + 1, cons, tail_min, lo, hi, x, &next, visit) {
            return false;
        }
    }
    true
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns false.
pub(crate) fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::rat;

    fn hs(n: &[i64], c: i64) -> Halfspace {
        Halfspace::new(LatticeVector::from_i64s(n), rat(c))
    }

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn triangle_lattice_points() {
        // x >= 0, y >= 0, x + y <= 2
        let sys = HalfspaceSystem::new(
            2,
            vec![hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 2)],
            vec![],
        );
        let pts = sys
            .lattice_points_in_box(&bi(&[-5, -5]), &bi(&[5, 5]))
            .unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], LatticeVector::from_i64s(&[0, 0]));
        let first = sys
            .first_lattice_point_in_box(&bi(&[1, -5]), &bi(&[5, 5]))
            .unwrap();
        assert_eq!(first, Some(LatticeVector::from_i64s(&[1, 0])));
    }

    #[test]
    fn fractional_equation_has_no_lattice_points() {
        let eq = Halfspace::new(LatticeVector::from_i64s(&[2, 0]), rat(1));
        let sys = HalfspaceSystem::new(2, vec![], vec![eq]);
        assert!(sys
            .lattice_points_in_box(&bi(&[-3, -3]), &bi(&[3, 3]))
            .unwrap()
            .is_empty());
        let p = sys.rational_point();
        assert!(p.is_none(), "unbounded system has no vertex");
    }

    #[test]
    fn vertex_search_finds_fractional_point() {
        // 0 <= 2x <= 1, 0 <= y <= 0
        let sys = HalfspaceSystem::new(
            2,
            vec![
                hs(&[2, 0], 1),
                hs(&[-2, 0], -1),
                hs(&[0, 1], 0),
                hs(&[0, -1], 0),
            ],
            vec![],
        );
        let p = sys.rational_point().unwrap();
        assert!(!p.is_integral());
        assert!(sys
            .lattice_points_in_box(&bi(&[-2, -2]), &bi(&[2, 2]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn combinations_enumerated_in_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, &mut |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
    }
}
