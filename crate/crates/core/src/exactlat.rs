//! Exact integer and rational linear algebra over the lattice `Z^d`.
//!
//! Everything here is arbitrary precision. Determinants use fraction-free
//! (Bareiss) elimination; ranks and solves use exact rational elimination.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polytope::Polytope;

/// An integer vector in `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        assert!(!coords.is_empty(), "lattice vectors need d >= 1");
        LatticeVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![BigInt::zero(); dim])
    }

    /// Standard basis vector `e_axis` (0-based axis).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![BigInt::zero(); dim];
        v[axis] = BigInt::one();
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_point(&self, p: &RationalPoint) -> BigRational {
        debug_assert_eq!(self.dim(), p.dim());
        let mut acc = BigRational::zero();
        for (a, b) in self.0.iter().zip(p.coords()) {
            if !a.is_zero() {
                acc += b * BigRational::from_integer(a.clone());
            }
        }
        acc
    }

    /// gcd of the absolute values of the coordinates.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn to_point(&self) -> RationalPoint {
        RationalPoint::from_lattice(self)
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A point with exact rational coordinates. `BigRational` keeps every
/// coordinate in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<BigRational>);

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        assert!(!coords.is_empty(), "points need d >= 1");
        RationalPoint(coords)
    }

    pub fn from_lattice(v: &LatticeVector) -> Self {
        RationalPoint(
            v.0.iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::from_lattice(&LatticeVector::from_i64s(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.is_integral()
            .then(|| LatticeVector(self.0.iter().map(|c| c.to_integer()).collect()))
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// `(D, D * self)` with `D` the common denominator.
    pub fn scaled_integral(&self) -> (BigInt, LatticeVector) {
        let d = self.denominator();
        let v = self
            .0
            .iter()
            .map(|c| (c * BigRational::from_integer(d.clone())).to_integer())
            .collect();
        (d, LatticeVector(v))
    }

    pub fn scale(&self, k: &BigRational) -> RationalPoint {
        RationalPoint(self.0.iter().map(|c| c * k).collect())
    }

    pub fn translate(&self, t: &LatticeVector) -> RationalPoint {
        RationalPoint(
            self.0
                .iter()
                .zip(t.coords())
                .map(|(c, s)| c + BigRational::from_integer(s.clone()))
                .collect(),
        )
    }

    /// Drops the last coordinate.
    pub fn drop_last(&self) -> RationalPoint {
        RationalPoint::new(self.0[..self.0.len() - 1].to_vec())
    }
}

impl Add for &RationalPoint {
    type Output = RationalPoint;
    fn add(self, rhs: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalPoint {
    type Output = RationalPoint;
    fn sub(self, rhs: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalPoint {
    type Output = RationalPoint;
    fn neg(self) -> RationalPoint {
        RationalPoint(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Returns `v / gcd(|v_1|, ..., |v_d|)`.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::NoPrimitiveDirection);
    }
    Ok(LatticeVector(v.0.iter().map(|c| c / &g).collect()))
}

/// Primitive integer vector on the ray spanned by a nonzero rational vector.
pub fn primitive_direction(v: &RationalPoint) -> Result<LatticeVector> {
    primitive(&v.scaled_integral().1)
}

/// True iff the `d` vectors form a basis of `Z^d`, i.e. `|det| = 1`.
pub fn lattice_basis_check(vs: &[LatticeVector]) -> Result<bool> {
    let d = vs
        .first()
        .map(LatticeVector::dim)
        .ok_or(Error::EmptyInput)?;
    if vs.len() != d {
        return Err(Error::WrongVectorCount {
            expected: d,
            found: vs.len(),
        });
    }
    if let Some(v) = vs.iter().find(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.dim(),
        });
    }
    Ok(IntMatrix::from_columns(vs).det().abs().is_one())
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn from_columns(cols: &[LatticeVector]) -> Self {
        let d = cols.first().map_or(0, LatticeVector::dim);
        let mut rows = vec![Vec::with_capacity(cols.len()); d];
        for v in cols {
            for (i, c) in v.coords().iter().enumerate() {
                rows[i].push(c.clone());
            }
        }
        Self::from_rows(rows)
    }

    pub fn identity(d: usize) -> Self {
        let mut m = IntMatrix {
            rows: d,
            cols: d,
            data: vec![BigInt::zero(); d * d],
        };
        for i in 0..d {
            m.data[i * d + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> LatticeVector {
        LatticeVector::new(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn column(&self, c: usize) -> LatticeVector {
        LatticeVector::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[BigInt]>::to_vec)
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut rows = vec![Vec::with_capacity(self.rows); self.cols];
        for r in 0..self.rows {
            for (c, row) in rows.iter_mut().enumerate() {
                row.push(self.get(r, c).clone());
            }
        }
        Self::from_rows(rows)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = vec![vec![BigInt::zero(); other.cols]; self.rows];
        for (i, row) in out.iter_mut().enumerate() {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell += a * other.get(k, j);
                }
            }
        }
        Self::from_rows(out)
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.dim());
        LatticeVector::new((0..self.rows).map(|r| self.row(r).dot(v)).collect())
    }

    pub fn apply_point(&self, p: &RationalPoint) -> RationalPoint {
        assert_eq!(self.cols, p.dim());
        RationalPoint::new((0..self.rows).map(|r| self.row(r).dot_point(p)).collect())
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.to_rows();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = t / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    pub fn rank(&self) -> usize {
        rank_integer(&self.to_rows())
    }

    /// Inverse of a unimodular matrix, `None` if `|det| != 1`.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if self.rows != self.cols || !self.det().abs().is_one() {
            return None;
        }
        let n = self.rows;
        let a: Vec<Vec<BigRational>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let inv = rational_inverse(&a)?;
        let rows = inv
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_integer()).collect())
            .collect();
        let out = Self::from_rows(rows);
        debug_assert_eq!(self.mul(&out), IntMatrix::identity(n));
        Some(out)
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(Signed::abs).max().unwrap_or_default()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Rank of an integer matrix. Division-free elimination with content
/// reduction after every row update.
pub fn rank_integer(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            let mut g = BigInt::zero();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &pivot_row[c] - &f * y;
                g = g.gcd(x);
            }
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Reduced row echelon form over Q. Returns the nonzero rows and the pivot
/// column of each.
pub fn rref(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Unique solution of the square system `a x = b`, `None` if singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.into_iter().map(|row| row[n].clone()).collect())
}

fn rational_inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Affine lattice map `x -> M x + t` with `M` unimodular.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    matrix: IntMatrix,
    translation: LatticeVector,
}

impl UnimodularMap {
    pub fn new(matrix: IntMatrix, translation: LatticeVector) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if translation.dim() != matrix.rows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: translation.dim(),
            });
        }
        let det = matrix.det();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular {
                det: det.to_string(),
            });
        }
        Ok(UnimodularMap {
            matrix,
            translation,
        })
    }

    pub fn linear(matrix: IntMatrix) -> Result<Self> {
        let d = matrix.rows();
        Self::new(matrix, LatticeVector::zero(d))
    }

    pub fn identity(d: usize) -> Self {
        UnimodularMap {
            matrix: IntMatrix::identity(d),
            translation: LatticeVector::zero(d),
        }
    }

    pub fn translation_by(t: LatticeVector) -> Self {
        UnimodularMap {
            matrix: IntMatrix::identity(t.dim()),
            translation: t,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &LatticeVector {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMatrix::identity(self.dim()) && self.translation.is_zero()
    }

    pub fn apply_vector(&self, v: &LatticeVector) -> LatticeVector {
        &self.matrix.apply(v) + &self.translation
    }

    pub fn apply_point(&self, p: &RationalPoint) -> RationalPoint {
        self.matrix.apply_point(p).translate(&self.translation)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            matrix: self.matrix.mul(&inner.matrix),
            translation: &self.matrix.apply(&inner.translation) + &self.translation,
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let inv = self
            .matrix
            .inverse_unimodular()
            .expect("unimodular by construction");
        let t = -&inv.apply(&self.translation);
        UnimodularMap {
            matrix: inv,
            translation: t,
        }
    }
}

/// Image of `p` under `u`.
pub fn apply_unimodular(u: &UnimodularMap, p: &Polytope) -> Result<Polytope> {
    if u.dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: u.dim(),
        });
    }
    let image: Vec<RationalPoint> = p.vertices().iter().map(|v| u.apply_point(v)).collect();
    Polytope::from_vertices_embedded(&image)
}

/// Product of `bound` random elementary shears `I + c E_ij` (`i != j`,
/// `c ∈ {-2,-1,1,2}`), drawn from ChaCha8 seeded with `seed`. Entries of the
/// result are bounded by `3^bound` in absolute value. For `d = 1` the only
/// shear-free unimodular map is the identity.
pub fn random_unimodular(d: usize, seed: u64, bound: u32) -> UnimodularMap {
    assert!(d >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = IntMatrix::identity(d).to_rows();
    if d >= 2 {
        for _ in 0..bound {
            let i = rng.gen_range(0..d);
            let mut j = rng.gen_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            let c = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
            let c = BigInt::from(c);
            let src = rows[j].clone();
            for (x, y) in rows[i].iter_mut().zip(&src) {
                *x += &c * y;
            }
        }
    }
    UnimodularMap {
        matrix: IntMatrix::from_rows(rows),
        translation: LatticeVector::zero(d),
    }
}

/// A unimodular matrix whose last row is the primitive vector `a`.
pub fn complete_to_unimodular(a: &LatticeVector) -> Result<IntMatrix> {
    let d = a.dim();
    if !a.content().is_one() {
        return Err(Error::Precondition(format!("{a} is not primitive")));
    }
    // Column operations reduce the row vector `a` to `e_d`; `cols` tracks the
    // accumulated transform M with `a M = e_d`, so `M^{-1}` has last row `a`.
    let mut w: Vec<BigInt> = a.coords().to_vec();
    let mut m = IntMatrix::identity(d);
    loop {
        let nonzero: Vec<usize> = (0..d).filter(|&i| !w[i].is_zero()).collect();
        if nonzero.len() == 1 {
            break;
        }
        let i = *nonzero
            .iter()
            .min_by_key(|&&i| w[i].abs())
            .expect("nonzero entries");
        for &j in &nonzero {
            if j == i {
                continue;
            }
            let q = w[j].div_floor(&w[i]);
            let step = &q * &w[i];
            w[j] -= step;
            for r in 0..d {
                let t = m.get(r, i) * &q;
                *m.get_mut(r, j) -= t;
            }
        }
    }
    let k = (0..d).find(|&i| !w[i].is_zero()).expect("primitive vector");
    if k != d - 1 {
        w.swap(k, d - 1);
        for r in 0..d {
            let t = m.get(r, k).clone();
            *m.get_mut(r, k) = m.get(r, d - 1).clone();
            *m.get_mut(r, d - 1) = t;
        }
    }
    if w[d - 1].is_negative() {
        for r in 0..d {
            let t = -m.get(r, d - 1);
            *m.get_mut(r, d - 1) = t;
        }
    }
    let u = m
        .inverse_unimodular()
        .expect("column operations are unimodular");
    debug_assert_eq!(&u.row(d - 1), a);
    Ok(u)
}

/// Converts a small integer to `i64`, failing for coordinates too large to
/// enumerate over.
pub(crate) fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::EnumerationOverflow)
}

/// `n` as an exact rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
