//! Exact rational linear algebra and affine subspaces.
//!
//! Everything here is exact. Subspaces are kept in a canonical form (reduced
//! row echelon directions, base point reduced against the pivots) so that two
//! equal subspaces have equal representations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rat(Ratio<i64>);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Rat {
        Rat(Ratio::new(numer, denom))
    }
    pub const fn int(n: i64) -> Rat {
        Rat(Ratio::new_raw(n, 1))
    }
    pub const fn zero() -> Rat {
        Rat::int(0)
    }
    pub const fn one() -> Rat {
        Rat::int(1)
    }
    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }
    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }
    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }
    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }
    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }
    /// Integer value, if this is an integer.
    pub fn to_int(&self) -> Option<i64> {
        self.is_integer().then(|| self.numer())
    }
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
    /// Greatest common divisor of two rationals: the largest `g` with both
    /// arguments integer multiples of `g`.
    pub fn gcd(&self, other: &Rat) -> Rat {
        if self.is_zero() {
            return other.abs();
        }
        if other.is_zero() {
            return self.abs();
        }
        let n = self.numer().gcd(&other.numer());
        let d = self.denom().lcm(&other.denom());
        Rat::new(n, d)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Rat, GeomError> {
        let bad = || GeomError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().map(Rat::int).map_err(|_| bad()),
            Some((p, q)) => {
                let p = p.trim().parse::<i64>().map_err(|_| bad())?;
                let q = q.trim().parse::<i64>().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Ok(Rat::new(p, q))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        self.0.cmp(&other.0)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $f:ident, $atr:ident, $af:ident) => {
        impl $tr for Rat {
            type Output = Rat;
            fn $f(self, rhs: Rat) -> Rat {
                Rat($tr::$f(self.0, rhs.0))
            }
        }
        impl $tr<i64> for Rat {
            type Output = Rat;
            fn $f(self, rhs: i64) -> Rat {
                Rat($tr::$f(self.0, Ratio::from_integer(rhs)))
            }
        }
        impl $atr for Rat {
            fn $af(&mut self, rhs: Rat) {
                *self = $tr::$f(*self, rhs);
            }
        }
    };
}
rat_binop!(Add, add, AddAssign, add_assign);
rat_binop!(Sub, sub, SubAssign, sub_assign);
rat_binop!(Mul, mul, MulAssign, mul_assign);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        Rat(self.0 / rhs.0)
    }
}

impl Div<i64> for Rat {
    type Output = Rat;
    fn div(self, rhs: i64) -> Rat {
        Rat(self.0 / Ratio::from_integer(rhs))
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// A column vector of rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVec(pub Vec<Rat>);

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl RatVec {
    pub fn zeros(m: usize) -> RatVec {
        RatVec(vec![Rat::zero(); m])
    }
    pub fn unit(m: usize, i: usize) -> RatVec {
        let mut v = RatVec::zeros(m);
        v.0[i] = Rat::one();
        v
    }
    pub fn from_ints(xs: &[i64]) -> RatVec {
        RatVec(xs.iter().map(|&x| Rat::int(x)).collect())
    }
    pub fn dim(&self) -> usize {
        self.0.len()
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }
    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| *a * *b).sum()
    }
    pub fn norm2(&self) -> Rat {
        self.dot(self)
    }
    pub fn scale(&self, c: Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| *x * c).collect())
    }
    /// `self + c * other`.
    pub fn axpy(&self, c: Rat, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| *a + c * *b).collect())
    }
    /// Least common denominator of the entries.
    pub fn denom_lcm(&self) -> i64 {
        self.0.iter().fold(1i64, |acc, x| acc.lcm(&x.denom()))
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| *a + *b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| *a - *b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -*a).collect())
    }
}

/// A dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> RatMat {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }
    pub fn identity(m: usize) -> RatMat {
        let mut a = RatMat::zeros(m, m);
        for i in 0..m {
            a[(i, i)] = Rat::one();
        }
        a
    }
    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(rows: &[RatVec], cols: usize) -> Result<RatMat, GeomError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(GeomError::DimensionMismatch { expected: cols, found: r.dim() });
            }
            data.extend_from_slice(&r.0);
        }
        Ok(RatMat { rows: rows.len(), cols, data })
    }
    /// The matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[RatVec], rows: usize) -> Result<RatMat, GeomError> {
        Ok(RatMat::from_rows(cols, rows)?.transpose())
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, i: usize) -> RatVec {
        RatVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }
    pub fn col(&self, j: usize) -> RatVec {
        RatVec((0..self.rows).map(|i| self[(i, j)]).collect())
    }
    pub fn row_vecs(&self) -> Vec<RatVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }
    pub fn entries(&self) -> &[Rat] {
        &self.data
    }
    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }
    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut p = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if !b.is_zero() {
                        p[(i, j)] += a * b;
                    }
                }
            }
        }
        p
    }
    pub fn mul_vec(&self, v: &RatVec) -> RatVec {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape");
        RatVec(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self[(i, j)] * v.0[j]).sum())
                .collect(),
        )
    }
    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect(),
        }
    }
    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self[(i, j)] == if i == j { Rat::one() } else { Rat::zero() })
            })
    }
    /// True iff `selfᵀ · self = I`.
    pub fn is_orthogonal(&self) -> bool {
        self.rows == self.cols && self.transpose().mul(self).is_identity()
    }

    /// Reduced row echelon form with leftmost pivots; returns the reduced
    /// matrix and the pivot columns.
    pub fn rref(&self) -> (RatMat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in c..a.cols {
                a[(r, j)] *= inv;
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)];
                    for j in c..a.cols {
                        let x = a[(r, j)];
                        a[(i, j)] -= f * x;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
    /// Basis of `{x : self·x = 0}` in canonical (reduced echelon) form.
    pub fn nullspace(&self) -> Vec<RatVec> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<RatVec> = free
            .iter()
            .map(|&f| {
                let mut v = RatVec::zeros(self.cols);
                v.0[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v.0[p] = -r[(i, f)];
                }
                v
            })
            .collect();
        canonical_basis(&basis, self.cols)
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Canonical basis (nonzero reduced echelon rows) of the span of `vs`.
pub fn canonical_basis(vs: &[RatVec], m: usize) -> Vec<RatVec> {
    if vs.is_empty() {
        return Vec::new();
    }
    let a = RatMat::from_rows(vs, m).expect("vectors share a dimension");
    let (r, pivots) = a.rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Orthogonal projection of `v` onto the span of `basis`.
pub fn project(v: &RatVec, basis: &[RatVec]) -> RatVec {
    let m = v.dim();
    if basis.is_empty() {
        return RatVec::zeros(m);
    }
    // Solve the Gram system G c = (b_i . v).
    let k = basis.len();
    let mut aug = RatMat::zeros(k, k + 1);
    for i in 0..k {
        for j in 0..k {
            aug[(i, j)] = basis[i].dot(&basis[j]);
        }
        aug[(i, k)] = basis[i].dot(v);
    }
    let (r, _) = aug.rref();
    let mut out = RatVec::zeros(m);
    for (i, b) in basis.iter().enumerate() {
        out = out.axpy(r[(i, k)], b);
    }
    out
}

/// An affine subspace `base + span(directions)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineSubspace {
    base: RatVec,
    directions: Vec<RatVec>,
}

impl fmt::Debug for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + span{:?}", self.base, self.directions)
    }
}

impl AffineSubspace {
    /// Builds and canonicalizes `base + span(directions)`.
    pub fn new(base: RatVec, directions: &[RatVec]) -> Result<AffineSubspace, GeomError> {
        let m = base.dim();
        if let Some(d) = directions.iter().find(|d| d.dim() != m) {
            return Err(GeomError::DimensionMismatch { expected: m, found: d.dim() });
        }
        let directions = canonical_basis(directions, m);
        let mut base = base;
        for d in &directions {
            let p = d.0.iter().position(|x| !x.is_zero()).expect("nonzero echelon row");
            let c = base.0[p];
            if !c.is_zero() {
                base = base.axpy(-c, d);
            }
        }
        Ok(AffineSubspace { base, directions })
    }
    pub fn point(p: RatVec) -> AffineSubspace {
        AffineSubspace { base: p, directions: Vec::new() }
    }
    pub fn whole(m: usize) -> AffineSubspace {
        AffineSubspace {
            base: RatVec::zeros(m),
            directions: (0..m).map(|i| RatVec::unit(m, i)).collect(),
        }
    }
    pub fn base(&self) -> &RatVec {
        &self.base
    }
    pub fn directions(&self) -> &[RatVec] {
        &self.directions
    }
    pub fn dim(&self) -> usize {
        self.directions.len()
    }
    pub fn ambient(&self) -> usize {
        self.base.dim()
    }
    /// Re-runs canonicalization; a no-op on values built by this module.
    pub fn recanonicalize(&self) -> AffineSubspace {
        AffineSubspace::new(self.base.clone(), &self.directions).expect("consistent dimensions")
    }
    pub fn contains(&self, x: &RatVec) -> bool {
        let diff = x - &self.base;
        let mut vs = self.directions.clone();
        vs.push(diff);
        canonical_basis(&vs, self.ambient()).len() == self.dim()
    }
    pub fn contains_origin(&self) -> bool {
        self.contains(&RatVec::zeros(self.ambient()))
    }
}

/// Solution set of `A x = b`, or `None` if inconsistent.
pub fn affine_solve(a: &RatMat, b: &RatVec) -> Result<Option<AffineSubspace>, GeomError> {
    if b.dim() != a.rows() {
        return Err(GeomError::DimensionMismatch { expected: a.rows(), found: b.dim() });
    }
    let m = a.cols();
    let mut aug = RatMat::zeros(a.rows(), m + 1);
    for i in 0..a.rows() {
        for j in 0..m {
            aug[(i, j)] = a[(i, j)];
        }
        aug[(i, m)] = b.0[i];
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&m) {
        return Ok(None);
    }
    let mut x = RatVec::zeros(m);
    for (i, &p) in pivots.iter().enumerate() {
        x.0[p] = r[(i, m)];
    }
    Ok(Some(AffineSubspace::new(x, &a.nullspace())?))
}

/// Intersection of two affine subspaces, or `None` if disjoint.
pub fn affine_intersect(
    s1: &AffineSubspace,
    s2: &AffineSubspace,
) -> Result<Option<AffineSubspace>, GeomError> {
    let m = s1.ambient();
    if s2.ambient() != m {
        return Err(GeomError::DimensionMismatch { expected: m, found: s2.ambient() });
    }
    // Unknowns (s, t) with b1 + D1 s = b2 + D2 t.
    let (k1, k2) = (s1.dim(), s2.dim());
    let mut a = RatMat::zeros(m, k1 + k2);
    for i in 0..m {
        for j in 0..k1 {
            a[(i, j)] = s1.directions[j].0[i];
        }
        for j in 0..k2 {
            a[(i, k1 + j)] = -s2.directions[j].0[i];
        }
    }
    let rhs = &s2.base - &s1.base;
    let Some(sol) = affine_solve(&a, &rhs)? else {
        return Ok(None);
    };
    let along = |coeffs: &RatVec| {
        let mut p = RatVec::zeros(m);
        for j in 0..k1 {
            p = p.axpy(coeffs.0[j], &s1.directions[j]);
        }
        p
    };
    let base = &s1.base + &along(sol.base());
    let dirs: Vec<RatVec> = sol.directions().iter().map(along).collect();
    Ok(Some(AffineSubspace::new(base, &dirs)?))
}

/// Canonical basis of the orthogonal complement of `span(us)` in `Q^m`.
pub fn orthogonal_complement(us: &[RatVec], m: usize) -> Vec<RatVec> {
    if us.is_empty() {
        return (0..m).map(|i| RatVec::unit(m, i)).collect();
    }
    RatMat::from_rows(us, m).expect("vectors share a dimension").nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn rat_format_roundtrip() {
        for s in ["0", "3", "-7/2", "1/4"] {
            assert_eq!(s.parse::<Rat>().unwrap().to_string(), s);
        }
        assert_eq!(Rat::new(6, -4).to_string(), "-3/2");
        assert!("1/0".parse::<Rat>().is_err());
        assert_eq!(Rat::new(1, 2).gcd(&Rat::new(1, 3)), Rat::new(1, 6));
        assert_eq!(Rat::new(-7, 2).floor(), -4);
    }

    #[test]
    fn solve_identity_and_zero() {
        let s = affine_solve(&RatMat::identity(2), &v(&[0, 0])).unwrap().unwrap();
        assert_eq!(s, AffineSubspace::point(v(&[0, 0])));
        let s = affine_solve(&RatMat::zeros(1, 2), &v(&[0])).unwrap().unwrap();
        assert_eq!(s.directions(), &[v(&[1, 0]), v(&[0, 1])]);
        assert!(affine_solve(&RatMat::zeros(1, 2), &v(&[1])).unwrap().is_none());
        assert!(affine_solve(&RatMat::identity(2), &v(&[1])).is_err());
    }

    #[test]
    fn solve_line() {
        let a = RatMat::from_rows(&[v(&[1, 1])], 2).unwrap();
        let s = affine_solve(&a, &v(&[1])).unwrap().unwrap();
        // Oracle: both representation points satisfy the equation.
        for p in [s.base().clone(), s.base() + &s.directions()[0]] {
            assert_eq!(a.mul_vec(&p), v(&[1]));
        }
        assert_eq!(s.dim(), 1);
        assert_eq!(s, AffineSubspace::new(v(&[0, 1]), &[v(&[-2, 2])]).unwrap());
    }

    #[test]
    fn intersect_planes() {
        let x0 = AffineSubspace::new(v(&[0, 5, 1]), &[v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let y0 = AffineSubspace::new(v(&[3, 0, 0]), &[v(&[1, 0, 0]), v(&[0, 0, 1])]).unwrap();
        let z = affine_intersect(&x0, &y0).unwrap().unwrap();
        // Oracle: lattice sample of points with x = y = 0 all lie in the result.
        for t in -3..=3 {
            assert!(z.contains(&v(&[0, 0, t])));
        }
        assert!(!z.contains(&v(&[1, 0, 0])));
        assert_eq!(z.dim(), 1);
        assert_eq!(affine_intersect(&x0, &x0).unwrap().unwrap(), x0);
        let l1 = AffineSubspace::new(v(&[0, 0]), &[v(&[1, 1])]).unwrap();
        let l2 = AffineSubspace::new(v(&[1, 0]), &[v(&[2, 2])]).unwrap();
        assert!(affine_intersect(&l1, &l2).unwrap().is_none());
    }

    #[test]
    fn complements() {
        assert_eq!(orthogonal_complement(&[], 2), vec![v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(orthogonal_complement(&[v(&[1, 0])], 2), vec![v(&[0, 1])]);
        let c = orthogonal_complement(&[v(&[1, 1, 1])], 3);
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| x.dot(&v(&[1, 1, 1])).is_zero()));
    }

    #[test]
    fn projection() {
        let p = project(&v(&[1, 2, 3]), &[v(&[1, 1, 1])]);
        assert_eq!(p, RatVec(vec![Rat::int(2); 3]));
        let q = &v(&[1, 2, 3]) - &p;
        assert!(q.dot(&v(&[1, 1, 1])).is_zero());
    }
}
