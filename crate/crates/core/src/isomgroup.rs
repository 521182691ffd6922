//! Euclidean isometries, their basic invariants and reflection length, and
//! Coxeter elements of `Cox(X̃_n)` with axes, axial data and generator
//! families.
//!
//! Two representations coexist. [`Isometry`] uses exact rationals and is the
//! public, serializable value. [`Motion`] packs an isometry as integer
//! numerators over the fixed denominators of a [`Frame`]; interval builds run
//! on motions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactgeom::{
    affine_intersect, canonical_basis, orthogonal_complement, project, AffineSubspace, GeomError, Rat, RatMat,
    RatVec,
};
use crate::rootdata::{build_root_system, coroot, EuclideanType, RootError, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsomError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("order is not a permutation of the {0} standard generators")]
    BadOrder(usize),
    #[error("value does not fit the frame denominators ({0})")]
    Frame(String),
    #[error("coxeter axis has dimension {0}, expected 1")]
    Axis(usize),
    #[error("axial points are not equally spaced")]
    Spacing,
    #[error("no horizontal factorization found")]
    Factorization,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// An isometry `x ↦ A x + t` of `Q^m`. Equality ignores the witness word.
#[derive(Clone, Serialize, Deserialize)]
pub struct Isometry {
    pub linear: Vec<RatVec>,
    pub translate: RatVec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<GeneratorLabel>>,
}

impl PartialEq for Isometry {
    fn eq(&self, other: &Isometry) -> bool {
        self.linear == other.linear && self.translate == other.translate
    }
}
impl Eq for Isometry {}

impl std::hash::Hash for Isometry {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.linear.hash(state);
        self.translate.hash(state);
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry{{A={:?}, t={:?}}}", self.linear, self.translate)
    }
}

impl Isometry {
    pub fn new(linear: &RatMat, translate: RatVec) -> Isometry {
        Isometry { linear: linear.row_vecs(), translate, word: None }
    }
    pub fn identity(m: usize) -> Isometry {
        Isometry::new(&RatMat::identity(m), RatVec::zeros(m))
    }
    pub fn translation(v: RatVec) -> Isometry {
        Isometry::new(&RatMat::identity(v.dim()), v)
    }
    pub fn dim(&self) -> usize {
        self.translate.dim()
    }
    pub fn matrix(&self) -> RatMat {
        RatMat::from_rows(&self.linear, self.dim()).expect("square linear part")
    }
    pub fn with_word(mut self, word: Vec<GeneratorLabel>) -> Isometry {
        self.word = Some(word);
        self
    }
    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let a = self.matrix();
        let lin = a.mul(&other.matrix());
        let t = &a.mul_vec(&other.translate) + &self.translate;
        Isometry::new(&lin, t)
    }
    pub fn inverse(&self) -> Isometry {
        let at = self.matrix().transpose();
        let t = -&at.mul_vec(&self.translate);
        Isometry::new(&at, t)
    }
    pub fn pow(&self, k: i64) -> Isometry {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Isometry::identity(self.dim());
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }
    pub fn apply(&self, x: &RatVec) -> RatVec {
        &self.matrix().mul_vec(x) + &self.translate
    }
    pub fn is_orthogonal(&self) -> bool {
        self.matrix().is_orthogonal()
    }
    pub fn is_identity(&self) -> bool {
        self.is_translation() && self.translate.is_zero()
    }
    pub fn is_translation(&self) -> bool {
        self.matrix().is_identity()
    }
    /// Canonical key: row-major rational strings of `A` then `t`.
    pub fn key(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for r in &self.linear {
            parts.extend(r.0.iter().map(Rat::to_string));
        }
        parts.push("|".into());
        parts.extend(self.translate.0.iter().map(Rat::to_string));
        parts.join(",")
    }
}

/// The reflection fixing `{x : x·α = k}` pointwise.
pub fn reflection(alpha: &RatVec, k: Rat) -> Isometry {
    let m = alpha.dim();
    let c = Rat::int(2) / alpha.norm2();
    let mut a = RatMat::identity(m);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] -= c * alpha.0[i] * alpha.0[j];
        }
    }
    Isometry::new(&a, alpha.scale(c * k))
}

/// Basic invariants of an isometry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryInvariants {
    pub mov: AffineSubspace,
    pub min_set: AffineSubspace,
    pub elliptic: bool,
    pub min_translation: RatVec,
}

pub fn invariants(u: &Isometry) -> IsometryInvariants {
    let m = u.dim();
    let a = u.matrix().sub(&RatMat::identity(m));
    let cols: Vec<RatVec> = (0..m).map(|j| a.col(j)).collect();
    let mov = AffineSubspace::new(u.translate.clone(), &cols).expect("dimensions agree");
    let image = mov.directions().to_vec();
    let mu = &u.translate - &project(&u.translate, &image);
    let min_set = crate::exactgeom::affine_solve(&a, &(&mu - &u.translate))
        .expect("dimensions agree")
        .expect("min-set is nonempty");
    IsometryInvariants { mov, min_set, elliptic: mu.is_zero(), min_translation: mu }
}

/// `dim mov(u)` for elliptic `u`, `dim mov(u) + 2` otherwise.
pub fn reflection_length(u: &Isometry) -> usize {
    let inv = invariants(u);
    inv.mov.dim() + if inv.elliptic { 0 } else { 2 }
}

/// Reflection length in the affine Weyl group of `rs`. Agrees with
/// [`reflection_length`] except on hyperbolic elements whose move-set spans
/// a subspace that is not spanned by roots: there the length is
/// `2 dim U - dim mov(u)` with `U` a smallest root subspace containing
/// `mov(u)`. Root subspaces are enumerated by dimension, so this is meant
/// for small ranks.
pub fn weyl_reflection_length(u: &Isometry, rs: &RootSystem) -> usize {
    let inv = invariants(u);
    let d = inv.mov.dim();
    if inv.elliptic {
        return d;
    }
    let m = u.dim();
    let mut span = inv.mov.directions().to_vec();
    span.push(inv.mov.base().clone());
    let roots: Vec<&RatVec> = rs.positive().map(|i| rs.vector(i)).collect();
    let contains = |basis: &[RatVec], v: &[RatVec]| {
        let mut all = basis.to_vec();
        all.extend_from_slice(v);
        canonical_basis(&all, m).len() == basis.len()
    };
    let mut layer: BTreeSet<Vec<RatVec>> = BTreeSet::from([Vec::new()]);
    for k in 1..=m {
        let mut next = BTreeSet::new();
        for basis in &layer {
            for r in &roots {
                if contains(basis, std::slice::from_ref(*r)) {
                    continue;
                }
                let mut b = basis.clone();
                b.push((*r).clone());
                let b = canonical_basis(&b, m);
                if contains(&b, &span) {
                    return 2 * k - d;
                }
                next.insert(b);
            }
        }
        layer = next;
    }
    d + 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelKind {
    HRefl,
    VRefl,
    DiagTrans,
    FactTrans,
}

/// A generator of one of the euclidean groups. For reflections `root` is a
/// positive root index and `index` the level `k` of `r_{α,k}`. For diagonal
/// translations `root` indexes the translation list of the Coxeter element;
/// for factored translations it indexes the factored list and `index` is the
/// component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorLabel {
    pub kind: LabelKind,
    pub root: usize,
    pub index: i64,
    pub weight: Rat,
}

impl GeneratorLabel {
    pub fn is_reflection(&self) -> bool {
        matches!(self.kind, LabelKind::HRefl | LabelKind::VRefl)
    }
    pub fn refl(&self) -> Option<Refl> {
        self.is_reflection().then_some(Refl { root: self.root, level: self.index })
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LabelKind::HRefl => write!(f, "h[{},{}]", self.root, self.index),
            LabelKind::VRefl => write!(f, "v[{},{}]", self.root, self.index),
            LabelKind::DiagTrans => write!(f, "t[{}]", self.root),
            LabelKind::FactTrans => write!(f, "f[{},{}]", self.root, self.index),
        }
    }
}

/// The affine reflection `r_{α,k}` for a positive root index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Refl {
    pub root: usize,
    pub level: i64,
}

/// Fixed denominators for packing isometries of one group into integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub m: usize,
    pub lin_den: i64,
    pub tr_den: i64,
}

/// An isometry packed as numerators over a [`Frame`]: `m*m` linear entries
/// (row-major) followed by `m` translation entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Motion(Box<[i32]>);

impl fmt::Debug for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Motion{:?}", &self.0)
    }
}

impl Motion {
    pub fn raw(&self) -> &[i32] {
        &self.0
    }
}

fn narrow(x: i64) -> i32 {
    i32::try_from(x).expect("packed isometry entry overflows i32")
}

/// Result of analysing an elliptic motion: integer basis of the fixed
/// directions and a fixed point `num / den`.
#[derive(Debug, Clone)]
pub struct EllipticData {
    pub kernel: Vec<Vec<i64>>,
    pub point: Vec<i64>,
    pub point_den: i64,
}

impl Frame {
    pub fn new(m: usize, lin_den: i64, tr_den: i64) -> Frame {
        assert!(tr_den % lin_den == 0, "translation denominator must be a multiple");
        Frame { m, lin_den, tr_den }
    }

    pub fn identity(&self) -> Motion {
        let m = self.m;
        let mut d = vec![0i32; m * m + m];
        for i in 0..m {
            d[i * m + i] = narrow(self.lin_den);
        }
        Motion(d.into_boxed_slice())
    }

    pub fn pack(&self, u: &Isometry) -> Result<Motion, IsomError> {
        let m = self.m;
        if u.dim() != m {
            return Err(IsomError::Geom(GeomError::DimensionMismatch { expected: m, found: u.dim() }));
        }
        let mut d = Vec::with_capacity(m * m + m);
        let scale = |x: Rat, den: i64| -> Result<i32, IsomError> {
            let y = x * den;
            y.to_int().map(narrow).ok_or_else(|| IsomError::Frame(format!("{x} over {den}")))
        };
        for r in &u.linear {
            for x in &r.0 {
                d.push(scale(*x, self.lin_den)?);
            }
        }
        for x in &u.translate.0 {
            d.push(scale(*x, self.tr_den)?);
        }
        Ok(Motion(d.into_boxed_slice()))
    }

    pub fn unpack(&self, a: &Motion) -> Isometry {
        let m = self.m;
        let mut lin = RatMat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                lin[(i, j)] = Rat::new(a.0[i * m + j] as i64, self.lin_den);
            }
        }
        let t = RatVec((0..m).map(|i| Rat::new(a.0[m * m + i] as i64, self.tr_den)).collect());
        Isometry::new(&lin, t)
    }

    /// `a ∘ b`.
    pub fn mul(&self, a: &Motion, b: &Motion) -> Motion {
        let m = self.m;
        let l = self.lin_den;
        let mut d = vec![0i32; m * m + m];
        for i in 0..m {
            let arow = &a.0[i * m..i * m + m];
            for j in 0..m {
                let mut s = 0i64;
                for k in 0..m {
                    s += arow[k] as i64 * b.0[k * m + j] as i64;
                }
                debug_assert!(s % l == 0, "linear part left the frame");
                d[i * m + j] = narrow(s / l);
            }
            let mut s = 0i64;
            for k in 0..m {
                s += arow[k] as i64 * b.0[m * m + k] as i64;
            }
            debug_assert!(s % l == 0, "translation left the frame");
            d[m * m + i] = narrow(s / l + a.0[m * m + i] as i64);
        }
        Motion(d.into_boxed_slice())
    }

    pub fn inv(&self, a: &Motion) -> Motion {
        let m = self.m;
        let l = self.lin_den;
        let mut d = vec![0i32; m * m + m];
        for i in 0..m {
            for j in 0..m {
                d[i * m + j] = a.0[j * m + i];
            }
        }
        for i in 0..m {
            let mut s = 0i64;
            for k in 0..m {
                s += a.0[k * m + i] as i64 * a.0[m * m + k] as i64;
            }
            d[m * m + i] = narrow(-s / l);
        }
        Motion(d.into_boxed_slice())
    }

    pub fn is_translation(&self, a: &Motion) -> bool {
        let m = self.m;
        (0..m).all(|i| {
            (0..m).all(|j| a.0[i * m + j] as i64 == if i == j { self.lin_den } else { 0 })
        })
    }

    /// Translation part as rationals.
    pub fn translation_of(&self, a: &Motion) -> RatVec {
        let m = self.m;
        RatVec((0..m).map(|i| Rat::new(a.0[m * m + i] as i64, self.tr_den)).collect())
    }

    /// `A d == d` for an integer vector `d`.
    pub fn fixes_direction(&self, a: &Motion, d: &[i64]) -> bool {
        let m = self.m;
        (0..m).all(|i| {
            let s: i64 = (0..m).map(|k| a.0[i * m + k] as i64 * d[k]).sum();
            s == self.lin_den * d[i]
        })
    }

    /// `(rank(A - I), elliptic)`.
    pub fn rank_and_type(&self, a: &Motion) -> (usize, bool) {
        let m = self.m;
        // Column scaling keeps the pivot structure, so denominators are dropped.
        let cols = m + 1;
        let mut mat = vec![0i128; m * cols];
        for i in 0..m {
            for j in 0..m {
                let mut x = a.0[i * m + j] as i128;
                if i == j {
                    x -= self.lin_den as i128;
                }
                mat[i * cols + j] = x;
            }
            mat[i * cols + m] = a.0[m * m + i] as i128;
        }
        let pivots = bareiss_pivots(&mut mat, m, cols);
        let rank = pivots.iter().filter(|&&c| c < m).count();
        (rank, !pivots.contains(&m))
    }

    /// Reflection length in the group generated by all reflections.
    pub fn length(&self, a: &Motion) -> usize {
        let (r, ell) = self.rank_and_type(a);
        r + if ell { 0 } else { 2 }
    }

    pub fn is_elliptic(&self, a: &Motion) -> bool {
        self.rank_and_type(a).1
    }

    /// Fixed directions and a fixed point, or `None` if `a` is hyperbolic.
    pub fn elliptic_data(&self, a: &Motion) -> Option<EllipticData> {
        let m = self.m;
        let mut aug = RatMat::zeros(m, m + 1);
        for i in 0..m {
            for j in 0..m {
                let mut x = a.0[i * m + j] as i64;
                if i == j {
                    x -= self.lin_den;
                }
                aug[(i, j)] = Rat::new(x, self.lin_den);
            }
            aug[(i, m)] = Rat::new(-(a.0[m * m + i] as i64), self.tr_den);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&m) {
            return None;
        }
        let mut point = RatVec::zeros(m);
        for (i, &p) in pivots.iter().enumerate() {
            point.0[p] = r[(i, m)];
        }
        let kernel = (0..m)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = RatVec::zeros(m);
                v.0[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v.0[p] = -r[(i, f)];
                }
                integer_vector(&v).0
            })
            .collect();
        let (point, point_den) = integer_vector(&point);
        Some(EllipticData { kernel, point, point_den })
    }
}

/// Scales a rational vector to integers: returns `(num, den)` with
/// `v = num / den`.
pub fn integer_vector(v: &RatVec) -> (Vec<i64>, i64) {
    let den = v.denom_lcm();
    (v.0.iter().map(|x| (*x * den).to_int().expect("common denominator")).collect(), den)
}

/// Fraction-free elimination; returns pivot columns.
fn bareiss_pivots(mat: &mut [i128], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| mat[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                mat.swap(p * cols + j, r * cols + j);
            }
        }
        let piv = mat[r * cols + c];
        for i in r + 1..rows {
            let f = mat[i * cols + c];
            for j in c..cols {
                mat[i * cols + j] = (piv * mat[i * cols + j] - f * mat[r * cols + j]) / prev;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Packing data shared by every group built over one root system: per-root
/// linear parts and coroot translations as numerators.
#[derive(Debug, Clone)]
pub struct RootFrame {
    pub frame: Frame,
    /// Positive roots scaled to integers by `root_den`.
    pub roots_int: Vec<Vec<i64>>,
    pub root_den: i64,
    refl_lin: Vec<Vec<i32>>,
    coroot_tr: Vec<Vec<i64>>,
}

impl RootFrame {
    /// `extra_den` multiplies the translation denominator, e.g. for factored
    /// translations.
    pub fn new(rs: &RootSystem, extra_den: i64) -> RootFrame {
        let m = rs.ambient_dim;
        let pos: Vec<&RatVec> = rs.positive().map(|i| rs.vector(i)).collect();
        let mut lin_den = 1i64;
        let mut cor_den = 1i64;
        for a in &pos {
            let r = reflection(a, Rat::zero());
            for row in &r.linear {
                lin_den = lin_den.lcm(&row.denom_lcm());
            }
            cor_den = cor_den.lcm(&coroot(a).denom_lcm());
        }
        let frame = Frame::new(m, lin_den, lin_den * cor_den * extra_den);
        let root_den = pos.iter().fold(1i64, |d, a| d.lcm(&a.denom_lcm()));
        let roots_int =
            pos.iter().map(|a| a.0.iter().map(|x| (*x * root_den).numer()).collect()).collect();
        let refl_lin = pos
            .iter()
            .map(|a| {
                let r = reflection(a, Rat::zero());
                frame.pack(&r).expect("reflection fits").0[..m * m].to_vec()
            })
            .collect();
        let coroot_tr = pos
            .iter()
            .map(|a| {
                coroot(a).0.iter().map(|x| (*x * frame.tr_den).to_int().expect("fits")).collect()
            })
            .collect();
        RootFrame { frame, roots_int, root_den, refl_lin, coroot_tr }
    }

    pub fn reflection(&self, r: Refl) -> Motion {
        let m = self.frame.m;
        let mut d = Vec::with_capacity(m * m + m);
        d.extend_from_slice(&self.refl_lin[r.root]);
        d.extend(self.coroot_tr[r.root].iter().map(|&c| narrow(c * r.level)));
        Motion(d.into_boxed_slice())
    }

    /// Reflections `r_{α,k}` (α a root of the system) lying below the
    /// elliptic motion `a`: hyperplane through the fixed set, root in the
    /// move-set.
    pub fn reflections_below_elliptic(&self, data: &EllipticData) -> Vec<Refl> {
        let mut out = Vec::new();
        for (i, a) in self.roots_int.iter().enumerate() {
            if data.kernel.iter().all(|k| dot_i(k, a) == 0) {
                let num = dot_i(&data.point, a);
                let den = self.root_den * data.point_den;
                if num % den == 0 {
                    out.push(Refl { root: i, level: num / den });
                }
            }
        }
        out
    }

    /// Recovers the reflection label of a motion that is a reflection of the
    /// system, if it is one.
    pub fn as_reflection(&self, a: &Motion) -> Option<Refl> {
        let m = self.frame.m;
        let i = self.refl_lin.iter().position(|l| l[..] == a.0[..m * m])?;
        let t = &a.0[m * m..];
        let c = &self.coroot_tr[i];
        let j = c.iter().position(|&x| x != 0)?;
        let level = t[j] as i64 / c[j];
        (0..m).all(|k| t[k] as i64 == c[k] * level).then_some(Refl { root: i, level })
    }
}

fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coarse-structure row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Row {
    Bottom,
    Middle,
    Top,
}

/// Coarse cell of an interval element, with the axial phase of middle-row
/// elements (the orbit coordinate under conjugation by `w^p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: Row,
    pub box_index: usize,
    pub phase: Option<Rat>,
}

/// A Coxeter element of `Cox(X̃_n)` with its axial data.
#[derive(Debug, Clone)]
pub struct CoxeterElement {
    pub etype: EuclideanType,
    pub rs: RootSystem,
    pub rf: RootFrame,
    /// Generator numbers: `0` is `r_{θ,1}`, `i >= 1` is `r_{α_i,0}`.
    pub simple_order: Vec<usize>,
    pub w: Isometry,
    pub w_motion: Motion,
    pub axis: AffineSubspace,
    /// The translation vector `μ` of `w` along its axis.
    pub axis_direction: RatVec,
    pub period_p: usize,
    /// Translation vector of `w^p`.
    pub tau: RatVec,
    /// Axial point `x_0`; `x_i = x_0 + i·spacing·μ`.
    pub x0: RatVec,
    pub spacing: Rat,
    /// Number of axial indices per period (`w^p` shifts `x_i` to `x_{i+P}`).
    pub index_period: i64,
    /// Window multiplier `c`: families are materialized for axial indices in
    /// `[-c·P, c·P]`.
    pub window: i64,
    /// Positive roots orthogonal to the axis.
    pub horizontal_roots: Vec<usize>,
    pub r_h: Vec<Refl>,
    pub r_v: Vec<Refl>,
    /// Pure translations below `w`.
    pub translations: Vec<RatVec>,
    mu_int: Vec<i64>,
}

/// Standard generator `s` (`0` = extending).
pub fn standard_generator(rs: &RootSystem, s: usize) -> (usize, i64) {
    if s == 0 {
        (rs.highest, 1)
    } else {
        (rs.simple[s - 1], 0)
    }
}

/// Product order realizing the bigon `(p,q)` on the cycle of `Ã_n`.
pub fn bigon_order(n: usize, p: usize, q: usize) -> Vec<usize> {
    assert_eq!(p + q, n + 1);
    let mut keyed: Vec<(Rat, usize)> = (0..=n)
        .map(|j| {
            let pos = if j <= p {
                Rat::int(j as i64)
            } else {
                Rat::int(p as i64) - Rat::new((j - p) as i64, (n - p + 1) as i64)
            };
            (pos, j)
        })
        .collect();
    keyed.sort();
    keyed.into_iter().map(|(_, j)| j).collect()
}

/// Default generator order for a type: extending reflection first, except
/// type A where the bigon fixes the order.
pub fn default_order(t: &EuclideanType) -> Vec<usize> {
    match t.bigon {
        Some((p, q)) => bigon_order(t.rank, p, q),
        None => (0..=t.rank).collect(),
    }
}

impl CoxeterElement {
    pub fn new(t: &EuclideanType) -> Result<CoxeterElement, IsomError> {
        CoxeterElement::with_order(t, &default_order(t), 2)
    }

    pub fn with_order(
        t: &EuclideanType,
        order: &[usize],
        window: i64,
    ) -> Result<CoxeterElement, IsomError> {
        let rs = build_root_system(t)?;
        let n = t.rank;
        let mut seen: Vec<usize> = order.to_vec();
        seen.sort_unstable();
        if seen != (0..=n).collect::<Vec<_>>() {
            return Err(IsomError::BadOrder(n + 1));
        }
        let m = rs.ambient_dim;
        let rf = RootFrame::new(&rs, 1);
        let mut w = Isometry::identity(m);
        let mut word = Vec::new();
        for &s in order {
            let (root, level) = standard_generator(&rs, s);
            w = w.compose(&reflection(rs.vector(root), Rat::int(level)));
            word.push(GeneratorLabel {
                kind: LabelKind::HRefl,
                root,
                index: level,
                weight: Rat::one(),
            });
        }
        let w = w.with_word(word);
        let w_motion = rf.frame.pack(&w)?;
        let inv = invariants(&w);
        let span = AffineSubspace::new(RatVec::zeros(m), &rs.span_basis())?;
        let axis = affine_intersect(&inv.min_set, &span)?.ok_or(IsomError::Axis(0))?;
        if axis.dim() != 1 {
            return Err(IsomError::Axis(axis.dim()));
        }
        let mu = inv.min_translation.clone();
        let mut p = 1;
        let mut wp = w.clone();
        while !wp.is_translation() {
            wp = wp.compose(&w);
            p += 1;
        }
        let tau = wp.translate.clone();
        debug_assert_eq!(tau, mu.scale(Rat::int(p as i64)));
        let a = axis.base().clone();

        // Crossings of vertical hyperplanes with the axis, parametrized by
        // s in x = a + s μ, over one period s ∈ [0, p).
        let mut crossings: BTreeSet<Rat> = BTreeSet::new();
        for i in rs.positive() {
            let al = rs.vector(i);
            let d = mu.dot(al);
            if d.is_zero() {
                continue;
            }
            let c = a.dot(al);
            // s = (k - c)/d in [0, p)  <=>  k between c and c + p d.
            let (lo, hi) = if d.is_positive() {
                (c, c + d * p as i64)
            } else {
                (c + d * p as i64, c)
            };
            for k in lo.ceil()..=hi.floor() {
                let s = (Rat::int(k) - c) / d;
                if s >= Rat::zero() && s < Rat::int(p as i64) {
                    crossings.insert(s);
                }
            }
        }
        let cs: Vec<Rat> = crossings.into_iter().collect();
        let count = cs.len() as i64;
        let spacing = Rat::int(p as i64) / count;
        if cs.iter().enumerate().any(|(i, s)| *s != cs[0] + spacing * i as i64) {
            return Err(IsomError::Spacing);
        }
        let x0 = a.axpy(cs[0], &mu);
        let horizontal_roots: Vec<usize> =
            rs.positive().filter(|&i| mu.dot(rs.vector(i)).is_zero()).collect();
        let (mu_num, _) = integer_vector(&mu);
        let mut cox = CoxeterElement {
            etype: *t,
            rs,
            rf,
            simple_order: order.to_vec(),
            w,
            w_motion,
            axis,
            axis_direction: mu,
            period_p: p,
            tau,
            x0,
            spacing,
            index_period: count,
            window,
            horizontal_roots,
            r_h: Vec::new(),
            r_v: Vec::new(),
            translations: Vec::new(),
            mu_int: mu_num,
        };
        cox.r_h = cox.compute_r_h();
        cox.r_v = cox.vertical_reflections_in(-window * count, window * count);
        cox.translations = cox.compute_translations();
        Ok(cox)
    }

    pub fn rank(&self) -> usize {
        self.etype.rank
    }

    /// The same element packed over a frame whose translation denominator is
    /// multiplied by `extra_den`.
    pub fn reframed(&self, extra_den: i64) -> CoxeterElement {
        let mut out = self.clone();
        out.rf = RootFrame::new(&self.rs, extra_den);
        out.w_motion = out.rf.frame.pack(&self.w).expect("w fits a finer frame");
        out
    }
    pub fn frame(&self) -> &Frame {
        &self.rf.frame
    }
    pub fn ambient(&self) -> usize {
        self.rs.ambient_dim
    }
    pub fn is_horizontal_root(&self, root: usize) -> bool {
        self.axis_direction.dot(self.rs.vector(root)).is_zero()
    }

    pub fn refl_isometry(&self, r: Refl) -> Isometry {
        reflection(self.rs.vector(r.root), Rat::int(r.level))
    }

    pub fn label_of(&self, r: Refl) -> GeneratorLabel {
        GeneratorLabel {
            kind: if self.is_horizontal_root(r.root) { LabelKind::HRefl } else { LabelKind::VRefl },
            root: r.root,
            index: r.level,
            weight: Rat::one(),
        }
    }

    /// Axial parameter `s` (in units of `spacing`, relative to `x_0`) where
    /// the hyperplane of a vertical reflection meets the axis.
    pub fn axial_index(&self, r: Refl) -> Option<i64> {
        let al = self.rs.vector(r.root);
        let d = self.axis_direction.dot(al);
        if d.is_zero() {
            return None;
        }
        let s = (Rat::int(r.level) - self.x0.dot(al)) / d;
        let i = s / self.spacing;
        Some(i.to_int().expect("crossings lie on axial points"))
    }

    /// Axial point `x_i`.
    pub fn axial_point(&self, i: i64) -> RatVec {
        self.x0.axpy(self.spacing * i, &self.axis_direction)
    }

    /// All vertical reflections whose hyperplane meets the axis at `x_i` with
    /// `lo <= i <= hi`.
    pub fn vertical_reflections_in(&self, lo: i64, hi: i64) -> Vec<Refl> {
        let mut out = Vec::new();
        for i in self.rs.positive() {
            let al = self.rs.vector(i);
            let d = self.axis_direction.dot(al);
            if d.is_zero() {
                continue;
            }
            let c = self.x0.dot(al);
            let k1 = c + d * self.spacing * lo;
            let k2 = c + d * self.spacing * hi;
            let (a, b) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
            for k in a.ceil()..=b.floor() {
                out.push(Refl { root: i, level: k });
            }
        }
        out.sort_by_key(|r| (self.axial_index(*r), *r));
        out
    }

    /// Vertices of the alcove containing the point `x` (which must lie on no
    /// hyperplane).
    pub fn alcove_vertices(&self, x: &RatVec) -> Vec<RatVec> {
        let rs = &self.rs;
        let m = rs.ambient_dim;
        // Shift by a coroot-lattice translation to land near the origin.
        let simple = rs.simple_vectors();
        let coroots: Vec<RatVec> = simple.iter().map(coroot).collect();
        let shift = lattice_round(x, &coroots, &simple);
        let mut p = x - &shift;
        let theta = rs.highest_root().vector.clone();
        let mut word: Vec<Isometry> = Vec::new();
        loop {
            if let Some(al) = simple.iter().find(|al| p.dot(al).is_negative()) {
                let r = reflection(al, Rat::zero());
                p = r.apply(&p);
                word.push(r);
            } else if p.dot(&theta) > Rat::one() {
                let r = reflection(&theta, Rat::one());
                p = r.apply(&p);
                word.push(r);
            } else {
                break;
            }
        }
        let mut verts = fundamental_alcove_vertices(rs);
        for r in word.iter().rev() {
            verts = verts.iter().map(|v| r.apply(v)).collect();
        }
        let _ = m;
        verts.iter().map(|v| v + &shift).collect()
    }

    /// Axial vertices of the segments `(x_i, x_{i+1})` for `lo <= i < hi`.
    pub fn axial_vertices(&self, lo: i64, hi: i64) -> Vec<RatVec> {
        let mut out: BTreeSet<RatVec> = BTreeSet::new();
        for i in lo..hi {
            let mid = self.x0.axpy(self.spacing * (Rat::int(2 * i + 1) / 2), &self.axis_direction);
            out.extend(self.alcove_vertices(&mid));
        }
        out.into_iter().collect()
    }

    /// Axial vertices over the materialized window.
    pub fn window_axial_vertices(&self) -> Vec<RatVec> {
        let c = self.window * self.index_period;
        self.axial_vertices(-c, c)
    }

    /// Reflections (of the root system) fixing some vertex in `verts`.
    pub fn reflections_fixing(&self, verts: &[RatVec]) -> BTreeSet<Refl> {
        let mut out = BTreeSet::new();
        for v in verts {
            for i in self.rs.positive() {
                if let Some(k) = v.dot(self.rs.vector(i)).to_int() {
                    out.insert(Refl { root: i, level: k });
                }
            }
        }
        out
    }

    fn compute_r_h(&self) -> Vec<Refl> {
        let verts = self.axial_vertices(0, self.index_period);
        self.reflections_fixing(&verts)
            .into_iter()
            .filter(|r| self.is_horizontal_root(r.root))
            .collect()
    }

    fn compute_translations(&self) -> Vec<RatVec> {
        let frame = self.frame();
        let n = self.rank();
        let mut out = BTreeSet::new();
        for i in 0..self.rs.roots.len() {
            let cv = coroot(self.rs.vector(i));
            for j in 1..=3 {
                let v = cv.scale(Rat::int(j));
                let Ok(t) = frame.pack(&Isometry::translation(v.clone())) else { continue };
                let rest = frame.mul(&frame.inv(&t), &self.w_motion);
                let (r, ell) = frame.rank_and_type(&rest);
                if ell && r + 1 == n {
                    out.insert(v);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn translation_motion(&self, i: usize) -> Motion {
        self.frame()
            .pack(&Isometry::translation(self.translations[i].clone()))
            .expect("translations fit the frame")
    }

    /// Horizontal elements fix the axis direction.
    pub fn fixes_axis_direction(&self, a: &Motion) -> bool {
        self.frame().fixes_direction(a, &self.mu_int)
    }

    /// Axial phase of a motion in units of the period: `s` with conjugation by
    /// `w^p` adding one. `None` when the linear part fixes `τ`.
    pub fn phase(&self, a: &Motion) -> Option<Rat> {
        let u = self.frame().unpack(a);
        let am = u.matrix();
        let it = &self.tau - &am.mul_vec(&self.tau);
        if it.is_zero() {
            return None;
        }
        let b = &u.translate + &(&am.mul_vec(&self.x0) - &self.x0);
        Some(b.dot(&it) / it.norm2())
    }

    /// Coarse cell of `u` given its complement `v = u⁻¹ w`.
    pub fn classify(&self, u: &Motion, v: &Motion) -> Option<Cell> {
        let f = self.frame();
        let (ru, eu) = f.rank_and_type(u);
        let (_, ev) = f.rank_and_type(v);
        let hu = self.fixes_axis_direction(u);
        let hv = self.fixes_axis_direction(v);
        match (eu, ev) {
            (true, false) if hu => Some(Cell { row: Row::Bottom, box_index: ru, phase: None }),
            (false, true) if hv => Some(Cell { row: Row::Top, box_index: ru, phase: None }),
            (true, true) if !hu && !hv => Some(Cell {
                row: Row::Middle,
                box_index: ru - 1,
                phase: self.phase(u),
            }),
            _ => None,
        }
    }

    /// Generators scanned when the remaining element is hyperbolic:
    /// `R_H ∪ R_V` over the window.
    pub fn window_reflections(&self) -> Vec<Refl> {
        let mut v = self.r_h.clone();
        v.extend(self.r_v.iter().copied());
        v
    }

    /// `w = t · (product of hword)` with `t` a pure translation below `w` and
    /// `hword` a list of `n-1` horizontal reflections.
    pub fn horizontal_factorization(&self) -> Result<(Isometry, Vec<Refl>), IsomError> {
        let theta = coroot(&self.rs.highest_root().vector);
        let pick = self
            .translations
            .iter()
            .find(|t| **t == theta)
            .or(self.translations.first())
            .ok_or(IsomError::Factorization)?
            .clone();
        let t = Isometry::translation(pick);
        let f = self.frame();
        let wh = f.mul(&f.pack(&t.inverse())?, &self.w_motion);
        let mut word = Vec::new();
        if !self.peel(&wh, self.rank() - 1, &mut word) {
            return Err(IsomError::Factorization);
        }
        Ok((t, word))
    }

    /// Depth-first factorization of an elliptic motion into `len` reflections
    /// of the root system.
    fn peel(&self, v: &Motion, len: usize, word: &mut Vec<Refl>) -> bool {
        let f = self.frame();
        if len == 0 {
            return *v == f.identity();
        }
        let Some(data) = f.elliptic_data(v) else { return false };
        for r in self.rf.reflections_below_elliptic(&data) {
            let rest = f.mul(&self.rf.reflection(r), v);
            if f.length(&rest) != len - 1 {
                continue;
            }
            word.push(r);
            if self.peel(&rest, len - 1, word) {
                return true;
            }
            word.pop();
        }
        false
    }

    /// Checks the convexity property for a vertical reflection `r` and a
    /// root `alpha` (any root index) with `α·μ > 0 > r(α)·μ`.
    pub fn convexity_check(&self, r: Refl, alpha: usize) -> Result<bool, IsomError> {
        let al = self.rs.vector(alpha).clone();
        let ral = self.refl_isometry(r).matrix().mul_vec(&al);
        if !(al.dot(&self.axis_direction).is_positive()
            && ral.dot(&self.axis_direction).is_negative())
        {
            return Err(IsomError::Precondition("α·μ > 0 > r(α)·μ fails".into()));
        }
        let hal = self.rs.vector(r.root);
        let k = Rat::int(r.level);
        let idx = self.axial_index(r).ok_or_else(|| {
            IsomError::Precondition("reflection is horizontal".into())
        })?;
        let span = self.index_period.max(4);
        let verts: Vec<RatVec> = self
            .axial_vertices(idx - span, idx + span)
            .into_iter()
            .filter(|v| v.dot(hal) == k)
            .collect();
        if verts.is_empty() {
            return Err(IsomError::Precondition("hyperplane holds no axial vertex".into()));
        }
        let vals: Vec<Rat> = verts.iter().map(|v| v.dot(&al)).collect();
        let lo = *vals.iter().min().expect("nonempty");
        let hi = *vals.iter().max().expect("nonempty");
        Ok(Rat::int(lo.floor()) + Rat::one() >= hi)
    }

    /// Conjugation by `w^{jp}` (a pure translation by `jτ`).
    pub fn shift(&self, a: &Motion, j: i64) -> Motion {
        let f = self.frame();
        let t = f.pack(&Isometry::translation(self.tau.scale(Rat::int(j)))).expect("fits");
        f.mul(&f.mul(&t, a), &f.inv(&t))
    }

    /// Reflection `w^{jp} r w^{-jp}`.
    pub fn shift_refl(&self, r: Refl, j: i64) -> Refl {
        let d = self.tau.dot(self.rs.vector(r.root)) * j;
        Refl { root: r.root, level: r.level + d.to_int().expect("integral shift") }
    }
}

/// Nearest-below coroot-lattice point: `Σ floor(c_i) α_i∨` where
/// `x = Σ c_i α_i∨ + (component outside the span)`.
fn lattice_round(x: &RatVec, coroots: &[RatVec], simple: &[RatVec]) -> RatVec {
    // c_i = ω_i · x with ω the dual basis; solve via the pairing matrix.
    let n = coroots.len();
    let mut aug = RatMat::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = simple[i].dot(&coroots[j]);
        }
        aug[(i, n)] = simple[i].dot(x);
    }
    let (r, _) = aug.rref();
    let mut out = RatVec::zeros(x.dim());
    for (j, c) in coroots.iter().enumerate() {
        out = out.axpy(Rat::int(r[(j, n)].floor()), c);
    }
    out
}

/// Vertices of `{x ∈ span : x·α_i >= 0, x·θ <= 1}`.
pub fn fundamental_alcove_vertices(rs: &RootSystem) -> Vec<RatVec> {
    let m = rs.ambient_dim;
    let n = rs.rank;
    let simple = rs.simple_vectors();
    let theta = rs.highest_root().vector.clone();
    let perp = orthogonal_complement(&simple, m);
    let mut out = vec![RatVec::zeros(m)];
    for i in 0..n {
        let mut rows: Vec<RatVec> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        for (j, s) in simple.iter().enumerate() {
            if j != i {
                rows.push(s.clone());
                rhs.push(Rat::zero());
            }
        }
        rows.push(theta.clone());
        rhs.push(Rat::one());
        for q in &perp {
            rows.push(q.clone());
            rhs.push(Rat::zero());
        }
        let a = RatMat::from_rows(&rows, m).expect("dimensions");
        let sol = crate::exactgeom::affine_solve(&a, &RatVec(rhs))
            .expect("dimensions")
            .expect("vertex exists");
        out.push(sol.base().clone());
    }
    out
}

/// Helper for callers that enumerate elements by BFS: all reflections with
/// positive root and `|level| <= k`.
pub fn reflections_up_to_level(rs: &RootSystem, k: i64) -> Vec<Refl> {
    let mut out = Vec::new();
    for root in rs.positive() {
        for level in -k..=k {
            out.push(Refl { root, level });
        }
    }
    out
}

/// Groups reflections by root for display.
pub fn group_by_root(rs: &[Refl]) -> BTreeMap<usize, Vec<i64>> {
    let mut out: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for r in rs {
        out.entry(r.root).or_default().push(r.level);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn reflections_basic() {
        let r = reflection(&v(&[1, 0]), Rat::zero());
        assert_eq!(r.linear, vec![v(&[-1, 0]), v(&[0, 1])]);
        assert!(r.translate.is_zero());
        let a = v(&[2, -1, -1]);
        let r1 = reflection(&a, Rat::one());
        let r0 = reflection(&a, Rat::zero());
        assert!(r1.compose(&r1).is_identity());
        assert_eq!(r1.compose(&r0), Isometry::translation(coroot(&a)));
        assert_eq!(reflection_length(&r1), 1);
        assert_eq!(reflection_length(&Isometry::identity(3)), 0);
    }

    #[test]
    fn invariants_of_basic_isometries() {
        let id = invariants(&Isometry::identity(2));
        assert!(id.elliptic);
        assert_eq!(id.mov.dim(), 0);
        assert_eq!(id.min_set, AffineSubspace::whole(2));
        let r = reflection(&v(&[1, 1]), Rat::int(2));
        let inv = invariants(&r);
        assert!(inv.elliptic);
        assert_eq!(inv.mov, AffineSubspace::new(RatVec::zeros(2), &[v(&[1, 1])]).unwrap());
        assert_eq!(inv.min_set.dim(), 1);
        assert!(inv.min_set.contains(&v(&[1, 1])));
    }

    #[test]
    fn frame_roundtrip_and_ops() {
        let rs = build_root_system(&"G2".parse().unwrap()).unwrap();
        let rf = RootFrame::new(&rs, 1);
        let f = &rf.frame;
        let a = rf.reflection(Refl { root: 1, level: 2 });
        let b = rf.reflection(Refl { root: 4, level: -1 });
        let ab = f.mul(&a, &b);
        let exact = f.unpack(&a).compose(&f.unpack(&b));
        assert_eq!(f.unpack(&ab), exact);
        assert_eq!(f.mul(&ab, &f.inv(&ab)), f.identity());
        assert_eq!(f.length(&ab), reflection_length(&exact));
        assert_eq!(rf.as_reflection(&a), Some(Refl { root: 1, level: 2 }));
        assert_eq!(rf.as_reflection(&ab), None);
    }

    #[test]
    fn g2_coxeter_element() {
        let w = CoxeterElement::new(&"G2".parse().unwrap()).unwrap();
        let inv = invariants(&w.w);
        assert!(!inv.elliptic);
        assert_eq!(inv.mov.dim(), 1);
        assert!(!inv.mov.contains_origin());
        assert_eq!(reflection_length(&w.w), 3);
        // Min-set points all move by μ.
        for s in -2..=2 {
            let x = w.axis.base().axpy(Rat::int(s), &w.axis.directions()[0]);
            assert_eq!(&w.w.apply(&x) - &x, w.axis_direction);
        }
        assert_eq!(w.period_p, 2);
        assert_eq!(w.index_period, 4);
        assert_eq!(w.r_h.len(), 2);
        assert_eq!(w.translations.len(), 2);
        // Conjugation by w^2 shifts axial indices by 4.
        for r in &w.r_v {
            let s = w.shift_refl(*r, 1);
            assert_eq!(w.axial_index(s).unwrap(), w.axial_index(*r).unwrap() + 4);
        }
    }

    #[test]
    fn horizontal_factorizations() {
        for (name, sizes) in [("G2", 1), ("C2", 1), ("B3", 2), ("A3", 2), ("F4", 3)] {
            let w = CoxeterElement::new(&name.parse().unwrap()).unwrap();
            let (t, word) = w.horizontal_factorization().unwrap();
            assert!(t.is_translation());
            assert_eq!(word.len(), sizes, "{name}");
            let mut prod = t.clone();
            for r in &word {
                assert!(w.is_horizontal_root(r.root));
                prod = prod.compose(&w.refl_isometry(*r));
            }
            assert_eq!(prod, w.w, "{name}");
        }
    }

    #[test]
    fn bigon_orders() {
        assert_eq!(bigon_order(3, 3, 1), vec![0, 1, 2, 3]);
        let o = bigon_order(3, 2, 2);
        let pos = |j: usize| o.iter().position(|&x| x == j).unwrap();
        let forward = (0..=3).filter(|&j| pos(j) < pos((j + 1) % 4)).count();
        assert_eq!(forward, 2);
    }
}

#[cfg(test)]
mod sporadic_tests {
    use super::*;

    #[test]
    fn e8_generator_counts() {
        let w = CoxeterElement::new(&"E8".parse().unwrap()).unwrap();
        assert_eq!(w.r_h.len(), 28);
        assert_eq!(w.translations.len(), 30);
        let (_, word) = w.horizontal_factorization().unwrap();
        assert_eq!(word.len(), 7);
    }
}
