//! Crystallographic root systems, extended Dynkin diagrams and the horizontal
//! root subsystems obtained by deleting the vertical vertex.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactgeom::{Rat, RatMat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("illegal euclidean type {0}")]
    IllegalType(String),
    #[error("bigon ({p},{q}) does not satisfy p + q = n + 1 with p, q >= 1 for A{n}")]
    BadBigon { n: usize, p: usize, q: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_char(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An irreducible euclidean type `X̃_n`. For type A the bigon `(p,q)` selects
/// the conjugacy class of Coxeter element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EuclideanType {
    pub family: Family,
    pub rank: usize,
    pub bigon: Option<(usize, usize)>,
}

impl EuclideanType {
    pub fn new(family: Family, rank: usize) -> Result<EuclideanType, RootError> {
        let t = EuclideanType {
            family,
            rank,
            bigon: (family == Family::A).then_some((rank, 1)),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn type_a(n: usize, p: usize, q: usize) -> Result<EuclideanType, RootError> {
        let t = EuclideanType { family: Family::A, rank: n, bigon: Some((p, q)) };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), RootError> {
        let n = self.rank;
        let ok = match self.family {
            Family::A => n >= 1,
            Family::B => n >= 3,
            Family::C => n >= 2,
            Family::D => n >= 4,
            Family::E => (6..=8).contains(&n),
            Family::F => n == 4,
            Family::G => n == 2,
        };
        if !ok {
            return Err(RootError::IllegalType(format!("{}{}", self.family, n)));
        }
        match (self.family, self.bigon) {
            (Family::A, Some((p, q))) if p >= 1 && q >= 1 && p + q == n + 1 => Ok(()),
            (Family::A, Some((p, q))) => Err(RootError::BadBigon { n, p, q }),
            (Family::A, None) => Err(RootError::BadBigon { n, p: 0, q: 0 }),
            (_, None) => Ok(()),
            (_, Some(_)) => Err(RootError::IllegalType(format!("{self} with bigon"))),
        }
    }
}

impl fmt::Display for EuclideanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)?;
        match self.bigon {
            Some((p, q)) if (p, q) != (self.rank, 1) => write!(f, "({p},{q})"),
            _ => Ok(()),
        }
    }
}

impl FromStr for EuclideanType {
    type Err = RootError;
    /// Parses `E8`, `C3`, `A3` or `A3(2,2)`.
    fn from_str(s: &str) -> Result<EuclideanType, RootError> {
        let bad = || RootError::IllegalType(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars.next().and_then(Family::from_char).ok_or_else(bad)?;
        let rest = chars.as_str();
        let (num, bigon) = match rest.split_once('(') {
            None => (rest, None),
            Some((num, b)) => {
                let b = b.strip_suffix(')').ok_or_else(bad)?;
                let (p, q) = b.split_once(',').ok_or_else(bad)?;
                let p = p.trim().parse().map_err(|_| bad())?;
                let q = q.trim().parse().map_err(|_| bad())?;
                (num, Some((p, q)))
            }
        };
        let rank: usize = num.parse().map_err(|_| bad())?;
        match bigon {
            Some((p, q)) if family == Family::A => EuclideanType::type_a(rank, p, q),
            Some(_) => Err(bad()),
            None => EuclideanType::new(family, rank),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    pub vector: RatVec,
    pub squared_length: Rat,
}

impl Root {
    pub fn new(vector: RatVec) -> Root {
        let squared_length = vector.norm2();
        Root { vector, squared_length }
    }
}

/// `2α/(α·α)`.
pub fn coroot(alpha: &RatVec) -> RatVec {
    alpha.scale(Rat::int(2) / alpha.norm2())
}

/// A finite crystallographic root system in ambient coordinates.
///
/// Roots are stored positive roots first (sorted by height, then by simple
/// coefficients), followed by their negatives in the same order.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub ambient_dim: usize,
    pub roots: Vec<Root>,
    /// Indices into `roots`, in Bourbaki order.
    pub simple: Vec<usize>,
    pub highest: usize,
    /// Simple-root coefficients of every root.
    pub coeffs: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }
    pub fn positive(&self) -> std::ops::Range<usize> {
        0..self.num_positive()
    }
    pub fn neg_index(&self, i: usize) -> usize {
        let n = self.num_positive();
        if i < n {
            i + n
        } else {
            i - n
        }
    }
    pub fn vector(&self, i: usize) -> &RatVec {
        &self.roots[i].vector
    }
    pub fn simple_vectors(&self) -> Vec<RatVec> {
        self.simple.iter().map(|&i| self.roots[i].vector.clone()).collect()
    }
    pub fn highest_root(&self) -> &Root {
        &self.roots[self.highest]
    }
    pub fn index_of(&self, v: &RatVec) -> Option<usize> {
        self.roots.iter().position(|r| &r.vector == v)
    }
    /// Index of the positive root among `±v`, with the sign used.
    pub fn positive_index_of(&self, v: &RatVec) -> Option<(usize, i64)> {
        let i = self.index_of(v)?;
        let n = self.num_positive();
        Some(if i < n { (i, 1) } else { (i - n, -1) })
    }
    /// Coxeter number: height of the highest root plus one.
    pub fn coxeter_number(&self) -> usize {
        self.coeffs[self.highest].iter().sum::<i64>() as usize + 1
    }
    /// Basis of the span of the roots.
    pub fn span_basis(&self) -> Vec<RatVec> {
        self.simple_vectors()
    }
}

/// `m(s,t)` from the angle between two roots; `0` encodes an infinite bond.
pub fn bond_order(a: &RatVec, b: &RatVec) -> u32 {
    let d = a.dot(b);
    let c = d * d / (a.norm2() * b.norm2());
    if c.is_zero() {
        2
    } else if c == Rat::new(1, 4) {
        3
    } else if c == Rat::new(1, 2) {
        4
    } else if c == Rat::new(3, 4) {
        6
    } else {
        0
    }
}

fn half(xs: &[i64]) -> RatVec {
    RatVec(xs.iter().map(|&x| Rat::new(x, 2)).collect())
}

fn e(m: usize, i: usize) -> RatVec {
    RatVec::unit(m, i)
}

fn signed_pair(m: usize, i: usize, j: usize, si: i64, sj: i64) -> RatVec {
    let mut v = RatVec::zeros(m);
    v.0[i] = Rat::int(si);
    v.0[j] = Rat::int(sj);
    v
}

fn e8_roots() -> Vec<RatVec> {
    let mut out = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push(signed_pair(8, i, j, si, sj));
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let xs: Vec<i64> = (0..8).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            out.push(half(&xs));
        }
    }
    out
}

fn e8_simple() -> Vec<RatVec> {
    let mut s = vec![half(&[1, -1, -1, -1, -1, -1, -1, 1]), signed_pair(8, 0, 1, 1, 1)];
    s.push(signed_pair(8, 0, 1, -1, 1));
    for i in 1..7 {
        s.push(signed_pair(8, i, i + 1, -1, 1));
    }
    s
}

/// Raw vectors and simple roots for a spherical type (no legality check
/// beyond what the construction needs).
fn raw_system(family: Family, n: usize) -> (usize, Vec<RatVec>, Vec<RatVec>) {
    match family {
        Family::A => {
            let m = n + 1;
            let mut roots = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        roots.push(signed_pair(m, i, j, 1, -1));
                    }
                }
            }
            let simple = (0..n).map(|i| signed_pair(m, i, i + 1, 1, -1)).collect();
            (m, roots, simple)
        }
        Family::B | Family::C | Family::D => {
            let mut roots = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        roots.push(signed_pair(n, i, j, si, sj));
                    }
                }
            }
            let c = match family {
                Family::B => 1,
                Family::C => 2,
                _ => 0,
            };
            if c > 0 {
                for i in 0..n {
                    roots.push(e(n, i).scale(Rat::int(c)));
                    roots.push(e(n, i).scale(Rat::int(-c)));
                }
            }
            let mut simple: Vec<RatVec> =
                (0..n - 1).map(|i| signed_pair(n, i, i + 1, 1, -1)).collect();
            simple.push(match family {
                Family::D => signed_pair(n, n - 2, n - 1, 1, 1),
                _ => e(n, n - 1).scale(Rat::int(c)),
            });
            (n, roots, simple)
        }
        Family::G => {
            let mut roots = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        roots.push(signed_pair(3, i, j, 1, -1));
                    }
                }
                let mut long = RatVec::from_ints(&[-1, -1, -1]);
                long.0[i] = Rat::int(2);
                roots.push(long.clone());
                roots.push(-&long);
            }
            let simple = vec![RatVec::from_ints(&[1, -1, 0]), RatVec::from_ints(&[-2, 1, 1])];
            (3, roots, simple)
        }
        Family::F => {
            let mut roots = Vec::new();
            for i in 0..4 {
                roots.push(e(4, i));
                roots.push(e(4, i).scale(Rat::int(-1)));
                for j in i + 1..4 {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        roots.push(signed_pair(4, i, j, si, sj));
                    }
                }
            }
            for mask in 0u32..16 {
                let xs: Vec<i64> = (0..4).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
                roots.push(half(&xs));
            }
            let simple = vec![
                signed_pair(4, 1, 2, 1, -1),
                signed_pair(4, 2, 3, 1, -1),
                e(4, 3),
                half(&[1, -1, -1, -1]),
            ];
            (4, roots, simple)
        }
        Family::E => {
            let simple8 = e8_simple();
            let simple: Vec<RatVec> = simple8[..n].to_vec();
            let all = e8_roots();
            if n == 8 {
                return (8, all, simple);
            }
            // Keep the E8 roots in the span of the first n simple roots.
            let basis = RatMat::from_cols(&simple8, 8).expect("8 simple roots");
            let inv = invert(&basis);
            let roots = all
                .into_iter()
                .filter(|r| inv.mul_vec(r).0[n..].iter().all(Rat::is_zero))
                .collect();
            (8, roots, simple)
        }
    }
}

fn invert(a: &RatMat) -> RatMat {
    let m = a.rows();
    let mut aug = RatMat::zeros(m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            aug[(i, j)] = a[(i, j)];
        }
        aug[(i, m + i)] = Rat::one();
    }
    let (r, _) = aug.rref();
    let mut out = RatMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = r[(i, m + j)];
        }
    }
    out
}

/// Expresses each root in the simple basis (least squares is exact here since
/// roots lie in the span).
fn simple_coefficients(roots: &[RatVec], simple: &[RatVec], m: usize) -> Vec<Vec<i64>> {
    let n = simple.len();
    let mut gram = RatMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = simple[i].dot(&simple[j]);
        }
    }
    let ginv = invert(&gram);
    let _ = m;
    roots
        .iter()
        .map(|r| {
            let rhs = RatVec(simple.iter().map(|s| s.dot(r)).collect());
            ginv.mul_vec(&rhs)
                .0
                .iter()
                .map(|c| c.to_int().expect("roots are integral in the simple basis"))
                .collect()
        })
        .collect()
}

fn assemble(family: Family, rank: usize) -> RootSystem {
    let (m, raw, simple) = raw_system(family, rank);
    let coeffs = simple_coefficients(&raw, &simple, m);
    let mut pos: Vec<(Vec<i64>, RatVec)> = raw
        .iter()
        .zip(&coeffs)
        .filter(|(_, c)| c.iter().all(|&x| x >= 0))
        .map(|(r, c)| (c.clone(), r.clone()))
        .collect();
    pos.sort_by(|(a, _), (b, _)| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let mut roots: Vec<Root> = pos.iter().map(|(_, r)| Root::new(r.clone())).collect();
    let mut cs: Vec<Vec<i64>> = pos.iter().map(|(c, _)| c.clone()).collect();
    for (c, r) in &pos {
        roots.push(Root::new(-r));
        cs.push(c.iter().map(|x| -x).collect());
    }
    let simple_idx = simple
        .iter()
        .map(|s| roots.iter().position(|r| &r.vector == s).expect("simple root present"))
        .collect();
    let highest = pos.len() - 1;
    RootSystem { family, rank, ambient_dim: m, roots, simple: simple_idx, highest, coeffs: cs }
}

/// Root system of the spherical type underlying `t`.
pub fn build_root_system(t: &EuclideanType) -> Result<RootSystem, RootError> {
    t.validate()?;
    Ok(assemble(t.family, t.rank))
}

/// Root system of a spherical type without the euclidean legality list, so
/// that e.g. `B2` is available. Requires `rank >= 1` and a valid family rank.
pub fn spherical_root_system(family: Family, rank: usize) -> Result<RootSystem, RootError> {
    let ok = match family {
        Family::A => rank >= 1,
        Family::B | Family::C => rank >= 2,
        Family::D => rank >= 4,
        Family::E => (6..=8).contains(&rank),
        Family::F => rank == 4,
        Family::G => rank == 2,
    };
    if !ok {
        return Err(RootError::IllegalType(format!("{family}{rank}")));
    }
    Ok(assemble(family, rank))
}

/// Extended Dynkin diagram. Vertex 0 is the extending vertex (the negated
/// highest root); vertex `i >= 1` is simple root `i` in Bourbaki order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedDiagram {
    pub vertices: usize,
    /// `(i, j) -> m(s,t)` for `i < j` with `m != 2`; `0` encodes `∞`.
    pub edge_labels: BTreeMap<(usize, usize), u32>,
    pub extending_vertex: usize,
    pub vertical_vertex: usize,
}

impl ExtendedDiagram {
    pub fn label(&self, i: usize, j: usize) -> u32 {
        let key = if i < j { (i, j) } else { (j, i) };
        *self.edge_labels.get(&key).unwrap_or(&2)
    }
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        self.edge_labels.iter().map(|(&(i, j), &m)| (i, j, m)).collect()
    }
}

/// Vertical vertex (as a simple-root number, 1-based) read off the figures.
fn vertical_simple(t: &EuclideanType) -> usize {
    let n = t.rank;
    match t.family {
        Family::A => t.bigon.map_or(n, |(p, _)| p),
        Family::B => n - 1,
        Family::C => n,
        Family::D => n - 2,
        Family::E => 4,
        Family::F => 2,
        Family::G => 2,
    }
}

pub fn extended_diagram(t: &EuclideanType) -> Result<ExtendedDiagram, RootError> {
    let rs = build_root_system(t)?;
    let mut verts = vec![-&rs.highest_root().vector];
    verts.extend(rs.simple_vectors());
    let mut edge_labels = BTreeMap::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let m = bond_order(&verts[i], &verts[j]);
            if m != 2 {
                edge_labels.insert((i, j), m);
            }
        }
    }
    Ok(ExtendedDiagram {
        vertices: verts.len(),
        edge_labels,
        extending_vertex: 0,
        vertical_vertex: vertical_simple(t),
    })
}

/// One irreducible component of the horizontal root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizontalComponent {
    /// Component type, e.g. `("A", 2)`.
    pub family: Family,
    pub rank: usize,
    /// Simple roots (1-based Bourbaki numbers) spanning the component.
    pub simple: Vec<usize>,
    /// Indices into the root system's roots.
    pub roots: Vec<usize>,
}

impl HorizontalComponent {
    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }
}

/// Deletes the vertical vertex from the ordinary Dynkin diagram and returns the
/// irreducible components, ordered by rank then by least simple root.
pub fn horizontal_decomposition(t: &EuclideanType) -> Result<Vec<HorizontalComponent>, RootError> {
    let rs = build_root_system(t)?;
    let v = vertical_simple(t);
    let simples = rs.simple_vectors();
    let n = t.rank;
    let keep: Vec<usize> = (1..=n).filter(|&i| i != v).collect();
    // Connected components under non-orthogonality.
    let mut comp_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &i in &keep {
        if comp_of.contains_key(&i) {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![i];
        let mut members = Vec::new();
        comp_of.insert(i, id);
        while let Some(x) = stack.pop() {
            members.push(x);
            for &y in &keep {
                if !comp_of.contains_key(&y) && !simples[x - 1].dot(&simples[y - 1]).is_zero() {
                    comp_of.insert(y, id);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    let mut out: Vec<HorizontalComponent> = comps
        .into_iter()
        .map(|members| {
            let roots: Vec<usize> = (0..rs.roots.len())
                .filter(|&r| {
                    rs.coeffs[r]
                        .iter()
                        .enumerate()
                        .all(|(k, &c)| c == 0 || members.contains(&(k + 1)))
                })
                .collect();
            let vecs: Vec<RatVec> = members.iter().map(|&i| simples[i - 1].clone()).collect();
            HorizontalComponent {
                family: classify_simple_system(&vecs),
                rank: members.len(),
                simple: members,
                roots,
            }
        })
        .collect();
    out.sort_by(|a, b| a.rank.cmp(&b.rank).then(a.simple.cmp(&b.simple)));
    Ok(out)
}

/// Cartan type of a connected simple system given by its vectors.
pub fn classify_simple_system(simple: &[RatVec]) -> Family {
    let n = simple.len();
    let mut degree = vec![0; n];
    let mut max_bond = 3;
    for i in 0..n {
        for j in i + 1..n {
            let m = bond_order(&simple[i], &simple[j]);
            if m != 2 {
                degree[i] += 1;
                degree[j] += 1;
                max_bond = max_bond.max(m);
            }
        }
    }
    let branch = degree.iter().any(|&d| d >= 3);
    let lens: std::collections::BTreeSet<Rat> = simple.iter().map(|s| s.norm2()).collect();
    match (max_bond, branch) {
        (6, _) => Family::G,
        (4, _) if n == 4 && lens.len() == 2 && degree.iter().filter(|&&d| d == 2).count() == 2 => {
            // F4 has its double bond in the middle.
            let middle_double = (0..n).any(|i| {
                (0..n).any(|j| {
                    i != j
                        && bond_order(&simple[i], &simple[j]) == 4
                        && degree[i] == 2
                        && degree[j] == 2
                })
            });
            if middle_double {
                Family::F
            } else {
                long_short_bc(simple)
            }
        }
        (4, _) => long_short_bc(simple),
        (_, true) if n >= 6 && degree.iter().any(|&d| d == 3) && is_e(simple, &degree) => Family::E,
        (_, true) => Family::D,
        _ => Family::A,
    }
}

fn long_short_bc(simple: &[RatVec]) -> Family {
    // B has one short simple root, C has one long simple root.
    let lens: Vec<Rat> = simple.iter().map(|s| s.norm2()).collect();
    let max = *lens.iter().max().expect("nonempty");
    if lens.iter().filter(|&&l| l == max).count() == 1 && lens.len() > 2 {
        Family::C
    } else {
        Family::B
    }
}

fn is_e(simple: &[RatVec], degree: &[usize]) -> bool {
    // The branch vertex of D_n has two leaf neighbours; E_n has at most one.
    let n = simple.len();
    let b = degree.iter().position(|&d| d == 3).expect("branch");
    let leaves = (0..n)
        .filter(|&j| j != b && degree[j] == 1 && bond_order(&simple[b], &simple[j]) == 3)
        .count();
    leaves <= 1
}
