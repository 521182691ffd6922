//! Middle groups `Mid(B_n) = Z^n ⋊ Sym_n`, their special intervals and type B
//! noncrossing partitions.
//!
//! Labels of the `2n`-gon are stored as positions `0..2n`: position `q < n`
//! is `e_{q+1}`, position `n + q` is `-e_{q+1}`. The special element rotates
//! positions by one step.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactgeom::Rat;
use crate::posetengine::{build_interval, BuildOptions, Interval, IntervalSource, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MidError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("n = {0} is below the minimum of 2")]
    TooSmall(usize),
    #[error("n = {0} exceeds the enumeration bound")]
    TooLarge(usize),
    #[error("element is not in the special interval")]
    NotInInterval,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

pub const MAX_N: usize = 8;

/// `t_λ r_π`, acting by `x ↦ λ + π(x)` with `(πx)_{π(i)} = x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MidElement {
    pub lambda: Vec<i64>,
    /// 0-based: coordinate `i` moves to `pi[i]`.
    pub pi: Vec<usize>,
}

impl MidElement {
    pub fn identity(n: usize) -> MidElement {
        MidElement { lambda: vec![0; n], pi: (0..n).collect() }
    }
    pub fn n(&self) -> usize {
        self.pi.len()
    }
    pub fn translation(lambda: Vec<i64>) -> MidElement {
        let n = lambda.len();
        MidElement { lambda, pi: (0..n).collect() }
    }
    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.n()];
        for (i, &p) in self.pi.iter().enumerate() {
            out[p] = x[i] + self.lambda[p];
        }
        out
    }
    fn permute(&self, mu: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.n()];
        for (i, &p) in self.pi.iter().enumerate() {
            out[p] = mu[i];
        }
        out
    }
    pub fn inverse(&self) -> MidElement {
        let n = self.n();
        let mut pinv = vec![0; n];
        for (i, &p) in self.pi.iter().enumerate() {
            pinv[p] = i;
        }
        let inv = MidElement { lambda: vec![0; n], pi: pinv };
        let lam = inv.permute(&self.lambda).into_iter().map(|x| -x).collect();
        MidElement { lambda: lam, pi: inv.pi }
    }
    /// Sign pattern of the image in `Cox(B_n)`: `e_i ↦ ±e_{π(i)}`.
    pub fn signed_image(&self, i: usize) -> (usize, bool) {
        let p = self.pi[i];
        (p, self.lambda[p].rem_euclid(2) == 1)
    }
    /// Reflection length of the image in `Cox(B_n)`: `n` minus the number of
    /// cycles with an even number of sign changes.
    pub fn projected_length(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut even = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut flips = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                let (p, neg) = self.signed_image(i);
                flips += neg as usize;
                i = p;
            }
            if flips % 2 == 0 {
                even += 1;
            }
        }
        n - even
    }
}

impl fmt::Display for MidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi: Vec<String> = self.pi.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "t{:?} r[{}]", self.lambda, pi.join(" "))
    }
}

pub fn mid_mul(a: &MidElement, b: &MidElement) -> Result<MidElement, MidError> {
    if a.n() != b.n() {
        return Err(MidError::SizeMismatch(a.n(), b.n()));
    }
    Ok(mul(a, b))
}

fn mul(a: &MidElement, b: &MidElement) -> MidElement {
    let pm = a.permute(&b.lambda);
    MidElement {
        lambda: a.lambda.iter().zip(pm).map(|(x, y)| x + y).collect(),
        pi: b.pi.iter().map(|&j| a.pi[j]).collect(),
    }
}

/// Generators `t_i` and `r_ij(k) = t_i^k r_ij t_i^{-k}` (0-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MidGenerator {
    T(usize),
    R(usize, usize, i64),
}

impl MidGenerator {
    pub fn element(&self, n: usize) -> MidElement {
        match *self {
            MidGenerator::T(i) => {
                let mut l = vec![0; n];
                l[i] = 1;
                MidElement::translation(l)
            }
            MidGenerator::R(i, j, k) => {
                let mut l = vec![0; n];
                l[i] = k;
                l[j] = -k;
                let mut pi: Vec<usize> = (0..n).collect();
                pi.swap(i, j);
                MidElement { lambda: l, pi }
            }
        }
    }
}

impl fmt::Display for MidGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MidGenerator::T(i) => write!(f, "t{}", i + 1),
            MidGenerator::R(i, j, 0) => write!(f, "r{}{}", i + 1, j + 1),
            MidGenerator::R(i, j, k) => write!(f, "r{}{}({})", i + 1, j + 1, k),
        }
    }
}

/// `w = t_1 r_12 r_23 ⋯ r_{n-1,n}`.
pub fn special_element(n: usize) -> Result<MidElement, MidError> {
    if n < 2 {
        return Err(MidError::TooSmall(n));
    }
    let mut w = MidGenerator::T(0).element(n);
    for i in 0..n - 1 {
        w = mul(&w, &MidGenerator::R(i, i + 1, 0).element(n));
    }
    Ok(w)
}

/// Sum of the coordinates of the image of the origin.
pub fn vertical_displacement(u: &MidElement) -> i64 {
    u.lambda.iter().sum()
}

/// `(1,…,1; id)` together with the result of the centralizer check over the
/// generators with shifts in `[-2, 2]`.
pub fn center_generator(n: usize) -> Result<(MidElement, bool), MidError> {
    if n < 2 {
        return Err(MidError::TooSmall(n));
    }
    let c = MidElement::translation(vec![1; n]);
    let ok = generators(n, -2, 2).iter().all(|g| {
        let e = g.element(n);
        mul(&c, &e) == mul(&e, &c)
    });
    Ok((c, ok))
}

pub fn commutes(a: &MidElement, b: &MidElement) -> bool {
    mul(a, b) == mul(b, a)
}

/// `t_i` and `r_ij(k)` for `lo <= k <= hi`.
pub fn generators(n: usize, lo: i64, hi: i64) -> Vec<MidGenerator> {
    let mut g: Vec<MidGenerator> = (0..n).map(MidGenerator::T).collect();
    for i in 0..n {
        for j in i + 1..n {
            for k in lo..=hi {
                g.push(MidGenerator::R(i, j, k));
            }
        }
    }
    g
}

/// A centrally symmetric noncrossing partition of the `2n` positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BncPartition {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
}

pub fn position_label(n: usize, q: usize) -> String {
    if q < n {
        format!("e{}", q + 1)
    } else {
        format!("-e{}", q - n + 1)
    }
}

pub fn parse_label(n: usize, s: &str) -> Result<usize, MidError> {
    let bad = || MidError::InvalidPartition(format!("bad label {s}"));
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let i: usize = rest.strip_prefix('e').ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if i == 0 || i > n {
        return Err(bad());
    }
    Ok(i - 1 + if neg { n } else { 0 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub n: usize,
    pub blocks: Vec<Vec<String>>,
}

impl BncPartition {
    /// Canonical form: blocks sorted internally and by least position.
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<BncPartition, MidError> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        let p = BncPartition { n, blocks };
        p.validate()?;
        Ok(p)
    }

    pub fn singletons(n: usize) -> BncPartition {
        BncPartition { n, blocks: (0..2 * n).map(|q| vec![q]).collect() }
    }

    pub fn full(n: usize) -> BncPartition {
        BncPartition { n, blocks: vec![(0..2 * n).collect()] }
    }

    fn block_of(&self) -> Vec<usize> {
        let mut of = vec![usize::MAX; 2 * self.n];
        for (b, blk) in self.blocks.iter().enumerate() {
            for &q in blk {
                of[q] = b;
            }
        }
        of
    }

    fn negate_block(&self, b: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = b.iter().map(|&q| (q + self.n) % (2 * self.n)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_zero_block(&self, b: &[usize]) -> bool {
        self.negate_block(b) == b
    }

    pub fn validate(&self) -> Result<(), MidError> {
        let m = 2 * self.n;
        let mut seen = vec![false; m];
        for b in &self.blocks {
            for &q in b {
                if q >= m || std::mem::replace(&mut seen[q], true) {
                    return Err(MidError::InvalidPartition("not a partition".into()));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(MidError::InvalidPartition("not a partition".into()));
        }
        let set: BTreeSet<&Vec<usize>> = self.blocks.iter().collect();
        for b in &self.blocks {
            if !set.contains(&self.negate_block(b)) {
                return Err(MidError::InvalidPartition("not centrally symmetric".into()));
            }
        }
        if self.blocks.iter().filter(|b| self.is_zero_block(b)).count() > 1 {
            return Err(MidError::InvalidPartition("two zero blocks".into()));
        }
        if !noncrossing(&self.block_of()) {
            return Err(MidError::InvalidPartition("crossing blocks".into()));
        }
        Ok(())
    }

    /// Every block lies inside a block of `other`.
    pub fn refines(&self, other: &BncPartition) -> bool {
        let of = other.block_of();
        self.blocks.iter().all(|b| b.iter().all(|&q| of[q] == of[b[0]]))
    }

    /// Common refinement.
    pub fn meet(&self, other: &BncPartition) -> BncPartition {
        let a = self.block_of();
        let b = other.block_of();
        let mut groups: std::collections::BTreeMap<(usize, usize), Vec<usize>> =
            std::collections::BTreeMap::new();
        for q in 0..2 * self.n {
            groups.entry((a[q], b[q])).or_default().push(q);
        }
        BncPartition::new(self.n, groups.into_values().collect()).expect("meets stay noncrossing")
    }

    /// Rotation of the polygon by `k` positions.
    pub fn rotate(&self, k: usize) -> BncPartition {
        let m = 2 * self.n;
        BncPartition::new(
            self.n,
            self.blocks.iter().map(|b| b.iter().map(|&q| (q + k) % m).collect()).collect(),
        )
        .expect("rotation preserves validity")
    }

    pub fn to_json(&self) -> PartitionJson {
        PartitionJson {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&q| position_label(self.n, q)).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &PartitionJson) -> Result<BncPartition, MidError> {
        let blocks = j
            .blocks
            .iter()
            .map(|b| b.iter().map(|s| parse_label(j.n, s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        BncPartition::new(j.n, blocks)
    }
}

impl fmt::Display for BncPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bs: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let l: Vec<String> = b.iter().map(|&q| position_label(self.n, q)).collect();
                format!("{{{}}}", l.join(","))
            })
            .collect();
        write!(f, "{}", bs.join(" "))
    }
}

/// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
pub fn noncrossing(block_of: &[usize]) -> bool {
    let m = block_of.len();
    // A partition is noncrossing iff scanning positions with a stack of open
    // blocks never reopens a block buried under another open one.
    let ids = block_of.iter().max().map_or(0, |b| b + 1);
    let mut last = vec![usize::MAX; ids];
    let mut remaining = vec![0usize; ids];
    for &b in block_of {
        remaining[b] += 1;
    }
    let mut stack: Vec<usize> = Vec::new();
    for q in 0..m {
        let b = block_of[q];
        if last[b] != usize::MAX {
            while let Some(&top) = stack.last() {
                if top == b {
                    break;
                }
                if remaining[top] > 0 {
                    return false;
                }
                stack.pop();
            }
        } else {
            stack.push(b);
        }
        last[b] = q;
        remaining[b] -= 1;
    }
    true
}

/// Enumerates `NC_B(n)` by assigning the first `n` positions to signed
/// blocks; the last `n` are forced by central symmetry.
pub fn ncb_enumerate(n: usize) -> Result<Vec<BncPartition>, MidError> {
    if n > MAX_N {
        return Err(MidError::TooLarge(n));
    }
    if n == 0 {
        return Ok(vec![BncPartition { n, blocks: vec![] }]);
    }
    // assign[q] = (block id, sign); block id 0 is the zero block.
    fn rec(
        n: usize,
        q: usize,
        assign: &mut Vec<(usize, bool)>,
        next: usize,
        out: &mut BTreeSet<BncPartition>,
    ) {
        if q == n {
            let m = 2 * n;
            let mut of = vec![0usize; m];
            for (i, &(b, s)) in assign.iter().enumerate() {
                let (pos, neg) = if b == 0 { (0, 0) } else { (2 * b - 1 + s as usize, 2 * b - s as usize) };
                of[i] = pos;
                of[i + n] = neg;
            }
            if noncrossing(&of) {
                let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); 2 * next + 1];
                for (q, &b) in of.iter().enumerate() {
                    blocks[b].push(q);
                }
                out.insert(BncPartition::new(n, blocks).expect("valid by construction"));
            }
            return;
        }
        let choices: Vec<(usize, bool)> = std::iter::once((0, false))
            .chain((1..next).flat_map(|b| [(b, false), (b, true)]))
            .chain(std::iter::once((next, false)))
            .collect();
        for c in choices {
            assign.push(c);
            rec(n, q + 1, assign, if c.0 == next { next + 1 } else { next }, out);
            assign.pop();
        }
    }
    let mut out = BTreeSet::new();
    rec(n, 0, &mut Vec::new(), 1, &mut out);
    Ok(out.into_iter().collect())
}

/// The element sending each label to the next one clockwise in its block.
pub fn element_from_ncb(p: &BncPartition) -> Result<MidElement, MidError> {
    p.validate()?;
    let n = p.n;
    let m = 2 * n;
    let mut lambda = vec![0i64; n];
    let mut pi = vec![0usize; n];
    let of = p.block_of();
    for a in 0..n {
        let blk = &p.blocks[of[a]];
        let target: i64 = if blk.len() == 1 {
            a as i64
        } else if p.is_zero_block(blk) {
            let i = blk.iter().position(|&x| x == a).expect("member");
            let b = blk[(i + 1) % blk.len()];
            a as i64 + ((b + m - a) % m) as i64
        } else {
            // Lift into an arc: start after the largest cyclic gap.
            let k = blk.len();
            let gap = |i: usize| (blk[(i + 1) % k] + m - blk[i]) % m;
            let start = (0..k).max_by_key(|&i| (gap(i), std::cmp::Reverse(i))).expect("nonempty");
            let s = blk[(start + 1) % k];
            let lift = |x: usize| ((x + m - s) % m) as i64;
            let mut arc: Vec<usize> = blk.clone();
            arc.sort_by_key(|&x| lift(x));
            if lift(arc[k - 1]) >= n as i64 {
                return Err(MidError::InvalidPartition("block not in a half-turn arc".into()));
            }
            let i = arc.iter().position(|&x| x == a).expect("member");
            let b = arc[(i + 1) % k];
            a as i64 + lift(b) - lift(a)
        };
        let coord = target.rem_euclid(n as i64) as usize;
        pi[a] = coord;
        lambda[coord] = target.div_euclid(n as i64);
    }
    Ok(MidElement { lambda, pi })
}

/// Orbits of the signed image on labels; errors unless the element is the
/// one associated with that partition.
pub fn ncb_from_element(u: &MidElement) -> Result<BncPartition, MidError> {
    let n = u.n();
    let m = 2 * n;
    let image = |q: usize| -> usize {
        let (i, neg) = if q < n { (q, false) } else { (q - n, true) };
        let (p, flip) = u.signed_image(i);
        p + if neg ^ flip { n } else { 0 }
    };
    let mut seen = vec![false; m];
    let mut blocks = Vec::new();
    for s in 0..m {
        if seen[s] {
            continue;
        }
        let mut b = Vec::new();
        let mut q = s;
        while !seen[q] {
            seen[q] = true;
            b.push(q);
            q = image(q);
        }
        blocks.push(b);
    }
    let p = BncPartition::new(n, blocks).map_err(|_| MidError::NotInInterval)?;
    if element_from_ncb(&p)? != *u {
        return Err(MidError::NotInInterval);
    }
    Ok(p)
}

/// Left complement `P ↦ ncb(u⁻¹w)`.
pub fn kreweras(p: &BncPartition) -> Result<BncPartition, MidError> {
    let w = special_element(p.n)?;
    let u = element_from_ncb(p)?;
    ncb_from_element(&mul(&u.inverse(), &w))
}

fn kreweras_inv(q: &BncPartition) -> Result<BncPartition, MidError> {
    let w = special_element(q.n)?;
    let v = element_from_ncb(q)?;
    ncb_from_element(&mul(&w, &v.inverse()))
}

pub fn ncb_meet(a: &BncPartition, b: &BncPartition) -> BncPartition {
    a.meet(b)
}

/// Join through the order-reversing complement.
pub fn ncb_join(a: &BncPartition, b: &BncPartition) -> Result<BncPartition, MidError> {
    kreweras_inv(&kreweras(a)?.meet(&kreweras(b)?))
}

/// `[1,w]` in `Mid(B_n)` with the projected reflection length as lower bound.
pub struct MidSource {
    pub n: usize,
    gens: Vec<(MidGenerator, MidElement)>,
}

impl MidSource {
    pub fn new(n: usize) -> MidSource {
        let gens = generators(n, -1, 2).into_iter().map(|g| (g, g.element(n))).collect();
        MidSource { n, gens }
    }
}

impl IntervalSource for MidSource {
    type Elem = MidElement;
    type Label = MidGenerator;
    fn identity(&self) -> MidElement {
        MidElement::identity(self.n)
    }
    fn target(&self) -> MidElement {
        special_element(self.n).expect("n >= 2")
    }
    fn total_weight(&self) -> Rat {
        Rat::int(self.n as i64)
    }
    fn mul(&self, a: &MidElement, b: &MidElement) -> MidElement {
        mul(a, b)
    }
    fn inv(&self, a: &MidElement) -> MidElement {
        a.inverse()
    }
    fn steps(&self, rest: &MidElement, budget: Rat) -> Vec<Step<MidGenerator, MidElement>> {
        self.gens
            .iter()
            .filter(|(_, e)| {
                Rat::int(1 + mul(&e.inverse(), rest).projected_length() as i64) <= budget
            })
            .map(|(g, e)| Step { label: *g, weight: Rat::one(), elem: e.clone() })
            .collect()
    }
    fn exact(&self) -> bool {
        false
    }
}

pub fn build_special_interval(n: usize) -> Result<Interval<MidElement, MidGenerator>, MidError> {
    if n < 2 {
        return Err(MidError::TooSmall(n));
    }
    if n > MAX_N {
        return Err(MidError::TooLarge(n));
    }
    build_interval(&MidSource::new(n), BuildOptions::default())
        .map_err(|e| MidError::InvalidPartition(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> Rat {
        Rat::int(x)
    }

    #[test]
    fn products_and_special_element() {
        let n = 5;
        let id = MidElement::identity(n);
        let w = special_element(n).unwrap();
        assert_eq!(mid_mul(&id, &w).unwrap(), w);
        let x: Vec<Rat> = (1..=5).map(|i| r(10 * i)).collect();
        assert_eq!(w.apply(&x), vec![r(51), r(10), r(20), r(30), r(40)]);
        assert_eq!(w.apply(&vec![r(0); 5]), vec![r(1), r(0), r(0), r(0), r(0)]);
        let t1 = MidGenerator::T(0).element(2);
        let r12 = MidGenerator::R(0, 1, 0).element(2);
        assert_eq!(mul(&mul(&t1, &r12), &t1.inverse()), MidGenerator::R(0, 1, 1).element(2));
        assert_eq!(MidGenerator::R(0, 1, 1).element(2).lambda, vec![1, -1]);
        assert_eq!(special_element(2).unwrap(), mul(&t1, &r12));
        let mut p = MidElement::identity(n);
        for _ in 0..n {
            p = mul(&p, &w);
        }
        assert_eq!(p, MidElement::translation(vec![1; n]));
        assert!(mid_mul(&id, &MidElement::identity(3)).is_err());
        assert!(special_element(1).is_err());
    }

    #[test]
    fn displacement_and_center() {
        for g in generators(4, -2, 2) {
            let e = g.element(4);
            let expect = if matches!(g, MidGenerator::T(_)) { 1 } else { 0 };
            assert_eq!(vertical_displacement(&e), expect);
        }
        assert_eq!(vertical_displacement(&special_element(4).unwrap()), 1);
        let (c, ok) = center_generator(3).unwrap();
        assert!(ok);
        assert_eq!(c.lambda, vec![1, 1, 1]);
        let sq = mul(&c, &c);
        assert!(generators(3, -2, 2).iter().all(|g| commutes(&sq, &g.element(3))));
        let t1 = MidGenerator::T(0).element(3);
        assert!(!commutes(&t1, &MidGenerator::R(0, 1, 0).element(3)));
    }

    #[test]
    fn group_laws_exhaustive_n2() {
        let n = 2;
        let mut elems = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                for pi in [vec![0, 1], vec![1, 0]] {
                    elems.push(MidElement { lambda: vec![a, b], pi });
                }
            }
        }
        let id = MidElement::identity(n);
        for x in &elems {
            assert_eq!(mul(x, &x.inverse()), id);
            assert_eq!(mul(&x.inverse(), x), id);
            for y in &elems {
                for z in &elems {
                    assert_eq!(mul(&mul(x, y), z), mul(x, &mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn figure_partition_element() {
        let n = 5;
        let j = PartitionJson {
            n,
            blocks: vec![
                vec!["e1".into()],
                vec!["-e1".into()],
                vec!["e3".into(), "-e3".into()],
                vec!["e4".into(), "e5".into(), "-e2".into()],
                vec!["-e4".into(), "-e5".into(), "e2".into()],
            ],
        };
        let p = BncPartition::from_json(&j).unwrap();
        let u = element_from_ncb(&p).unwrap();
        let img = |i: usize| {
            let (q, neg) = u.signed_image(i);
            format!("{}e{}", if neg { "-" } else { "" }, q + 1)
        };
        let got: Vec<String> = (0..5).map(img).collect();
        assert_eq!(got, vec!["e1", "-e4", "-e3", "e5", "-e2"]);
        assert_eq!(ncb_from_element(&u).unwrap(), p);
        assert!(ncb_enumerate(5).unwrap().contains(&p));
    }

    #[test]
    fn bounds_of_the_bijection() {
        for n in 2..=5 {
            assert_eq!(element_from_ncb(&BncPartition::singletons(n)).unwrap(), MidElement::identity(n));
            assert_eq!(element_from_ncb(&BncPartition::full(n)).unwrap(), special_element(n).unwrap());
        }
    }

    #[test]
    fn noncrossing_detection() {
        assert!(noncrossing(&[0, 1, 1, 0]));
        assert!(!noncrossing(&[0, 1, 0, 1]));
        assert!(noncrossing(&[0, 0, 1, 1]));
        assert!(!noncrossing(&[0, 1, 2, 0, 2, 1]));
    }
}
