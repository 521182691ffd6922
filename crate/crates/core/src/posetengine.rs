//! Weighted bounded posets and intervals in groups.
//!
//! An interval `[1,w]` is built by expanding prefixes from the identity: a
//! source supplies, for the remaining element `u⁻¹w`, the generators that
//! start a geodesic. Queries (order, meets, joins, bowties) run on up-set and
//! down-set bitsets.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactgeom::Rat;
use crate::isomgroup::{Cell, Row};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("interval is not weighted-graded: element reached at weights {0} and {1}")]
    NotGraded(Rat, Rat),
    #[error("target was not reached")]
    Unreached,
    #[error("element {0} has no coarse cell")]
    Unclassifiable(usize),
    #[error("coarse tables need a hyperbolic target")]
    NotHyperbolic,
    #[error("covers were not recorded for this interval")]
    NoCovers,
    #[error("complement of element {0} is outside the interval")]
    Complement(usize),
    #[error("extremum is not unique for element {0}")]
    NotUnique(usize),
    #[error("element {0} is not in the middle row")]
    NotMiddle(usize),
}

/// One prefix step: `u ↦ u·elem`.
#[derive(Debug, Clone)]
pub struct Step<L, E> {
    pub label: L,
    pub weight: Rat,
    pub elem: E,
}

/// A group together with a target `w` and a prefix oracle for `[1,w]`.
pub trait IntervalSource: Sync {
    type Elem: Clone + Eq + Hash + Ord + Send + Sync + Debug;
    type Label: Clone + Ord + Send + Sync + Debug;

    fn identity(&self) -> Self::Elem;
    fn target(&self) -> Self::Elem;
    fn total_weight(&self) -> Rat;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Generators `g` with `weight(g) + d(g, rest) <= budget` according to
    /// the oracle. When [`IntervalSource::exact`] holds every returned step
    /// lies on a geodesic from 1 to `rest`.
    fn steps(&self, rest: &Self::Elem, budget: Rat) -> Vec<Step<Self::Label, Self::Elem>>;
    /// Whether `steps` uses the exact distance (otherwise a lower bound).
    /// Exact oracles get an early grading check; both kinds are pruned to
    /// states that reach the target.
    fn exact(&self) -> bool {
        true
    }
    fn cell(&self, _u: &Self::Elem, _rest: &Self::Elem) -> Option<Cell> {
        None
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub record_covers: bool,
    /// Remove edges implied by longer chains (needed when generator weights
    /// differ).
    pub reduce: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { record_covers: true, reduce: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Element<E> {
    pub payload: E,
    pub weight: Rat,
    pub cell: Option<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cover<L> {
    pub lo: usize,
    pub hi: usize,
    pub label: L,
}

/// `a, b` minimal upper bounds of `{c, d}`; `c, d` maximal lower bounds of
/// `{a, b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bowtie {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

#[derive(Debug)]
pub struct OrderIndex {
    pub up: Vec<FixedBitSet>,
    pub down: Vec<FixedBitSet>,
}

/// A finite bounded weighted poset with sorted element ids (by weight).
#[derive(Debug)]
pub struct Interval<E, L> {
    pub elements: Vec<Element<E>>,
    pub covers: Vec<Cover<L>>,
    pub bottom: usize,
    pub top: usize,
    pub total: Rat,
    pub has_covers: bool,
    index: OnceLock<OrderIndex>,
    lookup: OnceLock<HashMap<E, usize>>,
}

impl<E, L> Interval<E, L>
where
    E: Clone + Eq + Hash + Ord + Debug,
    L: Clone + Ord + Debug,
{
    /// A poset from explicit covers; ids are re-sorted by weight.
    pub fn from_covers(
        payloads: Vec<E>,
        weights: Vec<Rat>,
        covers: Vec<(usize, usize, L)>,
    ) -> Interval<E, L> {
        let n = payloads.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| (weights[a], &payloads[a]).cmp(&(weights[b], &payloads[b])));
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let elements: Vec<Element<E>> = order
            .iter()
            .map(|&o| Element { payload: payloads[o].clone(), weight: weights[o], cell: None })
            .collect();
        let mut cs: Vec<Cover<L>> =
            covers.into_iter().map(|(a, b, l)| Cover { lo: pos[a], hi: pos[b], label: l }).collect();
        cs.sort();
        cs.dedup();
        let total = elements.last().map(|e| e.weight).unwrap_or_else(Rat::zero);
        Interval {
            bottom: 0,
            top: n.saturating_sub(1),
            total,
            elements,
            covers: cs,
            has_covers: true,
            index: OnceLock::new(),
            lookup: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn payload(&self, i: usize) -> &E {
        &self.elements[i].payload
    }
    pub fn weight(&self, i: usize) -> Rat {
        self.elements[i].weight
    }

    pub fn id_of(&self, e: &E) -> Option<usize> {
        self.lookup
            .get_or_init(|| {
                self.elements.iter().enumerate().map(|(i, x)| (x.payload.clone(), i)).collect()
            })
            .get(e)
            .copied()
    }

    pub fn order_index(&self) -> &OrderIndex {
        assert!(self.has_covers, "order queries need recorded covers");
        self.index.get_or_init(|| {
            let n = self.len();
            let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
            let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
            for c in &self.covers {
                succ[c.lo].push(c.hi);
                pred[c.hi].push(c.lo);
            }
            let mut up: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
            for i in (0..n).rev() {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(i);
                for &j in &succ[i] {
                    s.union_with(&up[j]);
                }
                up[i] = s;
            }
            let mut down: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
            for i in 0..n {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(i);
                for &j in &pred[i] {
                    s.union_with(&down[j]);
                }
                down[i] = s;
            }
            OrderIndex { up, down }
        })
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order_index().up[a].contains(b)
    }

    pub fn upper_bounds(&self, a: usize, b: usize) -> FixedBitSet {
        let idx = self.order_index();
        let mut s = idx.up[a].clone();
        s.intersect_with(&idx.up[b]);
        s
    }

    pub fn lower_bounds(&self, a: usize, b: usize) -> FixedBitSet {
        let idx = self.order_index();
        let mut s = idx.down[a].clone();
        s.intersect_with(&idx.down[b]);
        s
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let s = self.upper_bounds(a, b);
        let z = s.ones().next()?;
        s.is_subset(&self.order_index().up[z]).then_some(z)
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let s = self.lower_bounds(a, b);
        let z = s.ones().next_back()?;
        s.is_subset(&self.order_index().down[z]).then_some(z)
    }

    fn minimal_in(&self, s: &FixedBitSet) -> Vec<usize> {
        let idx = self.order_index();
        s.ones().filter(|&z| s.ones().all(|y| y == z || !idx.up[y].contains(z))).collect()
    }

    fn maximal_in(&self, s: &FixedBitSet) -> Vec<usize> {
        let idx = self.order_index();
        s.ones().filter(|&z| s.ones().all(|y| y == z || !idx.down[y].contains(z))).collect()
    }

    pub fn minimal_upper_bounds(&self, a: usize, b: usize) -> Vec<usize> {
        self.minimal_in(&self.upper_bounds(a, b))
    }

    /// Join with upper bounds restricted to `mask`.
    pub fn join_within(&self, a: usize, b: usize, mask: &FixedBitSet) -> Option<usize> {
        let mut s = self.upper_bounds(a, b);
        s.intersect_with(mask);
        let z = s.ones().next()?;
        s.is_subset(&self.order_index().up[z]).then_some(z)
    }

    /// Meet with lower bounds restricted to `mask`.
    pub fn meet_within(&self, a: usize, b: usize, mask: &FixedBitSet) -> Option<usize> {
        let mut s = self.lower_bounds(a, b);
        s.intersect_with(mask);
        let z = s.ones().next_back()?;
        s.is_subset(&self.order_index().down[z]).then_some(z)
    }

    /// Like [`Interval::bowtie_for_pair`] with bounds restricted to `mask`.
    pub fn bowtie_within(&self, x: usize, y: usize, mask: &FixedBitSet) -> Option<Bowtie> {
        let mut ub = self.upper_bounds(x, y);
        ub.intersect_with(mask);
        let ubs = self.minimal_in(&ub);
        if ubs.len() < 2 {
            return None;
        }
        let (a, b) = (ubs[0], ubs[1]);
        let idx = self.order_index();
        let mut lbs = self.lower_bounds(a, b);
        lbs.intersect_with(mask);
        let pick = |base: usize| -> usize {
            let mut s = lbs.clone();
            s.intersect_with(&idx.up[base]);
            self.maximal_in(&s)[0]
        };
        Some(Bowtie { a, b, c: pick(x), d: pick(y) })
    }

    /// A bowtie built from a pair without a join, if the pair has none.
    pub fn bowtie_for_pair(&self, x: usize, y: usize) -> Option<Bowtie> {
        if self.join(x, y).is_some() {
            return None;
        }
        let ubs = self.minimal_upper_bounds(x, y);
        if ubs.len() < 2 {
            return None;
        }
        let (a, b) = (ubs[0], ubs[1]);
        let idx = self.order_index();
        let lbs = self.lower_bounds(a, b);
        let pick = |base: usize| -> usize {
            let mut s = lbs.clone();
            s.intersect_with(&idx.up[base]);
            self.maximal_in(&s)[0]
        };
        Some(Bowtie { a, b, c: pick(x), d: pick(y) })
    }

    /// Exhaustive check over all pairs: `Ok` iff the poset is a lattice.
    pub fn is_lattice(&self) -> Result<(), Bowtie> {
        let n = self.len();
        self.is_lattice_among((0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))))
    }

    /// Checks joins of the given pairs; returns the first bowtie found.
    pub fn is_lattice_among(
        &self,
        pairs: impl Iterator<Item = (usize, usize)>,
    ) -> Result<(), Bowtie> {
        let idx = self.order_index();
        for (x, y) in pairs {
            if idx.up[x].contains(y) || idx.up[y].contains(x) {
                continue;
            }
            if let Some(b) = self.bowtie_for_pair(x, y) {
                return Err(b);
            }
        }
        Ok(())
    }

    pub fn is_bowtie(&self, t: &Bowtie) -> bool {
        let distinct = [t.a, t.b, t.c, t.d];
        if (0..4).any(|i| (i + 1..4).any(|j| distinct[i] == distinct[j])) {
            return false;
        }
        let mut ub = self.minimal_upper_bounds(t.c, t.d);
        ub.sort_unstable();
        let mut lb = self.maximal_in(&self.lower_bounds(t.a, t.b));
        lb.sort_unstable();
        ub.contains(&t.a) && ub.contains(&t.b) && lb.contains(&t.c) && lb.contains(&t.d)
    }

    /// Atoms: elements covering the bottom.
    pub fn atoms(&self) -> Vec<usize> {
        let mut a: Vec<usize> =
            self.covers.iter().filter(|c| c.lo == self.bottom).map(|c| c.hi).collect();
        a.sort_unstable();
        a.dedup();
        a
    }

    /// Every cover raises the weight by the label weight.
    pub fn check_grading(&self, label_weight: impl Fn(&L) -> Rat) -> bool {
        self.covers
            .iter()
            .all(|c| self.weight(c.hi) - self.weight(c.lo) == label_weight(&c.label))
    }

    /// Elements whose cell lies in `row`.
    pub fn row_members(&self, row: Row) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.elements[i].cell.map(|c| c.row) == Some(row))
            .collect()
    }

    /// Unique minimum of the top-row elements above a middle-row element.
    pub fn project_up(&self, u: usize) -> Result<usize, PosetError> {
        self.project(u, Row::Top, true)
    }

    /// Unique maximum of the bottom-row elements below a middle-row element.
    pub fn project_down(&self, u: usize) -> Result<usize, PosetError> {
        self.project(u, Row::Bottom, false)
    }

    fn project(&self, u: usize, row: Row, upward: bool) -> Result<usize, PosetError> {
        let cell = self.elements[u].cell.ok_or(PosetError::Unclassifiable(u))?;
        if cell.row == row {
            return Ok(u);
        }
        if cell.row != Row::Middle {
            return Err(PosetError::NotMiddle(u));
        }
        let idx = self.order_index();
        let base = if upward { &idx.up[u] } else { &idx.down[u] };
        let mut s = FixedBitSet::with_capacity(self.len());
        for i in base.ones() {
            if self.elements[i].cell.map(|c| c.row) == Some(row) {
                s.insert(i);
            }
        }
        let ext = if upward { self.minimal_in(&s) } else { self.maximal_in(&s) };
        match ext.as_slice() {
            [z] => Ok(*z),
            _ => Err(PosetError::NotUnique(u)),
        }
    }

    /// Tabulates the coarse structure over `boxes` columns. Middle-row
    /// elements are counted once per `w^p`-orbit: those with phase in
    /// `[-1/2, 1/2)`.
    pub fn coarse_table(&self, boxes: usize) -> Result<CoarseTable, PosetError> {
        let mut rows = [vec![0u64; boxes], vec![0u64; boxes], vec![0u64; boxes]];
        for (i, e) in self.elements.iter().enumerate() {
            let c = e.cell.ok_or(PosetError::Unclassifiable(i))?;
            let r = match c.row {
                Row::Bottom => 0,
                Row::Middle => {
                    let ph = c.phase.ok_or(PosetError::Unclassifiable(i))?;
                    let half = Rat::new(1, 2);
                    if ph < -half || ph >= half {
                        continue;
                    }
                    1
                }
                Row::Top => 2,
            };
            if c.box_index >= boxes {
                return Err(PosetError::Unclassifiable(i));
            }
            rows[r][c.box_index] += 1;
        }
        let [bottom, middle, top] = rows;
        Ok(CoarseTable { bottom, middle, top })
    }

    /// Map `u ↦ u⁻¹w` on ids.
    pub fn complement_map<S>(&self, src: &S) -> Result<Vec<usize>, PosetError>
    where
        S: IntervalSource<Elem = E, Label = L>,
    {
        let w = self.payload(self.top).clone();
        (0..self.len())
            .map(|i| {
                let v = src.mul(&src.inv(self.payload(i)), &w);
                self.id_of(&v).ok_or(PosetError::Complement(i))
            })
            .collect()
    }

    /// The complement map is a bijection sending covers to reversed covers.
    pub fn is_self_dual<S>(&self, src: &S) -> Result<bool, PosetError>
    where
        S: IntervalSource<Elem = E, Label = L>,
    {
        let c = self.complement_map(src)?;
        let mut seen = vec![false; self.len()];
        for &j in &c {
            if std::mem::replace(&mut seen[j], true) {
                return Ok(false);
            }
        }
        let pairs: std::collections::HashSet<(usize, usize)> =
            self.covers.iter().map(|x| (x.lo, x.hi)).collect();
        Ok(self.covers.iter().all(|x| pairs.contains(&(c[x.hi], c[x.lo]))))
    }

    /// JSON-friendly form.
    pub fn to_json(
        &self,
        key: impl Fn(&E) -> String,
        label: impl Fn(&L) -> String,
    ) -> PosetJson {
        PosetJson {
            elements: self
                .elements
                .iter()
                .enumerate()
                .map(|(id, e)| ElementJson {
                    id,
                    key: key(&e.payload),
                    row: e.cell.map(|c| c.row),
                    r#box: e.cell.map(|c| c.box_index),
                    weight: e.weight,
                })
                .collect(),
            covers: self.covers.iter().map(|c| (c.lo, c.hi, label(&c.label))).collect(),
            bottom: self.bottom,
            top: self.top,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementJson {
    pub id: usize,
    pub key: String,
    pub row: Option<Row>,
    pub r#box: Option<usize>,
    pub weight: Rat,
}

#[derive(Debug, Clone, Serialize)]
pub struct PosetJson {
    pub elements: Vec<ElementJson>,
    pub covers: Vec<(usize, usize, String)>,
    pub bottom: usize,
    pub top: usize,
}

/// Per-box counts of the three rows. Bottom and top rows count elements,
/// the middle row counts `w^p`-conjugation families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarseTable {
    pub bottom: Vec<u64>,
    pub middle: Vec<u64>,
    pub top: Vec<u64>,
}

impl CoarseTable {
    pub fn is_symmetric(&self) -> bool {
        let mut r = self.bottom.clone();
        r.reverse();
        r == self.top && {
            let mut m = self.middle.clone();
            m.reverse();
            m == self.middle
        }
    }
}

impl std::fmt::Display for CoarseTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let row = |v: &Vec<u64>| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "top     (elements): {}", row(&self.top))?;
        writeln!(f, "middle  (families): {}", row(&self.middle))?;
        write!(f, "bottom  (elements): {}", row(&self.bottom))
    }
}

/// Builds `[1, w]` for a source.
pub fn build_interval<S: IntervalSource>(
    src: &S,
    opts: BuildOptions,
) -> Result<Interval<S::Elem, S::Label>, PosetError> {
    let exact = src.exact();
    let total = src.total_weight();
    let target = src.target();
    // States are (element, weight); with an exact oracle each element has
    // one. Every state is kept only if it lies on a path to the target.
    let mut states: Vec<(S::Elem, Rat)> = Vec::new();
    let mut ids: HashMap<(S::Elem, Rat), u32> = HashMap::new();
    let mut seen_weight: HashMap<S::Elem, Rat> = HashMap::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut labels: Vec<S::Label> = Vec::new();
    let mut levels: BTreeMap<Rat, Vec<u32>> = BTreeMap::new();
    let one = src.identity();
    states.push((one.clone(), Rat::zero()));
    ids.insert((one, Rat::zero()), 0);
    levels.insert(Rat::zero(), vec![0]);
    while let Some((wt, layer)) = levels.pop_first() {
        let results: Vec<Vec<Step<S::Label, S::Elem>>> = layer
            .par_iter()
            .map(|&id| {
                let u = &states[id as usize].0;
                let rest = src.mul(&src.inv(u), &target);
                src.steps(&rest, total - wt)
                    .into_iter()
                    .map(|s| Step { label: s.label, weight: s.weight, elem: src.mul(u, &s.elem) })
                    .collect()
            })
            .collect();
        for (&id, res) in layer.iter().zip(results) {
            for s in res {
                let nw = wt + s.weight;
                if nw > total {
                    continue;
                }
                if exact {
                    if let Some(&old) = seen_weight.get(&s.elem) {
                        if old != nw {
                            return Err(PosetError::NotGraded(old, nw));
                        }
                    }
                }
                let key = (s.elem, nw);
                let j = match ids.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = u32::try_from(states.len()).expect("interval fits u32 ids");
                        if exact {
                            seen_weight.insert(key.0.clone(), nw);
                        }
                        states.push(key.clone());
                        ids.insert(key, j);
                        levels.entry(nw).or_default().push(j);
                        j
                    }
                };
                edges.push((id, j));
                if opts.record_covers {
                    labels.push(s.label);
                }
            }
        }
    }
    drop(ids);
    drop(seen_weight);
    let top_state = states
        .iter()
        .position(|(e, w)| *e == target && *w == total)
        .ok_or(PosetError::Unreached)?;
    let n = states.len();
    let alive = backward_reachable(n, &edges, top_state);
    let mut by_elem: HashMap<&S::Elem, Rat> = HashMap::new();
    for (i, (e, w)) in states.iter().enumerate() {
        if alive[i] {
            if let Some(old) = by_elem.insert(e, *w) {
                return Err(PosetError::NotGraded(old, *w));
            }
        }
    }
    drop(by_elem);
    let mut order: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    order.sort_by(|&a, &b| (states[a].1, &states[a].0).cmp(&(states[b].1, &states[b].0)));
    let mut pos = vec![usize::MAX; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let cells: Vec<Option<Cell>> = order
        .par_iter()
        .map(|&o| {
            let u = &states[o].0;
            src.cell(u, &src.mul(&src.inv(u), &target))
        })
        .collect();
    let mut covers: Vec<Cover<S::Label>> = edges
        .into_iter()
        .zip(labels)
        .map(|((a, b), l)| (a as usize, b as usize, l))
        .filter(|(a, b, _)| alive[*a] && alive[*b])
        .map(|(a, b, l)| Cover { lo: pos[a], hi: pos[b], label: l })
        .collect();
    covers.sort();
    covers.dedup();
    let mut states: Vec<Option<(S::Elem, Rat)>> = states.into_iter().map(Some).collect();
    let elements: Vec<Element<S::Elem>> = order
        .iter()
        .zip(cells)
        .map(|(&o, cell)| {
            let (payload, weight) = states[o].take().expect("each state used once");
            Element { payload, weight, cell }
        })
        .collect();
    let mut iv = Interval {
        bottom: 0,
        top: pos[top_state],
        total,
        elements,
        covers,
        has_covers: opts.record_covers,
        index: OnceLock::new(),
        lookup: OnceLock::new(),
    };
    if opts.reduce && opts.record_covers {
        iv.reduce_covers();
    }
    Ok(iv)
}

/// States from which `top` is reachable along `edges`.
fn backward_reachable(n: usize, edges: &[(u32, u32)], top: usize) -> Vec<bool> {
    let mut start = vec![0u32; n + 1];
    for &(_, b) in edges {
        start[b as usize + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut pred = vec![0u32; edges.len()];
    for &(a, b) in edges {
        pred[fill[b as usize] as usize] = a;
        fill[b as usize] += 1;
    }
    let mut alive = vec![false; n];
    alive[top] = true;
    let mut stack = vec![top];
    while let Some(x) = stack.pop() {
        for &p in &pred[start[x] as usize..start[x + 1] as usize] {
            if !alive[p as usize] {
                alive[p as usize] = true;
                stack.push(p as usize);
            }
        }
    }
    alive
}

impl<E, L> Interval<E, L>
where
    E: Clone + Eq + Hash + Ord + Debug,
    L: Clone + Ord + Debug,
{
    /// Drops edges `(u, v)` with some `z` strictly between.
    pub fn reduce_covers(&mut self) {
        let keep: Vec<bool> = {
            let idx = self.order_index();
            self.covers
                .iter()
                .map(|c| {
                    let mut s = idx.up[c.lo].clone();
                    s.intersect_with(&idx.down[c.hi]);
                    s.count_ones(..) == 2
                })
                .collect()
        };
        let mut it = keep.iter();
        self.covers.retain(|_| *it.next().expect("same length"));
    }
}
