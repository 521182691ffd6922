//! The euclidean groups attached to a Coxeter element, factored
//! translations, the factor interval, the crystallographic interval and
//! lattice verification.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::exactgeom::{project, Rat, RatVec};
use crate::isomgroup::{
    CoxeterElement, GeneratorLabel, IsomError, Isometry, LabelKind, Motion, Refl, Row,
};
use crate::midnc::{build_special_interval, special_element, vertical_displacement, MidElement, MidGenerator};
use crate::posetengine::{
    build_interval, Bowtie, BuildOptions, Interval, IntervalSource, PosetError, Step,
};
use crate::rootdata::{horizontal_decomposition, RootError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrystError {
    #[error(transparent)]
    Isom(#[from] IsomError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("diagonal translation {0} projects trivially onto a component")]
    DegenerateProjection(usize),
    #[error("component {0} fails the middle-group recognition: {1}")]
    Recognition(usize, String),
    #[error("canonical key collision")]
    Collision,
    #[error("{0} is not a translation in the interval")]
    NotATranslation(String),
    #[error("factorization mixes a factored translation with a vertical reflection")]
    Mixed,
    #[error("window {0} is below the minimum {MIN_LATTICE_WINDOW}")]
    Window(i64),
}

/// The five groups of a Coxeter element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GroupKind {
    W,
    H,
    D,
    F,
    C,
}

impl std::str::FromStr for GroupKind {
    type Err = String;
    fn from_str(s: &str) -> Result<GroupKind, String> {
        match s {
            "W" => Ok(GroupKind::W),
            "H" => Ok(GroupKind::H),
            "D" => Ok(GroupKind::D),
            "F" => Ok(GroupKind::F),
            "C" => Ok(GroupKind::C),
            _ => Err(format!("unknown group {s}")),
        }
    }
}

/// Generating set of one of the five groups.
#[derive(Debug, Clone, Serialize)]
pub struct GroupSpec {
    pub which: GroupKind,
    pub generators: Vec<GeneratorLabel>,
}

fn refl_labels(cox: &CoxeterElement, rs: &[Refl]) -> Vec<GeneratorLabel> {
    rs.iter().map(|r| cox.label_of(*r)).collect()
}

fn diag_labels(cox: &CoxeterElement) -> Vec<GeneratorLabel> {
    (0..cox.translations.len())
        .map(|i| GeneratorLabel { kind: LabelKind::DiagTrans, root: i, index: 0, weight: Rat::int(2) })
        .collect()
}

pub fn group_spec(cox: &CoxeterElement, which: GroupKind) -> Result<GroupSpec, CrystError> {
    let mut g = refl_labels(cox, &cox.r_h);
    let fact = || -> Result<Vec<GeneratorLabel>, CrystError> {
        Ok(factored_translations(cox)?
            .iter()
            .flat_map(|grp| grp.iter().map(|f| f.label()))
            .collect())
    };
    match which {
        GroupKind::H => {}
        GroupKind::W => {
            g.extend(refl_labels(cox, &cox.r_v));
            g.extend(diag_labels(cox));
        }
        GroupKind::D => g.extend(diag_labels(cox)),
        GroupKind::F => {
            g.extend(fact()?);
            g.extend(diag_labels(cox));
        }
        GroupKind::C => {
            g.extend(refl_labels(cox, &cox.r_v));
            g.extend(fact()?);
            g.extend(diag_labels(cox));
        }
    }
    Ok(GroupSpec { which, generators: g })
}

/// `[1,w]^W` with the reflection-length oracle. Remaining elements that are
/// elliptic enumerate their reflections directly; hyperbolic ones scan
/// `R_H ∪ R_V` over the window. For hyperbolic elements the formula only
/// bounds the length in `W` from below, so the build prunes dead ends.
pub struct WSource<'a> {
    pub cox: &'a CoxeterElement,
    window_gens: Vec<(Refl, Motion)>,
}

impl<'a> WSource<'a> {
    pub fn new(cox: &'a CoxeterElement) -> WSource<'a> {
        let window_gens =
            cox.window_reflections().into_iter().map(|r| (r, cox.rf.reflection(r))).collect();
        WSource { cox, window_gens }
    }

    fn refl_step(&self, r: Refl, g: Motion) -> Step<GeneratorLabel, Motion> {
        Step { label: self.cox.label_of(r), weight: Rat::one(), elem: g }
    }
}

impl IntervalSource for WSource<'_> {
    type Elem = Motion;
    type Label = GeneratorLabel;
    fn identity(&self) -> Motion {
        self.cox.frame().identity()
    }
    fn target(&self) -> Motion {
        self.cox.w_motion.clone()
    }
    fn total_weight(&self) -> Rat {
        Rat::int(self.cox.rank() as i64 + 1)
    }
    fn mul(&self, a: &Motion, b: &Motion) -> Motion {
        self.cox.frame().mul(a, b)
    }
    fn inv(&self, a: &Motion) -> Motion {
        self.cox.frame().inv(a)
    }
    fn steps(&self, rest: &Motion, _budget: Rat) -> Vec<Step<GeneratorLabel, Motion>> {
        let f = self.cox.frame();
        let rf = &self.cox.rf;
        match f.elliptic_data(rest) {
            Some(data) => rf
                .reflections_below_elliptic(&data)
                .into_iter()
                .map(|r| self.refl_step(r, rf.reflection(r)))
                .collect(),
            None => {
                let len = f.length(rest);
                self.window_gens
                    .iter()
                    .filter(|(_, g)| f.length(&f.mul(g, rest)) + 1 == len)
                    .map(|(r, g)| self.refl_step(*r, g.clone()))
                    .collect()
            }
        }
    }
    fn exact(&self) -> bool {
        false
    }
    fn cell(&self, u: &Motion, rest: &Motion) -> Option<crate::isomgroup::Cell> {
        self.cox.classify(u, rest)
    }
}

/// `[1,w]^D` for `D = ⟨R_H ∪ T⟩`, built with reflection length as a lower
/// bound and pruned afterwards.
pub struct DSource<'a> {
    pub cox: &'a CoxeterElement,
    gens: Vec<(GeneratorLabel, Motion)>,
}

impl<'a> DSource<'a> {
    pub fn new(cox: &'a CoxeterElement) -> DSource<'a> {
        let mut gens: Vec<(GeneratorLabel, Motion)> =
            cox.r_h.iter().map(|r| (cox.label_of(*r), cox.rf.reflection(*r))).collect();
        for (i, l) in diag_labels(cox).into_iter().enumerate() {
            gens.push((l, cox.translation_motion(i)));
        }
        DSource { cox, gens }
    }
}

impl IntervalSource for DSource<'_> {
    type Elem = Motion;
    type Label = GeneratorLabel;
    fn identity(&self) -> Motion {
        self.cox.frame().identity()
    }
    fn target(&self) -> Motion {
        self.cox.w_motion.clone()
    }
    fn total_weight(&self) -> Rat {
        Rat::int(self.cox.rank() as i64 + 1)
    }
    fn mul(&self, a: &Motion, b: &Motion) -> Motion {
        self.cox.frame().mul(a, b)
    }
    fn inv(&self, a: &Motion) -> Motion {
        self.cox.frame().inv(a)
    }
    fn steps(&self, rest: &Motion, budget: Rat) -> Vec<Step<GeneratorLabel, Motion>> {
        let f = self.cox.frame();
        self.gens
            .iter()
            .filter(|(l, g)| {
                let r = f.mul(&f.inv(g), rest);
                l.weight + Rat::int(f.length(&r) as i64) <= budget
            })
            .map(|(l, g)| Step { label: *l, weight: l.weight, elem: g.clone() })
            .collect()
    }
    fn exact(&self) -> bool {
        false
    }
    fn cell(&self, u: &Motion, rest: &Motion) -> Option<crate::isomgroup::Cell> {
        self.cox.classify(u, rest)
    }
}

pub fn build_w_interval(
    cox: &CoxeterElement,
    record_covers: bool,
) -> Result<Interval<Motion, GeneratorLabel>, CrystError> {
    let src = WSource::new(cox);
    Ok(build_interval(&src, BuildOptions { record_covers, reduce: false })?)
}

pub fn build_d_interval(
    cox: &CoxeterElement,
) -> Result<Interval<Motion, GeneratorLabel>, CrystError> {
    let src = DSource::new(cox);
    Ok(build_interval(&src, BuildOptions { record_covers: true, reduce: true })?)
}

/// A factor of a diagonal translation along one horizontal component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredTranslation {
    pub component: usize,
    pub vector: RatVec,
    pub source: usize,
    pub weight: Rat,
}

impl FactoredTranslation {
    pub fn label(&self) -> GeneratorLabel {
        GeneratorLabel {
            kind: LabelKind::FactTrans,
            root: self.source,
            index: self.component as i64,
            weight: self.weight,
        }
    }
    pub fn isometry(&self) -> Isometry {
        Isometry::translation(self.vector.clone())
    }
}

/// An irreducible component of the horizontal root subsystem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxisComponent {
    pub rank: usize,
    /// Positive root indices.
    pub roots: Vec<usize>,
}

impl AxisComponent {
    /// Rank of the middle group `Mid(B_n)` attached to a type `A_m`
    /// component: `n = m + 1`.
    pub fn mid_rank(&self) -> usize {
        self.rank + 1
    }
}

/// Irreducible components of the roots orthogonal to the axis direction,
/// ordered by rank and then by smallest root index.
pub fn components(cox: &CoxeterElement) -> Result<Vec<AxisComponent>, CrystError> {
    let hr = &cox.horizontal_roots;
    let mut seen = vec![false; hr.len()];
    let mut out = Vec::new();
    for s in 0..hr.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut members = Vec::new();
        while let Some(x) = stack.pop() {
            members.push(hr[x]);
            for y in 0..hr.len() {
                if !seen[y] && !cox.rs.vector(hr[x]).dot(cox.rs.vector(hr[y])).is_zero() {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        let vecs: Vec<RatVec> = members.iter().map(|&r| cox.rs.vector(r).clone()).collect();
        let rank = crate::exactgeom::canonical_basis(&vecs, cox.ambient()).len();
        out.push(AxisComponent { rank, roots: members });
    }
    out.sort_by(|a, b| a.rank.cmp(&b.rank).then(a.roots.cmp(&b.roots)));
    let expected: Vec<usize> = horizontal_decomposition(&cox.etype)?.iter().map(|c| c.rank).collect();
    let got: Vec<usize> = out.iter().map(|c| c.rank).collect();
    for c in &out {
        if c.roots.len() != c.rank * (c.rank + 1) / 2 {
            return Err(CrystError::Recognition(c.roots[0], "component is not of type A".into()));
        }
    }
    if got != expected {
        return Err(CrystError::Recognition(0, format!("component ranks {got:?} != {expected:?}")));
    }
    Ok(out)
}

fn component_basis(cox: &CoxeterElement, comp: &AxisComponent) -> Vec<RatVec> {
    crate::exactgeom::canonical_basis(
        &comp.roots.iter().map(|&i| cox.rs.vector(i).clone()).collect::<Vec<_>>(),
        cox.ambient(),
    )
}

/// For each translation `t_λ ∈ T`: `λ = λ_0 + Σ λ_i` with `λ_i` the
/// projection onto the span of component `i` and `λ_0` along the axis. The
/// factors are `λ_i + λ_0/k`.
pub fn factored_translations(
    cox: &CoxeterElement,
) -> Result<Vec<Vec<FactoredTranslation>>, CrystError> {
    let comps = components(cox)?;
    let k = comps.len().max(1) as i64;
    let bases: Vec<Vec<RatVec>> = comps.iter().map(|c| component_basis(cox, c)).collect();
    let mut out = Vec::new();
    for (src, lam) in cox.translations.iter().enumerate() {
        let parts: Vec<RatVec> = bases.iter().map(|b| project(lam, b)).collect();
        if parts.iter().any(RatVec::is_zero) {
            return Err(CrystError::DegenerateProjection(src));
        }
        let mut l0 = lam.clone();
        for p in &parts {
            l0 = &l0 - p;
        }
        let share = l0.scale(Rat::new(1, k));
        let group: Vec<FactoredTranslation> = if parts.is_empty() {
            vec![FactoredTranslation { component: 0, vector: lam.clone(), source: src, weight: Rat::int(2) }]
        } else {
            parts
                .iter()
                .enumerate()
                .map(|(i, p)| FactoredTranslation {
                    component: i,
                    vector: p + &share,
                    source: src,
                    weight: Rat::new(2, k),
                })
                .collect()
        };
        out.push(group);
    }
    Ok(out)
}

/// Denominator multiplier needed to pack factored translations.
pub fn factored_den(cox: &CoxeterElement) -> Result<i64, CrystError> {
    use num_integer::Integer;
    let mut d = 1i64;
    for g in factored_translations(cox)? {
        for f in g {
            d = d.lcm(&f.vector.denom_lcm());
        }
    }
    Ok(d)
}

/// All factorizations `t = r' r` of a translation into two reflections of
/// the windowed interval.
pub fn translation_factorizations(
    cox: &CoxeterElement,
    iv: &Interval<Motion, GeneratorLabel>,
    t: &RatVec,
) -> Result<Vec<(Refl, Refl)>, CrystError> {
    let f = cox.frame();
    let tm = f
        .pack(&Isometry::translation(t.clone()))
        .map_err(|_| CrystError::NotATranslation(format!("{t:?}")))?;
    let tid = iv.id_of(&tm).ok_or_else(|| CrystError::NotATranslation(format!("{t:?}")))?;
    let mut out = Vec::new();
    for c in iv.covers.iter().filter(|c| c.hi == tid) {
        let second = c.label.refl().expect("W covers are reflections");
        let lower = iv.covers.iter().find(|d| d.hi == c.lo && d.lo == iv.bottom);
        if let Some(d) = lower {
            let first = d.label.refl().expect("W covers are reflections");
            out.push((second, first));
        }
    }
    // The cover from 1 to r is labeled r; the cover from r to t is labeled
    // r⁻¹t = r'', so t = r·r''. Report as (left, right) with t = left·right.
    let pairs: BTreeSet<(Refl, Refl)> = out.into_iter().map(|(s, fst)| (fst, s)).collect();
    Ok(pairs.into_iter().collect())
}

/// The pairs of [`translation_factorizations`] form one chain
/// `r_{i+1} r_i` with `r_{i+1} = w^{εp} r_i w^{-εp}` for a fixed sign `ε`.
/// Returns `ε` when they do.
pub fn translation_chain_sign(cox: &CoxeterElement, pairs: &[(Refl, Refl)]) -> Option<i64> {
    if pairs.is_empty() {
        return None;
    }
    [1i64, -1].into_iter().find(|&e| {
        let linked = pairs.iter().all(|&(l, r)| cox.shift_refl(r, e) == l);
        let mut idx: Vec<i64> = pairs.iter().filter_map(|&(_, r)| cox.axial_index(r)).collect();
        idx.sort_unstable();
        let step = idx.windows(2).map(|w| w[1] - w[0]).collect::<BTreeSet<_>>();
        linked && idx.len() == pairs.len() && step.len() <= 1
    })
}

/// The pairs share one root `α` and are exactly `r_{α,k+1} r_{α,k}` (or
/// `r_{α,k-1} r_{α,k}`) for a run of consecutive levels `k`.
pub fn translation_level_chain(pairs: &[(Refl, Refl)]) -> bool {
    let Some(&(l0, r0)) = pairs.first() else {
        return false;
    };
    let step = l0.level - r0.level;
    if step.abs() != 1 {
        return false;
    }
    let mut levels: Vec<i64> = Vec::with_capacity(pairs.len());
    for &(l, r) in pairs {
        if l.root != r0.root || r.root != r0.root || l.level - r.level != step {
            return false;
        }
        levels.push(r.level);
    }
    levels.sort_unstable();
    levels.windows(2).all(|w| w[1] - w[0] == 1)
}

/// Per-period counts: the coarse table of the classified elements and the
/// number of elements without a cell.
pub fn period_counts(
    iv: &Interval<Motion, GeneratorLabel>,
    boxes: usize,
) -> Result<(crate::posetengine::CoarseTable, usize), CrystError> {
    let mut rows = [vec![0u64; boxes], vec![0u64; boxes], vec![0u64; boxes]];
    let mut unclassified = 0;
    let half = Rat::new(1, 2);
    for (i, e) in iv.elements.iter().enumerate() {
        let Some(c) = e.cell else {
            unclassified += 1;
            continue;
        };
        let r = match (c.row, c.phase) {
            (Row::Bottom, _) => 0,
            (Row::Middle, Some(p)) if p >= -half && p < half => 1,
            (Row::Middle, Some(_)) => continue,
            (Row::Middle, None) => return Err(PosetError::Unclassifiable(i).into()),
            (Row::Top, _) => 2,
        };
        if c.box_index >= boxes {
            return Err(PosetError::Unclassifiable(i).into());
        }
        rows[r][c.box_index] += 1;
    }
    let [bottom, middle, top] = rows;
    Ok((crate::posetengine::CoarseTable { bottom, middle, top }, unclassified))
}

/// Per-row count summary used by stability checks.
pub fn row_counts(iv: &Interval<Motion, GeneratorLabel>) -> BTreeMap<Row, usize> {
    let mut m = BTreeMap::new();
    for e in &iv.elements {
        if let Some(c) = e.cell {
            *m.entry(c.row).or_insert(0) += 1;
        }
    }
    m
}

/// The middle group of one horizontal component with its isomorphism
/// witness from `Mid(B_n)`: `t_1 ↦ t_i`, `r_{j,j+1} ↦ s_j`.
#[derive(Debug, Clone)]
pub struct ComponentMiddleGroup {
    pub component: usize,
    pub n: usize,
    /// `s_1, …, s_{n-1}`: a path of horizontal reflections with product
    /// `w_h^{(i)}`.
    pub path: Vec<Refl>,
    pub translation: FactoredTranslation,
    /// Images of `t_1, …, t_n`.
    pub t_images: Vec<Motion>,
    perms: HashMap<Vec<usize>, Motion>,
}

impl ComponentMiddleGroup {
    pub fn image(&self, cox: &CoxeterElement, u: &MidElement) -> Motion {
        let f = cox.frame();
        let mut out = f.identity();
        for (j, &l) in u.lambda.iter().enumerate() {
            let g = if l >= 0 { self.t_images[j].clone() } else { f.inv(&self.t_images[j]) };
            for _ in 0..l.abs() {
                out = f.mul(&out, &g);
            }
        }
        f.mul(&out, &self.perms[&u.pi])
    }
}

/// Everything needed to build `[1,w]^F` and `[1,w]^C`, over a frame fine
/// enough to hold the factored translations.
#[derive(Debug, Clone)]
pub struct CrystContext {
    pub cox: CoxeterElement,
    pub components: Vec<AxisComponent>,
    pub factored: Vec<Vec<FactoredTranslation>>,
    /// Index in `T` of the translation split off in `w = t · w_h`.
    pub chosen: usize,
    pub hword: Vec<Refl>,
    pub witnesses: Vec<ComponentMiddleGroup>,
}

impl CrystContext {
    pub fn new(base: &CoxeterElement) -> Result<CrystContext, CrystError> {
        let cox = base.reframed(factored_den(base)?);
        let components = components(&cox)?;
        let factored = factored_translations(&cox)?;
        let (t, hword) = cox.horizontal_factorization()?;
        let chosen = cox
            .translations
            .iter()
            .position(|v| *v == t.translate)
            .ok_or_else(|| CrystError::NotATranslation(format!("{:?}", t.translate)))?;
        let mut witnesses = Vec::new();
        for (i, comp) in components.iter().enumerate() {
            witnesses.push(middle_witness(&cox, i, comp, &factored[chosen][i], &hword)?);
        }
        Ok(CrystContext { cox, components, factored, chosen, hword, witnesses })
    }

    /// Number of horizontal components.
    pub fn k(&self) -> usize {
        self.components.len()
    }

    fn fact_label(&self, m: &Motion) -> Option<GeneratorLabel> {
        let f = self.cox.frame();
        if !f.is_translation(m) {
            return None;
        }
        let v = f.translation_of(m);
        self.factored.iter().flatten().find(|ft| ft.vector == v).map(FactoredTranslation::label)
    }

    /// Label of the image of a middle-group generator.
    fn mid_label(&self, m: &Motion) -> Option<GeneratorLabel> {
        match self.cox.rf.as_reflection(m) {
            Some(r) => Some(self.cox.label_of(r)),
            None => self.fact_label(m),
        }
    }
}

fn motion_product(cox: &CoxeterElement, rs: &[Refl]) -> Motion {
    let f = cox.frame();
    rs.iter().fold(f.identity(), |acc, r| f.mul(&acc, &cox.rf.reflection(*r)))
}

fn middle_witness(
    cox: &CoxeterElement,
    ci: usize,
    comp: &AxisComponent,
    fact: &FactoredTranslation,
    hword: &[Refl],
) -> Result<ComponentMiddleGroup, CrystError> {
    let f = cox.frame();
    let n = comp.mid_rank();
    let fail = |m: &str| CrystError::Recognition(ci, m.to_string());
    let local: Vec<Refl> = hword.iter().copied().filter(|r| comp.roots.contains(&r.root)).collect();
    if local.len() != n - 1 {
        return Err(fail("horizontal word has the wrong number of letters"));
    }
    let target = motion_product(cox, &local);
    let cands: Vec<Refl> = cox.r_h.iter().copied().filter(|r| comp.roots.contains(&r.root)).collect();
    let t1 = f.pack(&fact.isometry())?;
    let lam = &fact.vector;
    let mut path = Vec::new();
    if !search_path(cox, &cands, lam, &target, n - 1, &mut path) {
        return Err(fail("no path of horizontal reflections"));
    }
    let s: Vec<Motion> = path.iter().map(|r| cox.rf.reflection(*r)).collect();
    let mut t_images = vec![t1];
    for j in 0..n - 1 {
        let c = f.mul(&f.mul(&s[j], &t_images[j]), &s[j]);
        t_images.push(c);
    }
    // Defining relations of Mid(B_n).
    let comm = |a: &Motion, b: &Motion| f.mul(a, b) == f.mul(b, a);
    let ts = f.mul(&t_images[0], &s[0]);
    if f.mul(&ts, &ts) != f.mul(&f.mul(&s[0], &t_images[0]), &f.mul(&s[0], &t_images[0])) {
        return Err(fail("t_1 and s_1 fail the four-term relation"));
    }
    for j in 0..n - 1 {
        if j > 0 && !comm(&t_images[0], &s[j]) {
            return Err(fail("t_1 fails to commute with a distant reflection"));
        }
        for l in j + 1..n - 1 {
            let ok = if l == j + 1 {
                let a = f.mul(&f.mul(&s[j], &s[l]), &s[j]);
                let b = f.mul(&f.mul(&s[l], &s[j]), &s[l]);
                a == b && !comm(&s[j], &s[l])
            } else {
                comm(&s[j], &s[l])
            };
            if !ok {
                return Err(fail("path reflections fail the braid relations"));
            }
        }
    }
    // Permutation images by breadth-first search over adjacent transpositions.
    let mut perms: HashMap<Vec<usize>, Motion> = HashMap::new();
    let id: Vec<usize> = (0..n).collect();
    perms.insert(id.clone(), f.identity());
    let mut queue = std::collections::VecDeque::from([id]);
    while let Some(pi) = queue.pop_front() {
        let m = perms[&pi].clone();
        for j in 0..n - 1 {
            let mut q = pi.clone();
            q.swap(j, j + 1);
            if !perms.contains_key(&q) {
                perms.insert(q.clone(), f.mul(&m, &s[j]));
                queue.push_back(q);
            }
        }
    }
    let wit = ComponentMiddleGroup { component: ci, n, path, translation: fact.clone(), t_images, perms };
    let wm = special_element(n).map_err(|e| fail(&e.to_string()))?;
    if wit.image(cox, &wm) != f.mul(&wit.t_images[0], &target) {
        return Err(fail("image of the special element is not t_i w_h^(i)"));
    }
    Ok(wit)
}

fn search_path(
    cox: &CoxeterElement,
    cands: &[Refl],
    lam: &RatVec,
    target: &Motion,
    len: usize,
    path: &mut Vec<Refl>,
) -> bool {
    let f = cox.frame();
    let prefix = motion_product(cox, path);
    let rest = f.mul(&f.inv(&prefix), target);
    if path.len() == len {
        return f.is_translation(&rest) && f.translation_of(&rest).is_zero();
    }
    let j = path.len();
    for &r in cands {
        let a = cox.rs.vector(r.root);
        if path.iter().any(|q| q.root == r.root) {
            continue;
        }
        if (j == 0) == lam.dot(a).is_zero() {
            continue;
        }
        let orth_ok = path.iter().enumerate().all(|(l, q)| {
            cox.rs.vector(q.root).dot(a).is_zero() != (l + 1 == j)
        });
        if !orth_ok {
            continue;
        }
        let next = f.mul(&cox.rf.reflection(r), &rest);
        if f.length(&next) + 1 != f.length(&rest) {
            continue;
        }
        path.push(r);
        if search_path(cox, cands, lam, target, len, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Middle groups of the horizontal components with validated witnesses.
pub fn middle_group_components(cox: &CoxeterElement) -> Result<Vec<ComponentMiddleGroup>, CrystError> {
    Ok(CrystContext::new(cox)?.witnesses)
}

impl ComponentMiddleGroup {
    /// The horizontal reflections `r_{j,j+1}` and `r_{1,n}(1)` generate a
    /// copy of `Cox(Ã_{n-1})`; checks its defining relations on the images.
    pub fn check_affine_symmetric(&self, cox: &CoxeterElement) -> bool {
        let f = cox.frame();
        let n = self.n;
        let mut gens: Vec<Motion> = (0..n - 1)
            .map(|j| self.image(cox, &MidGenerator::R(j, j + 1, 0).element(n)))
            .collect();
        gens.push(self.image(cox, &MidGenerator::R(0, n - 1, 1).element(n)));
        let id = f.identity();
        let order_is = |m: &Motion, k: usize| {
            let mut p = m.clone();
            for _ in 1..k {
                if p == id {
                    return false;
                }
                p = f.mul(&p, m);
            }
            p == id
        };
        if gens.iter().any(|g| cox.rf.as_reflection(g).is_none()) {
            return false;
        }
        if n == 2 {
            let p = f.mul(&gens[0], &gens[1]);
            return f.is_translation(&p) && p != id;
        }
        for a in 0..n {
            for b in a + 1..n {
                let p = f.mul(&gens[a], &gens[b]);
                let adjacent = b == a + 1 || (a == 0 && b == n - 1);
                if !order_is(&p, if adjacent { 3 } else { 2 }) {
                    return false;
                }
            }
        }
        true
    }
}

/// `[1,w]^F` as the product of the special intervals of the middle groups.
/// With no horizontal component the factor group is `D`.
pub fn build_factor_interval(
    ctx: &CrystContext,
) -> Result<Interval<Motion, GeneratorLabel>, CrystError> {
    if ctx.k() == 0 {
        return build_d_interval(&ctx.cox);
    }
    let f = ctx.cox.frame();
    let k = ctx.k() as i64;
    let tw = Rat::new(2, k);
    let mids: Vec<Interval<MidElement, MidGenerator>> = ctx
        .witnesses
        .iter()
        .map(|w| build_special_interval(w.n))
        .collect::<Result<_, _>>()
        .map_err(|e| CrystError::Recognition(0, e.to_string()))?;
    let images: Vec<Vec<Motion>> = ctx
        .witnesses
        .iter()
        .zip(&mids)
        .map(|(w, iv)| iv.elements.iter().map(|e| w.image(&ctx.cox, &e.payload)).collect())
        .collect();
    let weights: Vec<Vec<Rat>> = mids
        .iter()
        .map(|iv| {
            iv.elements
                .iter()
                .map(|e| {
                    let vd = vertical_displacement(&e.payload);
                    e.weight - Rat::int(vd) + tw * Rat::int(vd)
                })
                .collect()
        })
        .collect();
    let mut labels: Vec<HashMap<MidGenerator, GeneratorLabel>> = Vec::new();
    for (w, iv) in ctx.witnesses.iter().zip(&mids) {
        let mut m = HashMap::new();
        for c in &iv.covers {
            if m.contains_key(&c.label) {
                continue;
            }
            let g = w.image(&ctx.cox, &c.label.element(w.n));
            let mut l = ctx
                .mid_label(&g)
                .ok_or_else(|| CrystError::Recognition(w.component, format!("unlabeled image of {}", c.label)))?;
            if l.kind == LabelKind::FactTrans {
                l.weight = tw;
            }
            m.insert(c.label, l);
        }
        labels.push(m);
    }
    let radix: Vec<usize> = mids.iter().map(Interval::len).collect();
    let total: usize = radix.iter().product();
    let digits = |mut id: usize| -> Vec<usize> {
        radix
            .iter()
            .map(|&r| {
                let d = id % r;
                id /= r;
                d
            })
            .collect()
    };
    let mut stride = vec![1usize; radix.len()];
    for i in 1..radix.len() {
        stride[i] = stride[i - 1] * radix[i - 1];
    }
    let mut payloads = Vec::with_capacity(total);
    let mut ws = Vec::with_capacity(total);
    for id in 0..total {
        let d = digits(id);
        let mut m = f.identity();
        let mut w = Rat::zero();
        for (i, &x) in d.iter().enumerate() {
            m = f.mul(&m, &images[i][x]);
            w += weights[i][x];
        }
        payloads.push(m);
        ws.push(w);
    }
    let mut covers = Vec::new();
    for id in 0..total {
        let d = digits(id);
        for (i, iv) in mids.iter().enumerate() {
            for c in iv.covers.iter().filter(|c| c.lo == d[i]) {
                let hi = id + (c.hi * stride[i]) - (c.lo * stride[i]);
                covers.push((id, hi, labels[i][&c.label]));
            }
        }
    }
    let distinct: BTreeSet<&Motion> = payloads.iter().collect();
    if distinct.len() != total {
        return Err(CrystError::Collision);
    }
    let mut iv = Interval::from_covers(payloads, ws, covers);
    if *iv.payload(iv.top) != ctx.cox.w_motion {
        return Err(CrystError::Recognition(0, "factor interval misses w".into()));
    }
    for e in iv.elements.iter_mut() {
        let rest = f.mul(&f.inv(&e.payload), &ctx.cox.w_motion);
        e.cell = ctx.cox.classify(&e.payload, &rest);
    }
    Ok(iv)
}

/// `[1,w]^C`, `[1,w]^W` and `[1,w]^F` over a common frame, with `D = W ∩ F`
/// and the count of elements in each part.
pub struct CrystIntervals {
    pub c: Interval<Motion, GeneratorLabel>,
    pub w: Interval<Motion, GeneratorLabel>,
    pub f: Interval<Motion, GeneratorLabel>,
    /// Ids in `c` of elements lying in `W`.
    pub in_w: Vec<bool>,
    /// Ids in `c` of elements lying in `F`.
    pub in_f: Vec<bool>,
}

impl CrystIntervals {
    pub fn d_count(&self) -> usize {
        self.in_w.iter().zip(&self.in_f).filter(|(a, b)| **a && **b).count()
    }
}

/// `[1,w]^C = [1,w]^W ∪ [1,w]^F`, glued along `[1,w]^D`.
pub fn build_cryst_interval(ctx: &CrystContext) -> Result<CrystIntervals, CrystError> {
    let w = build_w_interval(&ctx.cox, true)?;
    let fi = build_factor_interval(ctx)?;
    let mut ids: HashMap<Motion, usize> = HashMap::new();
    let mut payloads = Vec::new();
    let mut weights = Vec::new();
    let mut cells = Vec::new();
    let mut in_w = Vec::new();
    let mut in_f = Vec::new();
    let mut covers = Vec::new();
    for (part, iv) in [&w, &fi].into_iter().enumerate() {
        let mut local = Vec::with_capacity(iv.len());
        for e in &iv.elements {
            let id = match ids.get(&e.payload) {
                Some(&id) => {
                    if weights[id] != e.weight {
                        return Err(PosetError::NotGraded(weights[id], e.weight).into());
                    }
                    id
                }
                None => {
                    let id = payloads.len();
                    ids.insert(e.payload.clone(), id);
                    payloads.push(e.payload.clone());
                    weights.push(e.weight);
                    cells.push(e.cell);
                    in_w.push(false);
                    in_f.push(false);
                    id
                }
            };
            if part == 0 {
                in_w[id] = true;
            } else {
                in_f[id] = true;
            }
            local.push(id);
        }
        covers.extend(iv.covers.iter().map(|c| (local[c.lo], local[c.hi], c.label)));
    }
    let mut c = Interval::from_covers(payloads.clone(), weights, covers);
    let mut new_w = vec![false; c.len()];
    let mut new_f = vec![false; c.len()];
    for (old, p) in payloads.iter().enumerate() {
        let id = c.id_of(p).expect("present");
        c.elements[id].cell = cells[old];
        new_w[id] = in_w[old];
        new_f[id] = in_f[old];
    }
    c.reduce_covers();
    let out = CrystIntervals { c, w, f: fi, in_w: new_w, in_f: new_f };
    check_unmixed(&out.c)?;
    Ok(out)
}

/// No maximal chain uses both a factored translation and a vertical
/// reflection.
pub fn check_unmixed(iv: &Interval<Motion, GeneratorLabel>) -> Result<(), CrystError> {
    let n = iv.len();
    // Ids are sorted by weight, so covers go from smaller to larger ids.
    let mut f_below = vec![false; n];
    let mut v_below = vec![false; n];
    let mut cs: Vec<&crate::posetengine::Cover<GeneratorLabel>> = iv.covers.iter().collect();
    cs.sort_by_key(|c| c.hi);
    for c in &cs {
        f_below[c.hi] |= f_below[c.lo] || c.label.kind == LabelKind::FactTrans;
        v_below[c.hi] |= v_below[c.lo] || c.label.kind == LabelKind::VRefl;
    }
    let mut f_above = vec![false; n];
    let mut v_above = vec![false; n];
    cs.sort_by_key(|c| std::cmp::Reverse(c.lo));
    for c in &cs {
        f_above[c.lo] |= f_above[c.hi] || c.label.kind == LabelKind::FactTrans;
        v_above[c.lo] |= v_above[c.hi] || c.label.kind == LabelKind::VRefl;
    }
    for c in &iv.covers {
        let mixed = match c.label.kind {
            LabelKind::VRefl => f_below[c.lo] || f_above[c.hi],
            LabelKind::FactTrans => v_below[c.lo] || v_above[c.hi],
            _ => false,
        };
        if mixed {
            return Err(CrystError::Mixed);
        }
    }
    Ok(())
}

/// Joins of atom pairs, split by the kind of pair. Each count is the
/// number of pairs whose join was found.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AtomAudit {
    /// Both atoms lie in the factor group.
    pub factor: usize,
    /// One atom is a factored translation.
    pub translation: usize,
    /// A reflection pair with a vertical member.
    pub reflection: usize,
    /// Pairs without a join.
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub group: GroupKind,
    pub etype: String,
    pub window: i64,
    pub elements: usize,
    pub lattice: bool,
    /// Bowties as payload keys `[a, b, c, d]`.
    pub bowties: Vec<[String; 4]>,
    pub atom_audit: AtomAudit,
}

/// The outer rows and the middle elements with phase in `[-lim, lim)`.
pub fn window_core(iv: &Interval<Motion, GeneratorLabel>, lim: Rat) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(iv.len());
    for (i, e) in iv.elements.iter().enumerate() {
        let keep = match e.cell {
            Some(c) if c.row == Row::Middle => c.phase.map_or(true, |p| p >= -lim && p < lim),
            _ => true,
        };
        s.set(i, keep);
    }
    s
}

/// Bowties among pairs `(x, y)` with `x` in the central band
/// `[-1/2, 1/2)` and `y` in the core `[-(c-2), c-2)`, bounds taken in
/// `[-(c-1), c-1)`. Vertical reflections below an element sit up to one
/// period away from its phase, and so do joins. Other
/// middle pairs are conjugate to these under `w^p`.
fn collect_bowties(iv: &Interval<Motion, GeneratorLabel>, window: i64) -> Vec<Bowtie> {
    use rayon::prelude::*;
    let core = window_core(iv, Rat::int(window - 2).max(Rat::new(1, 2)));
    let outer = window_core(iv, Rat::int(window - 1));
    let band = window_core(iv, Rat::new(1, 2));
    let idx = iv.order_index();
    let xs: Vec<usize> = band.ones().collect();
    let mut found: Vec<Bowtie> = xs
        .par_iter()
        .flat_map_iter(|&x| {
            let (core, outer, idx) = (&core, &outer, idx);
            core.ones()
                .filter(move |&y| !idx.up[x].contains(y) && !idx.up[y].contains(x))
                .filter_map(move |y| iv.bowtie_within(x, y, outer))
        })
        .collect();
    let norm = |b: &Bowtie| (b.a.min(b.b), b.a.max(b.b), b.c.min(b.d), b.c.max(b.d));
    found.sort_by_key(norm);
    found.dedup_by_key(|b| norm(b));
    found
}

fn audit(iv: &Interval<Motion, GeneratorLabel>, window: i64) -> AtomAudit {
    let band = window_core(iv, Rat::new(1, 2));
    let core = window_core(iv, Rat::int(window - 2).max(Rat::new(1, 2)));
    let outer = window_core(iv, Rat::int(window - 1));
    let kind: HashMap<usize, LabelKind> = iv
        .covers
        .iter()
        .filter(|c| c.lo == iv.bottom)
        .map(|c| (c.hi, c.label.kind))
        .collect();
    let mut atoms: Vec<usize> = kind.keys().copied().collect();
    atoms.sort_unstable();
    let in_factor = |k: LabelKind| matches!(k, LabelKind::HRefl | LabelKind::FactTrans | LabelKind::DiagTrans);
    let mut out = AtomAudit::default();
    for (i, &x) in atoms.iter().enumerate() {
        for &y in &atoms[i + 1..] {
            let xy_ok = (band.contains(x) && core.contains(y)) || (band.contains(y) && core.contains(x));
            if !xy_ok {
                continue;
            }
            let (kx, ky) = (kind[&x], kind[&y]);
            let mut ub = iv.upper_bounds(x, y);
            ub.intersect_with(&outer);
            let idx = iv.order_index();
            let joined = ub.ones().next().map_or(false, |z| {
                let mut rest = ub.clone();
                rest.difference_with(&idx.up[z]);
                rest.count_ones(..) == 0
            });
            if !joined {
                out.failed += 1;
            } else if in_factor(kx) && in_factor(ky) {
                out.factor += 1;
            } else if kx == LabelKind::FactTrans || ky == LabelKind::FactTrans {
                out.translation += 1;
            } else {
                out.reflection += 1;
            }
        }
    }
    out
}

fn motion_key(cox: &CoxeterElement, m: &Motion) -> String {
    cox.frame().unpack(m).key()
}

/// Smallest window for which the core of [`verify_lattice`] is nonempty
/// and separated from the window edge.
pub const MIN_LATTICE_WINDOW: i64 = 3;

/// Lattice check of `[1,w]^G` for `G ∈ {W, D, F, C}` with vertical
/// reflections drawn from `window` periods on each side. Middle elements are
/// checked up to conjugation by `w^p`.
pub fn verify_lattice(
    base: &CoxeterElement,
    which: GroupKind,
    window: i64,
) -> Result<LatticeReport, CrystError> {
    if window < MIN_LATTICE_WINDOW {
        return Err(CrystError::Window(window));
    }
    let cox = CoxeterElement::with_order(&base.etype, &base.simple_order, window)?;
    let ctx = CrystContext::new(&cox)?;
    let iv = match which {
        GroupKind::W => build_w_interval(&ctx.cox, true)?,
        GroupKind::D => build_d_interval(&ctx.cox)?,
        GroupKind::F => build_factor_interval(&ctx)?,
        GroupKind::C => build_cryst_interval(&ctx)?.c,
        GroupKind::H => {
            return Err(CrystError::NotATranslation("w lies outside H".into()));
        }
    };
    let bowties = collect_bowties(&iv, ctx.cox.window);
    let atom_audit = audit(&iv, window);
    let key = |i: usize| motion_key(&ctx.cox, iv.payload(i));
    Ok(LatticeReport {
        group: which,
        etype: cox.etype.to_string(),
        window: ctx.cox.window,
        elements: iv.len(),
        lattice: bowties.is_empty(),
        bowties: bowties.iter().map(|b| [key(b.a), key(b.b), key(b.c), key(b.d)]).collect(),
        atom_audit,
    })
}
