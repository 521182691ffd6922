//! The acceptance suite: one check per criterion, each compared against the
//! golden tables or an exhaustive oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use anyhow::{anyhow, ensure, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crystgar::crystlat::{
    build_factor_interval, build_w_interval, components, translation_chain_sign,
    translation_factorizations, translation_level_chain, verify_lattice, CrystContext, GroupKind,
};
use crystgar::dualgarside::{
    build_spherical_interval, neg, pos, GarsideData, Letter, NormalForm, SphericalSource,
};
use crystgar::isomgroup::{reflection_length, reflections_up_to_level, Motion};
use crystgar::midnc::MidSource;
use crystgar::posetengine::{Interval, IntervalSource};
use crystgar::rootdata::{horizontal_decomposition, Family};

use crate::commands::{self, coxeter, parse_type, IntervalRequest};
use crate::golden;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    /// A failure documented as unattainable; it does not fail the suite.
    pub expected_failure: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, r: Result<String>) -> Check {
        match r {
            Ok(detail) => Check { name, status: Status::Pass, expected_failure: false, detail },
            Err(e) => Check { name, status: Status::Fail, expected_failure: false, detail: format!("{e:#}") },
        }
    }

    pub fn is_unexpected_failure(&self) -> bool {
        self.status == Status::Fail && !self.expected_failure
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "status": format!("{:?}", self.status).to_lowercase(),
            "expected_failure": self.expected_failure,
            "detail": self.detail,
        })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.status, self.expected_failure) {
            (Status::Pass, _) => "PASS",
            (Status::Fail, false) => "FAIL",
            (Status::Fail, true) => "FAIL (documented)",
            (Status::Skipped, _) => "SKIP",
        };
        write!(f, "[{s}] {}: {}", self.name, self.detail)
    }
}

pub const E8_COARSE: &str = "E8 coarse table";
pub const G2_COARSE: &str = "G2 coarse table";
pub const HORIZONTAL: &str = "horizontal decompositions";
pub const MID_SIZES: &str = "Mid(B_n) intervals and NC_B isomorphism";
pub const E8_FACTOR: &str = "E8 factor interval";
pub const LATTICE: &str = "lattice verification";
pub const G2_PRESENTATION: &str = "G2 dual presentation";
pub const HURWITZ: &str = "Hurwitz transitivity";
pub const NF_SUITE: &str = "Garside normal forms";
pub const REFLECTION_LENGTH: &str = "reflection length";
pub const TRANSLATION_CHAINS: &str = "translation chains";

/// Window used for the E8 coarse grid. Middle families are counted in the
/// central band, which one period on each side already covers.
pub const E8_WINDOW: i64 = 1;

pub fn e8_coarse(window: i64) -> Result<String> {
    let req = IntervalRequest {
        etype: parse_type("E8", None, None)?,
        group: GroupKind::W,
        window,
        coarse: true,
        poset: false,
    };
    let v = commands::interval_report(&req)?;
    let want = serde_json::to_value(golden::coarse(golden::COARSE_E8)?)?;
    ensure!(v["coarse"] == want, "got {}", v["coarse"]);
    Ok(format!("{} elements in window {window}, grid matches", v["elements"]))
}

pub fn g2_coarse() -> Result<String> {
    let req = IntervalRequest {
        etype: parse_type("G2", None, None)?,
        group: GroupKind::W,
        window: 2,
        coarse: true,
        poset: false,
    };
    let v = commands::interval_report(&req)?;
    let want = serde_json::to_value(golden::coarse(golden::COARSE_G2)?)?;
    ensure!(v["coarse"] == want, "got {}", v["coarse"]);
    Ok("1 2 / 6 6 / 2 1".into())
}

pub fn horizontal() -> Result<String> {
    let rows = golden::horizontal()?;
    for (name, want) in &rows {
        let t = parse_type(name, None, None)?;
        let cox = coxeter(&t, 2)?;
        let mut got: Vec<String> = components(&cox)?.iter().map(|c| format!("A{}", c.rank)).collect();
        got.sort();
        ensure!(&got == want, "{name}: got {got:?}, want {want:?}");
        // the diagram with the vertical node removed has the same pieces up to type
        let mut diag: Vec<String> = horizontal_decomposition(&t)?
            .iter()
            .filter(|c| c.rank > 0)
            .map(|c| c.name())
            .collect();
        diag.sort();
        ensure!(&diag == want, "{name}: diagram gives {diag:?}");
    }
    Ok(format!("{} types", rows.len()))
}

pub fn mid_sizes() -> Result<String> {
    let counts = golden::ncb_counts()?;
    for &(n, want) in &counts {
        let v = commands::ncb_report(n, true)?;
        ensure!(v["count"] == json!(want), "NC_B({n}) has {}", v["count"]);
        if n < 2 {
            continue;
        }
        let m = commands::mid_report(n)?;
        ensure!(m["size"] == json!(want), "Mid(B{n}) interval has {}", m["size"]);
        ensure!(m["lattice"] == json!(true), "Mid(B{n}) interval is not a lattice");
        if n <= 5 {
            ensure!(m["isomorphic_to_ncb"] == json!(true), "Mid(B{n}) is not isomorphic to NC_B({n})");
        }
    }
    Ok(format!("n <= {}, isomorphism for n <= 5", counts.last().map_or(0, |c| c.0)))
}

pub fn e8_factor() -> Result<String> {
    for (name, want, ranks) in golden::factor_sizes()? {
        let cox = coxeter(&parse_type(&name, None, None)?, 2)?;
        let ctx = CrystContext::new(&cox)?;
        let mut got_ranks: Vec<usize> = ctx.witnesses.iter().map(|w| w.n).collect();
        got_ranks.sort();
        ensure!(got_ranks == ranks, "{name}: middle groups of ranks {got_ranks:?}");
        let iv = build_factor_interval(&ctx)?;
        ensure!(iv.len() == want, "{name}: factor interval has {}", iv.len());
        let product: usize = ranks.iter().map(|&n| golden_ncb(n)).product::<Result<usize>>()?;
        ensure!(product == want, "{name}: product of NC_B sizes is {product}");
    }
    Ok("30240 = 6 * 20 * 252".into())
}

fn golden_ncb(n: usize) -> Result<usize> {
    golden::ncb_counts()?
        .into_iter()
        .find(|c| c.0 == n)
        .map(|c| c.1)
        .ok_or_else(|| anyhow!("no NC_B count for {n}"))
}

/// Euclidean types of rank at most four.
pub const LOW_RANK: [&str; 14] =
    ["A1", "A2", "C2", "G2", "A3", "A3(2,2)", "B3", "C3", "A4", "A4(3,2)", "B4", "C4", "D4", "F4"];

pub fn lattice() -> Result<String> {
    for name in LOW_RANK {
        let cox = coxeter(&parse_type(name, None, None)?, 2)?;
        for window in [3, 4] {
            let r = verify_lattice(&cox, GroupKind::C, window)?;
            ensure!(r.lattice, "{name}: C interval has bowtie {:?} (window {window})", r.bowties.first());
            ensure!(r.atom_audit.failed == 0, "{name}: atom pairs without join (window {window})");
        }
    }
    let b3 = coxeter(&parse_type("B3", None, None)?, 2)?;
    let r = verify_lattice(&b3, GroupKind::W, 3)?;
    ensure!(!r.lattice && !r.bowties.is_empty(), "B3: W interval has no bowtie");
    Ok(format!("C lattices for {} types at windows 3 and 4; B3 W bowtie found", LOW_RANK.len()))
}

/// Adds `k` to every numeric subscript.
fn shift_word(w: &[String], k: i64) -> Vec<String> {
    w.iter()
        .map(|g| match g.split_once("_{") {
            Some((head, rest)) => match rest.trim_end_matches('}').parse::<i64>() {
                Ok(i) => format!("{head}_{{{}}}", i + k),
                Err(_) => g.clone(),
            },
            None => g.clone(),
        })
        .collect()
}

pub fn g2_presentation() -> Result<String> {
    let t = parse_type("G2", None, None)?;
    let p = commands::presentation_of(&t, GroupKind::W, 2)?;
    let period = coxeter(&t, 2)?.index_period;
    let fams: Vec<BTreeSet<Vec<String>>> =
        p.families().into_iter().map(|f| f.into_iter().collect()).collect();
    let golden = golden::g2_relations();
    for (kind, line) in &golden {
        let found = (-3..=3).any(|j| {
            let want: BTreeSet<Vec<String>> = line.iter().map(|w| shift_word(w, j * period)).collect();
            fams.iter().any(|f| match kind.as_str() {
                // translation chains are infinite; the window shows a segment
                "translation" => want.is_subset(f),
                _ => *f == want,
            })
        });
        ensure!(found, "no family matches {kind} {line:?}");
    }
    Ok(format!("{} families matched", golden.len()))
}

pub fn hurwitz() -> Result<String> {
    let mut parts = Vec::new();
    for name in ["B2", "B3"] {
        let (family, n) = commands::parse_spherical(name, None)?;
        let v = commands::spherical_hurwitz_report(family, n)?;
        ensure!(v["transitive"] == json!(true), "{name}: orbit is not everything: {v}");
        parts.push(format!("{name}: {} factorizations", v["factorizations"]));
    }
    let v = commands::hurwitz_report(&parse_type("G2", None, None)?, 2)?;
    ensure!(v["transitive"] == json!(true), "G2: orbit is not everything: {v}");
    parts.push(format!("G2: {} classes mod period", v["factorizations_mod_period"]));
    Ok(parts.join(", "))
}

/// Classes of atom words of length `len` under `ab ↔ cd` for equal
/// rank-two products.
fn rewriting_classes<S: IntervalSource>(src: &S, iv: &Interval<S::Elem, S::Label>, len: usize) -> Vec<Vec<Vec<usize>>>
where
    S::Elem: Clone + Eq + std::hash::Hash + Ord + fmt::Debug,
    S::Label: Clone + Ord + fmt::Debug,
{
    let atoms = iv.atoms();
    let mut by_product: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &a in &atoms {
        for &b in &atoms {
            if let Some(id) = iv.id_of(&src.mul(iv.payload(a), iv.payload(b))) {
                if iv.weight(id) == iv.weight(a) + iv.weight(b) {
                    by_product.entry(id).or_default().push((a, b));
                }
            }
        }
    }
    let rewrite: HashMap<(usize, usize), &Vec<(usize, usize)>> =
        by_product.values().flat_map(|ps| ps.iter().map(move |&p| (p, ps))).collect();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| atoms.iter().map(move |&a| [w.clone(), vec![a]].concat()))
            .collect();
    }
    let index: HashMap<&Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut seen = vec![false; words.len()];
    let mut out = Vec::new();
    for s in 0..words.len() {
        if std::mem::replace(&mut seen[s], true) {
            continue;
        }
        let mut members = vec![words[s].clone()];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for p in 0..len.saturating_sub(1) {
                let w = &words[i];
                let Some(alts) = rewrite.get(&(w[p], w[p + 1])) else { continue };
                for &(x, y) in alts.iter() {
                    let mut v = w.clone();
                    v[p] = x;
                    v[p + 1] = y;
                    let j = index[&v];
                    if !std::mem::replace(&mut seen[j], true) {
                        members.push(v);
                        stack.push(j);
                    }
                }
            }
        }
        out.push(members);
    }
    out
}

fn nf_unique<S: IntervalSource>(src: &S, iv: &Interval<S::Elem, S::Label>, max_len: usize) -> Result<usize>
where
    S::Elem: Clone + Eq + std::hash::Hash + Ord + fmt::Debug,
    S::Label: Clone + Ord + fmt::Debug,
{
    let g = GarsideData::new(src, iv)?;
    let mut words = 0;
    for len in 1..=max_len {
        let mut seen: HashSet<NormalForm> = HashSet::new();
        for class in rewriting_classes(src, iv, len) {
            let mut nfs = class.iter().map(|w| g.normal_form(&w.iter().map(|&a| pos(a)).collect::<Vec<_>>()));
            let first = nfs.next().ok_or_else(|| anyhow!("empty class"))??;
            for nf in nfs {
                ensure!(nf? == first, "normal form varies within a rewriting class");
            }
            ensure!(g.is_left_greedy(&first), "normal form is not left-greedy");
            ensure!(seen.insert(first), "two rewriting classes share a normal form");
            words += class.len();
        }
    }
    Ok(words)
}

fn nf_random<S: IntervalSource>(src: &S, iv: &Interval<S::Elem, S::Label>, trials: usize, rng: &mut ChaCha8Rng) -> Result<()>
where
    S::Elem: Clone + Eq + std::hash::Hash + Ord + fmt::Debug,
    S::Label: Clone + Ord + fmt::Debug,
{
    let g = GarsideData::new(src, iv)?;
    let d = iv.payload(g.delta).clone();
    for _ in 0..trials {
        let len = rng.gen_range(0..10);
        let word: Vec<Letter> =
            (0..len).map(|_| Letter { simple: rng.gen_range(0..iv.len()), inverse: rng.gen_bool(0.3) }).collect();
        let nf = g.normal_form(&word)?;
        ensure!(g.is_left_greedy(&nf), "not left-greedy");
        ensure!(g.evaluate(&nf) == g.evaluate_word(&word), "normal form changes the element");
        let mut again = vec![if nf.power >= 0 { pos(g.delta) } else { neg(g.delta) }; nf.power.unsigned_abs() as usize];
        again.extend(nf.simples.iter().map(|&u| pos(u)));
        ensure!(g.normal_form(&again)? == nf, "normal form is not idempotent");
        let conj = [vec![neg(g.delta)], word.clone(), vec![pos(g.delta)]].concat();
        let cnf = g.normal_form(&conj)?;
        ensure!(cnf == g.conjugate_nf(&nf), "conjugation by the Garside element is not termwise");
        ensure!(g.evaluate(&cnf) == src.mul(&src.mul(&src.inv(&d), &g.evaluate_word(&word)), &d), "conjugate value");
    }
    Ok(())
}

pub fn nf_suite(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words = 0;
    let mut trials = 0;
    for (n, len) in [(2usize, 5usize), (3, 4), (4, 3)] {
        let src = SphericalSource::new(Family::B, n)?;
        let iv = build_spherical_interval(&src)?;
        words += nf_unique(&src, &iv, len)?;
        nf_random(&src, &iv, 3400, &mut rng)?;
        trials += 3400;
    }
    for n in 2..=4 {
        let src = MidSource::new(n);
        let iv = crystgar::midnc::build_special_interval(n)?;
        words += nf_unique(&src, &iv, if n == 2 { 5 } else { 3 })?;
    }
    Ok(format!("{words} words in rewriting classes, {trials} random elements"))
}

/// Rank-three-or-less types whose window elements are checked.
pub const RANK_THREE: [&str; 8] = ["A1", "A2", "C2", "G2", "A3", "A3(2,2)", "B3", "C3"];

pub fn reflection_length_check() -> Result<String> {
    let mut total = 0;
    for name in RANK_THREE {
        let cox = coxeter(&parse_type(name, None, None)?, 2)?;
        let f = cox.frame();
        let iv = build_w_interval(&cox, true)?;
        let reach = iv
            .covers
            .iter()
            .filter_map(|c| c.label.refl())
            .map(|r| r.level.abs())
            .max()
            .unwrap_or(0)
            + 1;
        let gens: Vec<Motion> =
            reflections_up_to_level(&cox.rs, reach).into_iter().map(|r| cox.rf.reflection(r)).collect();
        let one: HashSet<&Motion> = gens.iter().collect();
        let two: HashSet<Motion> = gens.iter().flat_map(|a| gens.iter().map(|b| f.mul(a, b))).collect();
        for (i, e) in iv.elements.iter().enumerate() {
            let u = &e.payload;
            let dist = if *u == f.identity() {
                0
            } else if one.contains(u) {
                1
            } else if two.contains(u) {
                2
            } else if gens.iter().any(|r| two.contains(&f.mul(r, u))) {
                3
            } else {
                // the interval chain gives 4 from above
                4
            };
            let formula = reflection_length(&f.unpack(u));
            ensure!(formula == dist, "{name}: element {i} has formula {formula}, distance {dist}");
            ensure!(f.length(u) == dist, "{name}: packed length differs at {i}");
            ensure!(iv.weight(i).to_int() == Some(dist as i64), "{name}: chain length differs at {i}");
        }
        total += iv.len();
    }
    Ok(format!("{total} window elements in {} types", RANK_THREE.len()))
}

/// Per type: whether every translation chain is `r_{k±1} r_k` with
/// `r_{k±1} = w^{±p} r_k w^{∓p}`.
pub fn translation_chains_by_type(names: &[&str]) -> Result<Vec<(String, bool)>> {
    names
        .iter()
        .map(|name| {
            let cox = coxeter(&parse_type(name, None, None)?, 2)?;
            let iv = build_w_interval(&cox, true)?;
            let mut ok = true;
            for t in &cox.translations {
                let pairs = translation_factorizations(&cox, &iv, t)?;
                ok &= !pairs.is_empty()
                    && translation_level_chain(&pairs)
                    && translation_chain_sign(&cox, &pairs).is_some();
            }
            Ok((name.to_string(), ok))
        })
        .collect()
}

pub fn translation_chains() -> Check {
    let r = translation_chains_by_type(&["G2", "A2"]);
    let mut c = Check::new(
        TRANSLATION_CHAINS,
        r.as_ref().map_err(|e| anyhow!("{e:#}")).and_then(|rows| {
            let bad: Vec<&str> = rows.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
            ensure!(
                bad.is_empty(),
                "chains fail for {}: consecutive levels hold, but w^p shifts these roots by more than one level",
                bad.join(", ")
            );
            Ok("G2 and A2".to_string())
        }),
    );
    // Documented: the A2 translations have |τ·α| = 2, so w^p skips a level.
    if let Ok(rows) = &r {
        c.expected_failure = rows.iter().all(|(n, ok)| *ok == (n != "A2"));
    }
    c
}

pub fn run_all(full: bool, seed: u64) -> Vec<Check> {
    let e8 = if full {
        Check::new(E8_COARSE, e8_coarse(E8_WINDOW))
    } else {
        Check {
            name: E8_COARSE,
            status: Status::Skipped,
            expected_failure: false,
            detail: "long run; use selftest --full".into(),
        }
    };
    vec![
        e8,
        Check::new(G2_COARSE, g2_coarse()),
        Check::new(HORIZONTAL, horizontal()),
        Check::new(MID_SIZES, mid_sizes()),
        Check::new(E8_FACTOR, e8_factor()),
        Check::new(LATTICE, lattice()),
        Check::new(G2_PRESENTATION, g2_presentation()),
        Check::new(HURWITZ, hurwitz()),
        Check::new(NF_SUITE, nf_suite(seed)),
        Check::new(REFLECTION_LENGTH, reflection_length_check()),
        translation_chains(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subscript_shift() {
        let w = vec!["a_{1}".to_string(), "f_{-}".to_string(), "c_{0}".to_string()];
        assert_eq!(shift_word(&w, -4), ["a_{-3}", "f_{-}", "c_{-4}"]);
    }

    #[test]
    fn g2_checks() {
        assert!(g2_coarse().is_ok());
        assert!(g2_presentation().is_ok());
    }
}
