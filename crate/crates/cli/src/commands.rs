//! Report builders. Every command produces a JSON value; text output is
//! rendered from that value so cached and fresh runs print the same bytes.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use crystgar::crystlat::{
    build_cryst_interval, build_d_interval, build_factor_interval, build_w_interval, components,
    period_counts, verify_lattice, CrystContext, CrystError, GroupKind,
};
use crystgar::dualgarside::{
    build_spherical_interval, chain_words, combined_presentation, hurwitz_orbit,
    minimal_factorizations, neg, part_presentations, period_canonical, pos, spherical_coxeter,
    w_presentation, DualError, Factorization, GarsideData, Letter, MotionLetters, NormalForm,
    Presentation, SphericalSource,
};
use crystgar::isomgroup::{default_order, CoxeterElement, GeneratorLabel, Motion};
use crystgar::midnc::{
    build_special_interval, ncb_enumerate, ncb_from_element, MidSource,
};
use crystgar::posetengine::{Interval, IntervalSource};
use crystgar::rootdata::{EuclideanType, Family};

use crate::cache::{Cache, SCHEMA_VERSION};

/// `--type` may carry the rank (`E8`, `A3(2,2)`) or take it from `--rank`
/// and `--bigon`.
pub fn parse_type(ty: &str, rank: Option<usize>, bigon: Option<(usize, usize)>) -> Result<EuclideanType> {
    let mut s = ty.to_string();
    if let Some(n) = rank {
        s.push_str(&n.to_string());
    }
    if let Some((p, q)) = bigon {
        s.push_str(&format!("({p},{q})"));
    }
    s.parse::<EuclideanType>().map_err(|e| anyhow!("invalid type {s:?}: {e}"))
}

/// Spherical type such as `B3`, or a family letter with `--rank`.
pub fn parse_spherical(ty: &str, rank: Option<usize>) -> Result<(Family, usize)> {
    let mut chars = ty.chars();
    let family = match chars.next() {
        Some('A') => Family::A,
        Some('B') => Family::B,
        Some('C') => Family::C,
        Some('D') => Family::D,
        Some('E') => Family::E,
        Some('F') => Family::F,
        Some('G') => Family::G,
        _ => bail!("invalid spherical type {ty:?}"),
    };
    let rest = chars.as_str();
    let n = match (rest.is_empty(), rank) {
        (true, Some(n)) => n,
        (false, None) => rest.parse().with_context(|| format!("invalid rank in {ty:?}"))?,
        _ => bail!("give the rank either in --type or in --rank"),
    };
    Ok((family, n))
}

pub fn parse_bigon(s: &str) -> Result<(usize, usize)> {
    let (p, q) = s.split_once(',').ok_or_else(|| anyhow!("expected p,q"))?;
    Ok((p.trim().parse()?, q.trim().parse()?))
}

pub fn coxeter(t: &EuclideanType, window: i64) -> Result<CoxeterElement> {
    Ok(CoxeterElement::with_order(t, &default_order(t), window)?)
}

/// Adds a remediation hint to window-exhaustion errors.
fn hint<E: std::error::Error + Send + Sync + 'static>(e: E) -> anyhow::Error {
    let exhausted = {
        let any: &dyn std::any::Any = &e;
        matches!(any.downcast_ref::<CrystError>(), Some(CrystError::Window(_)))
            || matches!(any.downcast_ref::<DualError>(), Some(DualError::WindowExhausted))
    };
    if exhausted {
        anyhow::Error::new(e).context("the window is too small; increase --window")
    } else {
        anyhow::Error::new(e)
    }
}

fn component_names(cox: &CoxeterElement) -> Result<Vec<String>> {
    let mut names: Vec<String> =
        components(cox).map_err(hint)?.iter().map(|c| format!("A{}", c.rank)).collect();
    names.sort();
    Ok(names)
}

pub fn roots_report(t: &EuclideanType, window: i64) -> Result<Value> {
    let cox = coxeter(t, window)?;
    let rs = &cox.rs;
    Ok(json!({
        "type": t.to_string(),
        "rank": t.rank,
        "positive_roots": rs.num_positive(),
        "simple_roots": rs.simple_vectors(),
        "highest_root": rs.highest_root().vector,
        "horizontal_components": component_names(&cox)?,
        "period": cox.period_p,
        "axial_period": cox.index_period,
        "horizontal_reflections": cox.r_h.len(),
        "vertical_reflections": cox.r_v.len(),
        "translations": cox.translations.len(),
        "window": window,
    }))
}

pub struct IntervalRequest {
    pub etype: EuclideanType,
    pub group: GroupKind,
    pub window: i64,
    pub coarse: bool,
    pub poset: bool,
}

impl IntervalRequest {
    pub fn cache_key(&self) -> String {
        Cache::key(&[
            ("command", "interval".into()),
            ("type", self.etype.to_string()),
            ("rank", self.etype.rank.to_string()),
            ("bigon", format!("{:?}", self.etype.bigon)),
            ("order", format!("{:?}", default_order(&self.etype))),
            ("group", format!("{:?}", self.group)),
            ("window", self.window.to_string()),
            ("coarse", self.coarse.to_string()),
            ("poset", self.poset.to_string()),
        ])
    }
}

pub fn interval_report(req: &IntervalRequest) -> Result<Value> {
    let cox = coxeter(&req.etype, req.window)?;
    let record = req.poset;
    let (iv, frame_cox): (Interval<Motion, GeneratorLabel>, CoxeterElement) = match req.group {
        GroupKind::H => bail!("w does not lie in H; `roots` reports its generators"),
        GroupKind::W => (build_w_interval(&cox, record).map_err(hint)?, cox.clone()),
        GroupKind::D => (build_d_interval(&cox).map_err(hint)?, cox.clone()),
        GroupKind::F | GroupKind::C => {
            let ctx = CrystContext::new(&cox).map_err(hint)?;
            let iv = if req.group == GroupKind::F {
                build_factor_interval(&ctx).map_err(hint)?
            } else {
                build_cryst_interval(&ctx).map_err(hint)?.c
            };
            (iv, ctx.cox.clone())
        }
    };
    let boxes = req.etype.rank;
    let (per_period, unclassified) = period_counts(&iv, boxes).map_err(hint)?;
    let mut out = json!({
        "schema": SCHEMA_VERSION,
        "type": req.etype.to_string(),
        "group": format!("{:?}", req.group),
        "window": req.window,
        "elements": iv.len(),
        "top_weight": iv.weight(iv.top),
        "period_counts": per_period,
        "unclassified": unclassified,
    });
    if req.coarse {
        let t = iv.coarse_table(boxes).context("coarse table needs every element classified")?;
        out["coarse"] = serde_json::to_value(t)?;
    }
    if req.poset {
        let f = frame_cox.frame();
        out["poset"] = serde_json::to_value(iv.to_json(|m| f.unpack(m).key(), |l| l.to_string()))?;
    }
    Ok(out)
}

pub fn lattice_report(t: &EuclideanType, group: GroupKind, window: i64) -> Result<Value> {
    let cox = coxeter(t, 2)?;
    let r = verify_lattice(&cox, group, window).map_err(hint)?;
    Ok(serde_json::to_value(r)?)
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn ncb_report(n: usize, count_only: bool) -> Result<Value> {
    let parts = ncb_enumerate(n)?;
    let mut out = json!({ "n": n, "count": parts.len() });
    if !count_only {
        out["partitions"] = parts.iter().map(|p| p.to_string()).collect();
    }
    Ok(out)
}

/// Special interval of `Mid(B_n)` and its comparison with `NC_B(n)`.
pub fn mid_report(n: usize) -> Result<Value> {
    let iv = build_special_interval(n)?;
    let parts = iv
        .elements
        .iter()
        .map(|e| ncb_from_element(&e.payload))
        .collect::<Result<Vec<_>, _>>()?;
    let all: BTreeSet<_> = ncb_enumerate(n)?.into_iter().collect();
    let bijective = parts.iter().cloned().collect::<BTreeSet<_>>() == all && parts.len() == all.len();
    let order_preserving = bijective
        && (0..iv.len()).all(|a| (0..iv.len()).all(|b| iv.leq(a, b) == parts[a].refines(&parts[b])));
    Ok(json!({
        "n": n,
        "size": iv.len(),
        "central_binomial": binom(2 * n as u64, n as u64),
        "lattice": iv.is_lattice().is_ok(),
        "isomorphic_to_ncb": order_preserving,
    }))
}

pub fn spherical_hurwitz_report(family: Family, rank: usize) -> Result<Value> {
    let (g, w) = spherical_coxeter(family, rank)?;
    let letters: Vec<Motion> = g.letters.keys().cloned().collect();
    let all = minimal_factorizations(&g, &letters, &w, rank);
    let first = all.iter().next().ok_or_else(|| anyhow!("no factorizations"))?;
    let f = Factorization::new(&g, first.clone())?;
    let o = hurwitz_orbit(&g, &f, |w| Some(w.to_vec()), &all)?;
    Ok(json!({
        "group": format!("spherical {family}{rank}"),
        "factorizations": all.len(),
        "orbit": o.members.len(),
        "transitive": o.transitive,
    }))
}

/// Orbit of the windowed minimal factorizations, read modulo the period.
pub fn hurwitz_report(t: &EuclideanType, window: i64) -> Result<Value> {
    let cox = coxeter(t, window)?;
    let iv = build_w_interval(&cox, true).map_err(hint)?;
    let g = MotionLetters::window(&cox);
    let canon = |word: &[Motion]| period_canonical(&cox, &g, word);
    let all: BTreeSet<Vec<Motion>> = chain_words(&iv)
        .into_iter()
        .filter_map(|ls| {
            let word: Option<Vec<Motion>> = ls.iter().map(|l| l.refl().map(|r| cox.rf.reflection(r))).collect();
            canon(&word?)
        })
        .collect();
    let first = all.iter().next().ok_or_else(|| anyhow!("no factorizations"))?;
    let f = Factorization::new(&g, first.clone())?;
    let o = hurwitz_orbit(&g, &f, canon, &all).map_err(hint)?;
    Ok(json!({
        "group": t.to_string(),
        "window": window,
        "factorizations_mod_period": all.len(),
        "orbit": o.members.len(),
        "transitive": o.transitive,
    }))
}

pub fn presentation_of(t: &EuclideanType, group: GroupKind, window: i64) -> Result<Presentation> {
    let cox = coxeter(t, window)?;
    Ok(match group {
        GroupKind::W => w_presentation(&cox).map_err(hint)?,
        GroupKind::F => part_presentations(&CrystContext::new(&cox).map_err(hint)?).map_err(hint)?.1,
        GroupKind::C => combined_presentation(&CrystContext::new(&cox).map_err(hint)?).map_err(hint)?,
        g => bail!("presentations are offered for W, F and C, not {g:?}"),
    })
}

pub fn presentation_report(t: &EuclideanType, group: GroupKind, window: i64) -> Result<Value> {
    let p = presentation_of(t, group, window)?;
    let families: Vec<String> = p.to_string().lines().map(String::from).collect();
    let mut out = serde_json::to_value(p.to_json())?;
    out["type"] = json!(t.to_string());
    out["group"] = json!(format!("{group:?}"));
    out["window"] = json!(window);
    out["families"] = json!(families);
    Ok(out)
}

/// Parses `1 -2 D -D`: atom numbers (1-based), `-` for inverses, `D` for
/// the Garside element.
pub fn parse_word(s: &str, atoms: &[usize], delta: usize) -> Result<Vec<Letter>> {
    s.split_whitespace()
        .map(|tok| {
            let (inv, body) = match tok.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, tok),
            };
            let simple = if body == "D" {
                delta
            } else {
                let k: usize = body.parse().with_context(|| format!("bad letter {tok:?}"))?;
                *atoms.get(k.wrapping_sub(1)).ok_or_else(|| anyhow!("atom {k} out of range 1..={}", atoms.len()))?
            };
            Ok(if inv { neg(simple) } else { pos(simple) })
        })
        .collect()
}

/// A label word reading a maximal chain from the bottom to `u`.
fn chain_to<E, L>(iv: &Interval<E, L>, u: usize, name: &impl Fn(&L) -> String) -> Vec<String>
where
    E: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug,
    L: Clone + Ord + std::fmt::Debug,
{
    let mut down: HashMap<usize, (usize, &L)> = HashMap::new();
    for c in &iv.covers {
        down.entry(c.hi).or_insert((c.lo, &c.label));
    }
    let mut word = Vec::new();
    let mut x = u;
    while x != iv.bottom {
        let (lo, l) = down[&x];
        word.push(name(l));
        x = lo;
    }
    word.reverse();
    word
}

fn nf_json<S>(g: &GarsideData<'_, S>, iv: &Interval<S::Elem, S::Label>, nf: &NormalForm, name: impl Fn(&S::Label) -> String) -> Value
where
    S: IntervalSource,
    S::Elem: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug,
    S::Label: Clone + Ord + std::fmt::Debug,
{
    let simples: Vec<Value> = nf.simples.iter().map(|&u| json!(chain_to(iv, u, &name).join(" "))).collect();
    json!({
        "delta_power": nf.power,
        "simples": simples,
        "left_greedy": g.is_left_greedy(nf),
        "atoms": iv.atoms().iter().map(|&a| chain_to(iv, a, &name).join(" ")).collect::<Vec<_>>(),
    })
}

/// Normal form in the dual Artin group of spherical type `B_n`
/// (`mid = false`) or in the middle group `Mid(B_n)`.
pub fn nf_report(n: usize, mid: bool, word: &str) -> Result<Value> {
    if mid {
        let src = MidSource::new(n);
        let iv = build_special_interval(n)?;
        let g = GarsideData::new(&src, &iv)?;
        let w = parse_word(word, &iv.atoms(), g.delta)?;
        let nf = g.normal_form(&w)?;
        let mut out = nf_json(&g, &iv, &nf, |l| l.to_string());
        out["group"] = json!(format!("Mid(B{n})"));
        return Ok(out);
    }
    let src = SphericalSource::new(Family::B, n)?;
    let iv = build_spherical_interval(&src)?;
    let g = GarsideData::new(&src, &iv)?;
    let w = parse_word(word, &iv.atoms(), g.delta)?;
    let nf = g.normal_form(&w)?;
    let mut out = nf_json(&g, &iv, &nf, |r| format!("r{}", r.root));
    out["group"] = json!(format!("B{n}"));
    Ok(out)
}

/// Text rendering: scalars as `key: value`, scalar arrays on one line,
/// coarse tables as a grid, string lists one per line. Relations and posets
/// appear only in JSON.
pub fn render_text(v: &Value) -> String {
    let mut s = String::new();
    let Some(obj) = v.as_object() else {
        return format!("{v}\n");
    };
    let scalar = |x: &Value| match x {
        Value::String(t) => t.clone(),
        other => other.to_string(),
    };
    for (k, x) in obj {
        match x {
            // bulky structures are left to the JSON output
            _ if k == "relations" || k == "poset" => {}
            Value::Array(a) if a.iter().all(|e| e.get("name").is_some()) && !a.is_empty() => {
                let names: Vec<String> = a.iter().map(|e| scalar(&e["name"])).collect();
                let _ = writeln!(s, "{k}: {}", names.join(", "));
            }
            Value::Array(a) if k == "families" || k == "partitions" => {
                let _ = writeln!(s, "{k}:");
                for e in a {
                    let _ = writeln!(s, "  {}", scalar(e));
                }
            }
            Value::Array(a) if a.iter().all(|e| !e.is_array() && !e.is_object()) => {
                let parts: Vec<String> = a.iter().map(scalar).collect();
                let _ = writeln!(s, "{k}: {}", parts.join(", "));
            }
            Value::Object(o) if o.contains_key("middle") => {
                let _ = writeln!(s, "{k}:");
                for row in ["top", "middle", "bottom"] {
                    let cells: Vec<String> =
                        o[row].as_array().map(|a| a.iter().map(scalar).collect()).unwrap_or_default();
                    let _ = writeln!(s, "  {row:<7} {}", cells.join(" "));
                }
            }
            Value::Array(_) | Value::Object(_) => {
                let _ = writeln!(s, "{k}: {x}");
            }
            _ => {
                let _ = writeln!(s, "{k}: {}", scalar(x));
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_parsing() {
        assert_eq!(parse_spherical("B", Some(2)).unwrap(), (Family::B, 2));
        assert_eq!(parse_spherical("B3", None).unwrap(), (Family::B, 3));
        assert!(parse_spherical("B3", Some(3)).is_err());
        assert_eq!(parse_type("E8", None, None).unwrap().to_string(), "E8");
        assert_eq!(parse_type("A", Some(3), Some((2, 2))).unwrap().to_string(), "A3(2,2)");
        assert_eq!(parse_bigon("3, 2").unwrap(), (3, 2));
        assert!(parse_type("Q", Some(3), None).is_err());
    }

    #[test]
    fn g2_interval_report() {
        let req = IntervalRequest {
            etype: parse_type("G2", None, None).unwrap(),
            group: GroupKind::W,
            window: 2,
            coarse: true,
            poset: false,
        };
        let v = interval_report(&req).unwrap();
        assert_eq!(v["coarse"]["middle"], json!([6, 6]));
        assert_eq!(v["top_weight"], json!("3"));
        let text = render_text(&v);
        assert!(text.contains("  top     2 1\n"));
    }

    #[test]
    fn word_parsing_and_nf() {
        let v = nf_report(2, false, "1 -1").unwrap();
        assert_eq!(v["delta_power"], json!(0));
        assert_eq!(v["simples"], json!([]));
        let d = nf_report(2, false, "D").unwrap();
        assert_eq!(d["delta_power"], json!(1));
        assert!(nf_report(2, false, "9").is_err());
        let m = nf_report(3, true, "1 2 -D").unwrap();
        assert_eq!(m["delta_power"], json!(-1));
    }

    #[test]
    fn ncb_and_mid_reports() {
        assert_eq!(ncb_report(5, true).unwrap()["count"], json!(252));
        let m = mid_report(3).unwrap();
        assert_eq!(m["size"], json!(20));
        assert_eq!(m["isomorphic_to_ncb"], json!(true));
    }
}
