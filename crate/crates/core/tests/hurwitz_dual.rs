use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use crystgar::crystlat::{build_w_interval, CrystContext};
use crystgar::dualgarside::*;
use crystgar::isomgroup::{CoxeterElement, Motion};
use crystgar::rootdata::Family;

fn cox(name: &str) -> CoxeterElement {
    CoxeterElement::new(&name.parse().unwrap()).unwrap()
}

fn apply<G: LetterGroup>(g: &G, f: &Factorization<G::Elem>, moves: &[(usize, Direction)]) -> Factorization<G::Elem> {
    moves.iter().fold(f.clone(), |acc, &(i, d)| hurwitz_move(g, &acc, i, d).unwrap())
}

proptest! {
    #[test]
    fn braid_relations_in_sym4(word in proptest::collection::vec((0usize..4, 0usize..4), 4)) {
        let g = Perms { n: 4 };
        let letters: Vec<Vec<u8>> = word
            .iter()
            .map(|&(i, j)| if i == j { g.transposition(i, (i + 1) % 4) } else { g.transposition(i, j) })
            .collect();
        let f = Factorization::new(&g, letters).unwrap();
        let fw = Direction::Forward;
        prop_assert_eq!(apply(&g, &f, &[(0, fw), (1, fw), (0, fw)]), apply(&g, &f, &[(1, fw), (0, fw), (1, fw)]));
        prop_assert_eq!(apply(&g, &f, &[(0, fw), (2, fw)]), apply(&g, &f, &[(2, fw), (0, fw)]));
        for i in 0..3 {
            let m = hurwitz_move(&g, &f, i, fw).unwrap();
            prop_assert_eq!(&m.target, &f.target);
            prop_assert_eq!(hurwitz_move(&g, &m, i, Direction::Backward).unwrap(), f.clone());
        }
    }

    #[test]
    fn moves_preserve_root_lengths_in_b3(idx in proptest::collection::vec(0usize..9, 3), path in proptest::collection::vec((0usize..2, any::<bool>()), 0..12)) {
        let (g, _) = spherical_coxeter(Family::B, 3).unwrap();
        let letters: Vec<Motion> = g.letters.keys().cloned().collect();
        let f = Factorization::new(&g, idx.iter().map(|&i| letters[i].clone()).collect()).unwrap();
        let moves: Vec<(usize, Direction)> = path
            .iter()
            .map(|&(i, b)| (i, if b { Direction::Forward } else { Direction::Backward }))
            .collect();
        let h = apply(&g, &f, &moves);
        prop_assert_eq!(&h.target, &f.target);
        // conjugacy classes of reflections in B3: long roots versus short roots
        let rs = crystgar::rootdata::spherical_root_system(Family::B, 3).unwrap();
        let class = |fz: &Factorization<Motion>| {
            let mut v: Vec<_> = fz.letters.iter().map(|m| rs.vector(g.refl(m).unwrap().root).norm2()).collect();
            v.sort();
            v
        };
        prop_assert_eq!(class(&h), class(&f));
    }
}

#[test]
fn g2_transitive_modulo_period() {
    let w = cox("G2");
    let iv = build_w_interval(&w, true).unwrap();
    let g = MotionLetters::window(&w);
    let canon = |word: &[Motion]| period_canonical(&w, &g, word);
    let all: BTreeSet<Vec<Motion>> = chain_words(&iv)
        .into_iter()
        .map(|ls| ls.iter().map(|l| w.rf.reflection(l.refl().unwrap())).collect::<Vec<_>>())
        .filter_map(|word| canon(&word))
        .collect();
    assert!(!all.is_empty());
    let start = Factorization::new(&g, all.iter().next().unwrap().clone()).unwrap();
    assert_eq!(start.target, w.w_motion);
    let o = hurwitz_orbit(&g, &start, canon, &all).unwrap();
    assert!(o.transitive);
    assert_eq!(o.members.len(), all.len());
}

/// Name → motion for every cover label of the W interval.
fn names_to_motions(w: &CoxeterElement) -> BTreeMap<String, Motion> {
    let iv = build_w_interval(w, true).unwrap();
    let naming = AxisNaming::new(w);
    iv.covers
        .iter()
        .map(|c| (naming.label(&c.label), w.rf.reflection(c.label.refl().unwrap())))
        .collect()
}

#[test]
fn presentations_are_sound() {
    for name in ["G2", "C2", "A2", "B3"] {
        let w = cox(name);
        let p = w_presentation(&w).unwrap();
        let m = names_to_motions(&w);
        let f = w.frame();
        let eval = |word: &Word| word.iter().fold(f.identity(), |acc, x| f.mul(&acc, &m[x]));
        assert!(!p.relations.is_empty());
        for (a, b) in &p.relations {
            assert_eq!(eval(a), eval(b), "{name}: {a:?} = {b:?}");
        }
    }
}

fn shift_name(n: &str, s: i64) -> String {
    let (head, sub) = n.split_once("_{").unwrap();
    let sub = sub.trim_end_matches('}');
    match sub.parse::<i64>() {
        Ok(i) => format!("{head}_{{{}}}", i + s),
        Err(_) => n.to_string(),
    }
}

#[test]
fn g2_subscript_shift_preserves_relations() {
    let w = cox("G2");
    let p = w_presentation(&w).unwrap();
    let words: BTreeSet<&Word> = p.relations.iter().flat_map(|(a, b)| [a, b]).collect();
    let mut checked = 0;
    for (a, b) in &p.relations {
        let sa: Word = a.iter().map(|x| shift_name(x, 4)).collect();
        let sb: Word = b.iter().map(|x| shift_name(x, 4)).collect();
        if words.contains(&sa) && words.contains(&sb) {
            // both shifted words occur and lie in one family
            let fam = p.families().into_iter().find(|f| f.contains(&sa)).unwrap();
            assert!(fam.contains(&sb));
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn g2_combined_equals_w() {
    let w = cox("G2");
    let ctx = CrystContext::new(&w).unwrap();
    let c = combined_presentation(&ctx).unwrap();
    let wp = w_presentation(&ctx.cox).unwrap();
    assert_eq!(c.families(), wp.families());
    let names = |p: &Presentation| p.generators.iter().map(|g| g.name.clone()).collect::<BTreeSet<_>>();
    assert_eq!(names(&c), names(&wp));
}

#[test]
fn b3_combined_generator_audit() {
    let w = cox("B3");
    let ctx = CrystContext::new(&w).unwrap();
    let c = combined_presentation(&ctx).unwrap();
    let (wp, fp) = part_presentations(&ctx).unwrap();
    let names = |p: &Presentation| p.generators.iter().map(|g| g.name.clone()).collect::<BTreeSet<_>>();
    let (cn, wn, fnm) = (names(&c), names(&wp), names(&fp));
    let rh = ctx.cox.r_h.len();
    // distinct factored translations; different diagonal translations share factors
    let fact = ctx.factored.iter().flatten().map(|f| f.vector.clone()).collect::<BTreeSet<_>>().len();
    let rv = wn.len() - rh;
    assert_eq!(cn.len(), rh + rv + fact);
    assert_eq!(cn, wn.union(&fnm).cloned().collect());
    assert!(fnm.iter().filter(|n| n.starts_with("t_")).count() == fact);
    // every relation of the union sits inside a family of C
    let fams = c.families();
    for (a, b) in wp.relations.iter().chain(&fp.relations) {
        let fam = fams.iter().find(|f| f.contains(a)).expect("word present");
        assert!(fam.contains(b));
    }
}
