use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crystgar::dualgarside::*;
use crystgar::isomgroup::{Motion, Refl};
use crystgar::midnc::{build_special_interval, MidSource};
use crystgar::posetengine::{Interval, IntervalSource};
use crystgar::rootdata::Family;

/// Equivalence classes of atom words of one length under the rewriting
/// `ab ↔ cd` whenever `ab` and `cd` are two factorizations of the same
/// rank-two simple.
fn rewriting_classes<S: IntervalSource>(
    src: &S,
    iv: &Interval<S::Elem, S::Label>,
    len: usize,
) -> Vec<Vec<Vec<usize>>> {
    let atoms = iv.atoms();
    let mut pairs_of: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &a in &atoms {
        for &b in &atoms {
            let x = src.mul(iv.payload(a), iv.payload(b));
            if let Some(id) = iv.id_of(&x) {
                if iv.weight(id) == iv.weight(a) + iv.weight(b) {
                    pairs_of.entry(id).or_default().push((a, b));
                }
            }
        }
    }
    let mut rewrite: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for ps in pairs_of.values() {
        for &p in ps {
            rewrite.insert(p, ps.clone());
        }
    }
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| atoms.iter().map(move |&a| [w.clone(), vec![a]].concat()))
            .collect();
    }
    let index: HashMap<Vec<usize>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut class = vec![usize::MAX; words.len()];
    let mut out = Vec::new();
    for s in 0..words.len() {
        if class[s] != usize::MAX {
            continue;
        }
        let c = out.len();
        class[s] = c;
        let mut members = vec![words[s].clone()];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            let w = &words[i];
            for p in 0..len.saturating_sub(1) {
                if let Some(alts) = rewrite.get(&(w[p], w[p + 1])) {
                    for &(x, y) in alts {
                        let mut v = w.clone();
                        v[p] = x;
                        v[p + 1] = y;
                        let j = index[&v];
                        if class[j] == usize::MAX {
                            class[j] = c;
                            members.push(v);
                            stack.push(j);
                        }
                    }
                }
            }
        }
        out.push(members);
    }
    out
}

fn check_uniqueness<S: IntervalSource>(src: &S, iv: &Interval<S::Elem, S::Label>, max_len: usize) {
    let g = GarsideData::new(src, iv).unwrap();
    for len in 1..=max_len {
        let classes = rewriting_classes(src, iv, len);
        let mut seen: HashMap<NormalForm, usize> = HashMap::new();
        for (c, members) in classes.iter().enumerate() {
            let nfs: Vec<NormalForm> = members
                .iter()
                .map(|w| g.normal_form(&w.iter().map(|&a| pos(a)).collect::<Vec<_>>()).unwrap())
                .collect();
            assert!(nfs.iter().all(|n| *n == nfs[0]), "NF differs inside a rewriting class");
            assert!(g.is_left_greedy(&nfs[0]));
            assert_eq!(seen.insert(nfs[0].clone(), c), None, "two classes share a normal form");
        }
    }
}

#[test]
fn uniqueness_spherical_b() {
    for (n, len) in [(2usize, 5usize), (3, 4), (4, 3)] {
        let src = SphericalSource::new(Family::B, n).unwrap();
        let iv = build_spherical_interval(&src).unwrap();
        check_uniqueness(&src, &iv, len);
    }
}

#[test]
fn uniqueness_middle_groups() {
    for (n, len) in [(2usize, 5usize), (3, 4)] {
        let src = MidSource::new(n);
        let iv = build_special_interval(n).unwrap();
        check_uniqueness(&src, &iv, len);
    }
}

fn nf_word(g_delta: usize, nf: &NormalForm) -> Vec<Letter> {
    let d = if nf.power >= 0 { pos(g_delta) } else { neg(g_delta) };
    let mut w = vec![d; nf.power.unsigned_abs() as usize];
    w.extend(nf.simples.iter().map(|&u| pos(u)));
    w
}

fn random_checks<S: IntervalSource>(src: &S, iv: &Interval<S::Elem, S::Label>, trials: usize, seed: u64) {
    let g = GarsideData::new(src, iv).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let len = rng.gen_range(0..8);
        let word: Vec<Letter> = (0..len)
            .map(|_| Letter { simple: rng.gen_range(0..iv.len()), inverse: rng.gen_bool(0.3) })
            .collect();
        let nf = g.normal_form(&word).unwrap();
        assert!(g.is_left_greedy(&nf));
        // images in the finite quotient agree
        assert_eq!(g.evaluate(&nf), g.evaluate_word(&word));
        assert_eq!(g.normal_form(&nf_word(g.delta, &nf)).unwrap(), nf, "idempotence");
        let back: Vec<Letter> =
            word.iter().rev().map(|l| Letter { simple: l.simple, inverse: !l.inverse }).collect();
        let one = g.normal_form(&[word.clone(), back].concat()).unwrap();
        assert_eq!(one, NormalForm { power: 0, simples: vec![] });
        let conj: Vec<Letter> =
            [vec![neg(g.delta)], word.clone(), vec![pos(g.delta)]].concat();
        let cnf = g.normal_form(&conj).unwrap();
        assert_eq!(cnf, g.conjugate_nf(&nf));
        let d = iv.payload(g.delta);
        let expect = src.mul(&src.mul(&src.inv(d), &g.evaluate_word(&word)), d);
        assert_eq!(g.evaluate(&cnf), expect);
    }
}

#[test]
fn randomized_conjugation_and_idempotence() {
    let mut total = 0;
    for n in 2..=4 {
        let src = SphericalSource::new(Family::B, n).unwrap();
        let iv = build_spherical_interval(&src).unwrap();
        random_checks(&src, &iv, 4000, n as u64);
        total += 4000;
    }
    assert!(total >= 10_000);
}

#[test]
fn greedy_certificate_rejects_bad_forms() {
    let src = SphericalSource::new(Family::B, 3).unwrap();
    let iv = build_spherical_interval(&src).unwrap();
    let g = GarsideData::new(&src, &iv).unwrap();
    let atoms = iv.atoms();
    // a·a for an atom a is left-weighted; a·∂a multiplies to Δ and is not.
    let a = atoms[0];
    assert!(g.is_left_greedy(&NormalForm { power: 0, simples: vec![a, a] }));
    assert!(!g.is_left_greedy(&NormalForm { power: 0, simples: vec![a, g.right_comp[a]] }));
    assert!(!g.is_left_greedy(&NormalForm { power: 0, simples: vec![g.delta] }));
    let nf = g.normal_form(&[pos(a), pos(g.right_comp[a])]).unwrap();
    assert_eq!(nf, NormalForm { power: 1, simples: vec![] });
}

#[test]
fn spherical_interval_sizes() {
    // type-B noncrossing partition counts C(2n, n)
    for (n, size) in [(2usize, 6usize), (3, 20), (4, 70)] {
        let src = SphericalSource::new(Family::B, n).unwrap();
        let iv: Interval<Motion, Refl> = build_spherical_interval(&src).unwrap();
        assert_eq!(iv.len(), size);
        assert!(iv.is_lattice().is_ok());
    }
}
