use std::collections::BTreeSet;

use crystgar::midnc::*;

/// All set partitions of `0..m` as restricted growth strings.
fn set_partitions(m: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(m: usize, rgs: &mut Vec<usize>, max: usize, f: &mut impl FnMut(&[usize])) {
        if rgs.len() == m {
            f(rgs);
            return;
        }
        for b in 0..=max + 1 {
            if rgs.is_empty() && b > 0 {
                break;
            }
            rgs.push(b);
            let nm = if rgs.len() == 1 { 0 } else { max.max(b) };
            rec(m, rgs, nm, f);
            rgs.pop();
        }
    }
    rec(m, &mut Vec::new(), 0, f);
}

fn crosses(rgs: &[usize]) -> bool {
    let m = rgs.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                if rgs[a] != rgs[c] || rgs[a] == rgs[b] {
                    continue;
                }
                for d in c + 1..m {
                    if rgs[d] == rgs[b] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn brute_ncb(n: usize) -> BTreeSet<BncPartition> {
    let m = 2 * n;
    let mut out = BTreeSet::new();
    set_partitions(m, &mut |rgs| {
        // central symmetry: q ~ q' iff q+n ~ q'+n
        for q in 0..m {
            for r in q + 1..m {
                if (rgs[q] == rgs[r]) != (rgs[(q + n) % m] == rgs[(r + n) % m]) {
                    return;
                }
            }
        }
        if crosses(rgs) {
            return;
        }
        let k = rgs.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); k];
        for (q, &b) in rgs.iter().enumerate() {
            blocks[b].push(q);
        }
        out.insert(BncPartition::new(n, blocks).expect("oracle output is valid"));
    });
    out
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=5 {
        let oracle = brute_ncb(n);
        let fast: BTreeSet<BncPartition> = ncb_enumerate(n).unwrap().into_iter().collect();
        assert_eq!(fast, oracle, "n = {n}");
    }
    // Frozen after the oracle runs above (central binomial coefficients).
    let frozen = [1usize, 2, 6, 20, 70, 252, 924, 3432, 12870];
    for n in 0..=8 {
        assert_eq!(ncb_enumerate(n).unwrap().len(), frozen[n], "n = {n}");
    }
    assert!(ncb_enumerate(9).is_err());
}

#[test]
fn brute_force_n6() {
    assert_eq!(brute_ncb(6).len(), 924);
}

#[test]
fn special_interval_sizes_and_isomorphism() {
    for n in 2..=6 {
        let iv = build_special_interval(n).unwrap();
        assert_eq!(iv.len() as u64, binom(2 * n as u64, n as u64), "n = {n}");
        assert!(iv.check_grading(|_| crystgar::exactgeom::Rat::one()));
        for c in &iv.covers {
            let ok = match c.label {
                MidGenerator::T(_) => true,
                MidGenerator::R(_, _, k) => k == 0 || k == 1,
            };
            assert!(ok, "unexpected label {}", c.label);
        }
        if n > 5 {
            continue;
        }
        let parts: Vec<BncPartition> =
            iv.elements.iter().map(|e| ncb_from_element(&e.payload).unwrap()).collect();
        let all: BTreeSet<BncPartition> = ncb_enumerate(n).unwrap().into_iter().collect();
        assert_eq!(parts.iter().cloned().collect::<BTreeSet<_>>(), all);
        for (i, p) in parts.iter().enumerate() {
            assert_eq!(element_from_ncb(p).unwrap(), iv.payload(i).clone());
        }
        for a in 0..iv.len() {
            for b in 0..iv.len() {
                assert_eq!(iv.leq(a, b), parts[a].refines(&parts[b]), "n = {n}");
            }
        }
        assert!(iv.is_lattice().is_ok());
        let w = special_element(n).unwrap();
        let commuting: Vec<usize> =
            (0..iv.len()).filter(|&i| commutes(iv.payload(i), &w)).collect();
        assert_eq!(commuting, vec![iv.bottom, iv.top]);
    }
}

#[test]
fn meets_and_joins_match_the_poset() {
    for n in 2..=4 {
        let iv = build_special_interval(n).unwrap();
        let parts: Vec<BncPartition> =
            iv.elements.iter().map(|e| ncb_from_element(&e.payload).unwrap()).collect();
        for a in 0..iv.len() {
            for b in 0..iv.len() {
                let m = iv.meet(a, b).unwrap();
                let j = iv.join(a, b).unwrap();
                assert_eq!(ncb_meet(&parts[a], &parts[b]), parts[m]);
                assert_eq!(ncb_join(&parts[a], &parts[b]).unwrap(), parts[j]);
            }
        }
    }
}

#[test]
fn rotation_by_conjugation() {
    for n in 2..=5 {
        let w = special_element(n).unwrap();
        for p in ncb_enumerate(n).unwrap() {
            let u = element_from_ncb(&p).unwrap();
            let c = mid_mul(&mid_mul(&w, &u).unwrap(), &w.inverse()).unwrap();
            let q = ncb_from_element(&c).unwrap();
            assert_eq!(q, p.rotate(1));
            let fixed = q == p;
            assert_eq!(fixed, p == BncPartition::singletons(n) || p == BncPartition::full(n));
        }
    }
}

#[test]
fn complement_reverses_order() {
    for n in 2..=4 {
        let all = ncb_enumerate(n).unwrap();
        for a in &all {
            for b in &all {
                if a.refines(b) {
                    assert!(kreweras(b).unwrap().refines(&kreweras(a).unwrap()));
                }
            }
        }
    }
}
