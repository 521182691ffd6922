use std::collections::{BTreeSet, HashMap, HashSet};

use proptest::prelude::*;

use crystgar::crystlat::{build_cryst_interval, build_w_interval, CrystContext, WSource};
use crystgar::dualgarside::{build_spherical_interval, SphericalSource};
use crystgar::exactgeom::{affine_intersect, orthogonal_complement, AffineSubspace, Rat, RatVec};
use crystgar::isomgroup::{reflection_length, weyl_reflection_length, CoxeterElement, LabelKind, Motion, Refl};
use crystgar::midnc::{build_special_interval, generators, mid_mul, vertical_displacement, MidElement, MidSource};
use crystgar::posetengine::{build_interval, BuildOptions};
use crystgar::rootdata::{spherical_root_system, Family};

fn cox(name: &str) -> CoxeterElement {
    CoxeterElement::new(&name.parse().unwrap()).unwrap()
}

fn subspace() -> impl Strategy<Value = AffineSubspace> {
    (proptest::collection::vec(-3i64..=3, 4), proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), 0..=3))
        .prop_map(|(b, ds)| {
            let dirs: Vec<RatVec> = ds.iter().map(|d| RatVec::from_ints(d)).collect();
            AffineSubspace::new(RatVec::from_ints(&b), &dirs).unwrap()
        })
}

proptest! {
    #[test]
    fn canonical_form_is_a_fixed_point(u in subspace()) {
        prop_assert_eq!(u.recanonicalize(), u.clone());
        let again = AffineSubspace::new(u.base().clone(), u.directions()).unwrap();
        prop_assert_eq!(again, u);
    }

    #[test]
    fn intersection_commutes_and_associates(a in subspace(), b in subspace(), c in subspace()) {
        let ab = affine_intersect(&a, &b).unwrap();
        prop_assert_eq!(&ab, &affine_intersect(&b, &a).unwrap());
        let left = match ab {
            Some(x) => affine_intersect(&x, &c).unwrap(),
            None => None,
        };
        let right = match affine_intersect(&b, &c).unwrap() {
            Some(x) => affine_intersect(&a, &x).unwrap(),
            None => None,
        };
        prop_assert_eq!(left, right);
    }

    #[test]
    fn complement_dimensions_add_up(u in subspace()) {
        let c = orthogonal_complement(u.directions(), 4);
        prop_assert_eq!(u.dim() + c.len(), 4);
        for x in &c {
            for d in u.directions() {
                prop_assert!(x.dot(d).is_zero());
            }
        }
    }

    #[test]
    fn mid_group_laws(n in 2usize..=4, picks in proptest::collection::vec(0usize..1000, 3)) {
        let gens = generators(n, -1, 2);
        let el = |k: usize| -> MidElement {
            // products of two generators give non-generator elements too
            let a = gens[k % gens.len()].element(n);
            let b = gens[(k / 7) % gens.len()].element(n);
            mid_mul(&a, &b).unwrap()
        };
        let (a, b, c) = (el(picks[0]), el(picks[1]), el(picks[2]));
        let ab_c = mid_mul(&mid_mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = mid_mul(&a, &mid_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(mid_mul(&a, &a.inverse()).unwrap(), MidElement::identity(n));
        prop_assert_eq!(mid_mul(&a.inverse(), &a).unwrap(), MidElement::identity(n));
        prop_assert_eq!(
            vertical_displacement(&mid_mul(&a, &b).unwrap()),
            vertical_displacement(&a) + vertical_displacement(&b)
        );
    }
}

/// Elements reachable in at most `radius` steps with their distances.
fn ball(f: &crystgar::isomgroup::Frame, gens: &[Motion], radius: usize) -> HashMap<Motion, usize> {
    let mut dist: HashMap<Motion, usize> = HashMap::from([(f.identity(), 0)]);
    let mut layer = vec![f.identity()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for u in &layer {
            for g in gens {
                let v = f.mul(u, g);
                if !dist.contains_key(&v) {
                    dist.insert(v.clone(), d);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    dist
}

fn reflections_up_to(w: &CoxeterElement, k: i64) -> Vec<Motion> {
    let mut out = Vec::new();
    for root in w.rs.positive() {
        for level in -k..=k {
            out.push(w.rf.reflection(Refl { root, level }));
        }
    }
    out
}

#[test]
fn reflection_length_matches_cayley_distance() {
    // Elements are words of length <= 4 in reflections of level |k| <= 1;
    // distances use all reflections of level |k| <= 6 (radius 3 ball, and
    // distance 4 otherwise).
    for name in ["A2", "C2", "G2", "A3", "B3", "C3"] {
        let w = cox(name);
        let f = w.frame();
        let big = ball(f, &reflections_up_to(&w, 6), 3);
        let small = ball(f, &reflections_up_to(&w, 1), 4);
        let mut hist = [0usize; 5];
        let mut below = 0;
        for u in small.keys() {
            let d = big.get(u).copied().unwrap_or(4);
            let iso = f.unpack(u);
            assert_eq!(weyl_reflection_length(&iso, &w.rs), d, "{name}");
            let formula = reflection_length(&iso);
            assert_eq!(f.length(u), formula, "{name}");
            assert!(formula <= d, "{name}");
            below += usize::from(formula < d);
            hist[d] += 1;
        }
        assert!(hist.iter().all(|&c| c > 0), "{name}: {hist:?}");
        // translations off the root lines undercount in every type
        assert!(below > 0, "{name}");
    }
}

#[test]
fn reflection_length_on_window_intervals() {
    // chain length in the windowed interval equals the formula for every element
    for name in ["A2", "C2", "G2", "A3", "B3", "C3", "A3(2,2)"] {
        let w = cox(name);
        let iv = build_w_interval(&w, false).unwrap();
        for (i, e) in iv.elements.iter().enumerate() {
            let iso = w.frame().unpack(&e.payload);
            assert_eq!(Rat::int(reflection_length(&iso) as i64), iv.weight(i), "{name}");
            assert_eq!(weyl_reflection_length(&iso, &w.rs), reflection_length(&iso), "{name}");
        }
    }
}

#[test]
fn translation_off_root_lines_has_length_four() {
    let w = cox("A2");
    let t = crystgar::isomgroup::Isometry::translation(RatVec::from_ints(&[-4, 2, 2]));
    assert_eq!(reflection_length(&t), 2);
    assert_eq!(weyl_reflection_length(&t, &w.rs), 4);
    let t = crystgar::isomgroup::Isometry::translation(RatVec::from_ints(&[2, -2, 0]));
    assert_eq!(weyl_reflection_length(&t, &w.rs), 2);
}

#[test]
fn coxeter_elements_and_triangle_inequality() {
    for name in ["A2", "C2", "G2", "A3", "B3", "C3", "A3(2,2)", "B4", "C4", "D4", "F4"] {
        let w = cox(name);
        let f = w.frame();
        let n = w.rank();
        assert_eq!(f.length(&w.w_motion), n + 1, "{name}");
        let us = ball(f, &reflections_up_to(&w, 1), 2);
        for u in us.keys() {
            let rest = f.mul(&f.inv(u), &w.w_motion);
            assert!(f.length(u) + f.length(&rest) >= n + 1, "{name}");
        }
    }
}

#[test]
fn axial_structure() {
    for name in ["A2", "C2", "G2", "A3", "B3", "C3", "A3(2,2)", "B4", "D4", "F4"] {
        let w = cox(name);
        let f = w.frame();
        let c = w.window * w.index_period;
        // crossings of vertical hyperplanes are exactly the equally spaced axial points
        let steps: BTreeSet<RatVec> =
            (-c..c).map(|i| &w.axial_point(i + 1) - &w.axial_point(i)).collect();
        assert_eq!(steps.len(), 1, "{name}");
        let hits: BTreeSet<i64> = w.r_v.iter().filter_map(|r| w.axial_index(*r)).collect();
        assert!(hits.len() as i64 >= c, "{name}");
        // R_H ∪ R_V are the reflections fixing axial vertices (inner window)
        let inner = (w.window - 1) * w.index_period;
        let fixing = w.reflections_fixing(&w.axial_vertices(-inner, inner));
        let gens: BTreeSet<Refl> = w.window_reflections().into_iter().collect();
        assert!(fixing.is_subset(&gens), "{name}");
        let all_fixing = w.reflections_fixing(&w.window_axial_vertices());
        assert!(gens.is_subset(&all_fixing), "{name}");
        // w^p fixes every horizontal reflection under conjugation
        let wp = (0..w.period_p).fold(f.identity(), |acc, _| f.mul(&acc, &w.w_motion));
        for r in &w.r_h {
            let m = w.rf.reflection(*r);
            assert_eq!(f.mul(&f.mul(&wp, &m), &f.inv(&wp)), m, "{name}");
            assert_eq!(w.shift_refl(*r, 1), *r);
        }
    }
}

#[test]
fn intervals_are_graded_self_dual_and_balanced() {
    for name in ["A2", "C2", "G2", "A3", "B3", "C3"] {
        let w = cox(name);
        let iv = build_w_interval(&w, true).unwrap();
        assert!(iv.check_grading(|l| l.weight), "{name}");
        assert_eq!(iv.weight(iv.top), Rat::int(w.rank() as i64 + 1));
        // the window cuts off complements of elements near its edges
        let margin = Rat::int(w.window) - Rat::new(1, 2);
        let mut checked = 0;
        for e in &iv.elements {
            if w.phase(&e.payload).is_some_and(|p| p.abs() >= margin) {
                continue;
            }
            let inv = w.frame().inv(&e.payload);
            let rc = f_mul(&w, &inv, &w.w_motion);
            let lc = f_mul(&w, &w.w_motion, &inv);
            assert!(iv.id_of(&rc).is_some() && iv.id_of(&lc).is_some(), "{name}");
            checked += 1;
        }
        assert!(checked * 2 > iv.len(), "{name}");
    }
    for n in 2..=4 {
        let src = SphericalSource::new(Family::B, n).unwrap();
        let iv = build_spherical_interval(&src).unwrap();
        assert!(iv.is_self_dual(&src).unwrap());
        let m = MidSource::new(n);
        let miv = build_special_interval(n).unwrap();
        assert!(miv.is_self_dual(&m).unwrap());
    }
}

fn f_mul(w: &CoxeterElement, a: &Motion, b: &Motion) -> Motion {
    w.frame().mul(a, b)
}

#[test]
fn builds_are_deterministic_across_thread_counts() {
    let w = cox("B3");
    let build = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let iv = build_interval(&WSource::new(&w), BuildOptions { record_covers: true, reduce: false }).unwrap();
            let els: Vec<Motion> = iv.elements.iter().map(|e| e.payload.clone()).collect();
            let cov: Vec<(usize, usize, String)> =
                iv.covers.iter().map(|c| (c.lo, c.hi, c.label.to_string())).collect();
            (els, cov)
        })
    };
    assert_eq!(build(1), build(4));
}

#[test]
fn cryst_weights_and_grading() {
    for name in ["G2", "B3", "C3", "A3(2,2)", "D4"] {
        let ctx = CrystContext::new(&cox(name)).unwrap();
        let k = ctx.k();
        for ft in ctx.factored.iter().flatten() {
            assert_eq!(ft.weight, Rat::new(2, k as i64), "{name}");
        }
        let ci = build_cryst_interval(&ctx).unwrap();
        assert!(ci.c.check_grading(|l| l.weight), "{name}");
        assert_eq!(ci.c.weight(ci.c.top), Rat::int(ctx.cox.rank() as i64 + 1));
        for c in &ci.c.covers {
            if c.label.kind == LabelKind::FactTrans {
                assert_eq!(c.label.weight, Rat::new(2, k as i64));
            }
        }
    }
}

#[test]
fn translations_lie_in_the_group_of_horizontal_reflections_and_w() {
    for name in ["G2", "B3", "C3", "D4", "F4"] {
        let w = cox(name);
        let f = w.frame();
        let hs: Vec<Motion> = w.r_h.iter().map(|r| w.rf.reflection(*r)).collect();
        // products of n-1 horizontal reflections
        let mut words = vec![f.identity()];
        for _ in 1..w.rank() {
            words = words.iter().flat_map(|u| hs.iter().map(|h| f.mul(u, h))).collect();
            words.sort();
            words.dedup();
        }
        let group: HashSet<Motion> = words.into_iter().collect();
        for i in 0..w.translations.len() {
            let t = w.translation_motion(i);
            assert!(group.contains(&f.mul(&f.inv(&t), &w.w_motion)), "{name}");
        }
    }
}

/// Bijection between two root sets preserving `2(α·β)/(β·β)`.
fn isomorphic_roots(a: &[RatVec], b: &[RatVec]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let cart = |x: &RatVec, y: &RatVec| x.dot(y) * Rat::int(2) / y.norm2();
    fn rec(
        i: usize,
        a: &[RatVec],
        b: &[RatVec],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        cart: &dyn Fn(&RatVec, &RatVec) -> Rat,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] {
                continue;
            }
            let ok = (0..i).all(|k| {
                cart(&a[i], &a[k]) == cart(&b[j], &b[map[k]]) && cart(&a[k], &a[i]) == cart(&b[map[k]], &b[j])
            }) && cart(&a[i], &a[i]) == cart(&b[j], &b[j]);
            if ok {
                used[j] = true;
                map.push(j);
                if rec(i + 1, a, b, map, used, cart) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
        }
        false
    }
    rec(0, a, b, &mut Vec::new(), &mut vec![false; b.len()], &cart)
}

#[test]
fn horizontal_components_are_type_a_root_systems() {
    for name in ["G2", "B3", "C3", "A3(2,2)", "D4", "F4", "E6", "E7", "E8"] {
        let w = cox(name);
        for comp in crystgar::crystlat::components(&w).unwrap() {
            let mut roots: Vec<RatVec> = Vec::new();
            for &i in &comp.roots {
                roots.push(w.rs.vector(i).clone());
                roots.push(w.rs.vector(i).scale(Rat::int(-1)));
            }
            let rs = spherical_root_system(Family::A, comp.rank).unwrap();
            let model: Vec<RatVec> = (0..rs.num_positive() * 2).map(|i| rs.vector(i).clone()).collect();
            assert!(isomorphic_roots(&roots, &model), "{name} rank {}", comp.rank);
        }
    }
}
