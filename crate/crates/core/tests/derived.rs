//! Values worked out by small brute-force searches written here, frozen as
//! literals and compared against the library.

use std::collections::BTreeSet;
use std::sync::Arc;

use powerop::classfn::{adams, power_mod_transfer, twist, ClassFunction, CoeffValue};
use powerop::classify::{classify, enumerate_sum_data, ClassKey, Domain};
use powerop::groups::{make_group, wreath_product, CommutingTuple, FiniteGroup, Perm, WreathElement};
use powerop::isogeny::{build_power_section, kernel, Isogeny};
use powerop::padic::{canonicalize, enumerate_subgroups, subgroup_preimage, Context, FiniteSubgroup, TorsionVector};

fn points(ctx: &Context) -> Vec<Vec<i64>> {
    let q = ctx.modulus();
    let mut out = vec![vec![]];
    for _ in 0..ctx.n() {
        out = out.into_iter().flat_map(|v| (0..q).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

fn apply(a: &[Vec<i64>], v: &[i64], q: i64) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<i64>().rem_euclid(q)).collect()
}

/// Every subgroup of `(Z/q)^n` as a sorted point set, by closing spans of up to two points.
fn subgroup_sets(ctx: &Context) -> BTreeSet<BTreeSet<Vec<i64>>> {
    let q = ctx.modulus();
    let pts = points(ctx);
    let mut out = BTreeSet::new();
    for a in &pts {
        for b in &pts {
            let mut span = BTreeSet::new();
            for i in 0..q {
                for j in 0..q {
                    span.insert(a.iter().zip(b).map(|(x, y)| (i * x + j * y).rem_euclid(q)).collect::<Vec<_>>());
                }
            }
            out.insert(span);
        }
    }
    out
}

fn as_set(h: &FiniteSubgroup) -> BTreeSet<Vec<i64>> {
    h.elements().into_iter().map(|v| v.coords).collect()
}

#[test]
fn subgroup_counts_match_point_spans() {
    for (p, level) in [(2u64, 2u32), (3, 1), (3, 2), (5, 1)] {
        let ctx = Context::new(p, 2, level).unwrap();
        let sets = subgroup_sets(&ctx);
        for k in 0..=2 * level {
            let brute: BTreeSet<_> = sets.iter().filter(|s| s.len() as u64 == p.pow(k)).cloned().collect();
            let lib: BTreeSet<_> = enumerate_subgroups(&ctx, k).iter().map(as_set).collect();
            assert_eq!(lib, brute, "p={p} level={level} k={k}");
        }
    }
    let frozen = [(2u64, 2u32, 1u32, 3usize), (2, 2, 2, 7), (3, 1, 1, 4), (3, 2, 2, 13), (5, 1, 1, 6)];
    for (p, level, k, count) in frozen {
        assert_eq!(enumerate_subgroups(&Context::new(p, 2, level).unwrap(), k).len(), count);
    }
}

#[test]
fn preimage_under_the_swap_matrix() {
    let ctx = Context::new(2, 2, 2).unwrap();
    let a = [vec![0, 2], vec![1, 0]];
    let k: BTreeSet<Vec<i64>> = [vec![0, 0], vec![0, 2]].into();
    let brute: BTreeSet<Vec<i64>> = points(&ctx).into_iter().filter(|v| k.contains(&apply(&a, v, 4))).collect();
    let frozen: BTreeSet<Vec<i64>> = [vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]].into();
    assert_eq!(brute, frozen);
    let kk = canonicalize(&ctx, &[TorsionVector::from_fractions(&ctx, &[0, 1], 2).unwrap()]).unwrap();
    let pre = subgroup_preimage(&Isogeny::from_rows(&ctx, &a).unwrap(), &kk).unwrap();
    assert_eq!(as_set(&pre), frozen);
    assert_eq!(pre, FiniteSubgroup::torsion(&ctx, 1).unwrap());
}

#[test]
fn kernels_by_scanning_points() {
    let ctx = Context::new(2, 2, 2).unwrap();
    for (rows, frozen) in [
        (vec![vec![0, 2], vec![1, 0]], vec![vec![0, 0], vec![0, 2]]),
        (vec![vec![-1, 1], vec![1, 1]], vec![vec![0, 0], vec![2, 2]]),
        (vec![vec![4, 0], vec![0, 4]], points(&ctx)),
    ] {
        let brute: BTreeSet<Vec<i64>> = points(&ctx).into_iter().filter(|v| apply(&rows, v, 4).iter().all(|&c| c == 0)).collect();
        assert_eq!(brute, frozen.into_iter().collect());
        assert_eq!(as_set(&kernel(&Isogeny::from_rows(&ctx, &rows).unwrap()).unwrap()), brute);
    }
}

/// Classes of commuting `n`-tuples of `p`-power elements, by direct orbit marking.
fn brute_class_count(g: &FiniteGroup, p: u64, n: usize) -> usize {
    let elems: Vec<&Perm> = g.elements().iter().filter(|x| x.is_p_power_order(p)).collect();
    let mut tuples: Vec<Vec<Perm>> = vec![vec![]];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                elems
                    .iter()
                    .filter(|x| t.iter().all(|y| y.compose(x) == x.compose(y)))
                    .map(|x| [t.clone(), vec![(*x).clone()]].concat())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut seen = BTreeSet::new();
    let mut classes = 0;
    for t in &tuples {
        if seen.contains(t) {
            continue;
        }
        classes += 1;
        for x in g.elements() {
            let xi = x.inverse();
            seen.insert(t.iter().map(|y| x.compose(y).compose(&xi)).collect::<Vec<_>>());
        }
    }
    classes
}

#[test]
fn class_counts_of_small_groups() {
    let frozen = [("S2", 2u64, 1usize, 2usize), ("S3", 2, 1, 2), ("S2", 2, 2, 4), ("S3", 3, 1, 2), ("S3", 2, 2, 4), ("C4", 2, 1, 4)];
    for (spec, p, n, count) in frozen {
        let g = make_group(spec).unwrap();
        assert_eq!(brute_class_count(&g, p, n), count, "{spec}");
        let ctx = Context::new(p, n, 2).unwrap();
        assert_eq!(Domain::plain(&ctx, Arc::new(g)).class_keys().unwrap().len(), count, "{spec}");
    }
}

#[test]
fn wreath_class_counts_match_sum_data() {
    for (spec, p, n, m, count) in [("e", 2u64, 2usize, 2usize, 4usize), ("C2", 2, 1, 2, 5), ("e", 3, 1, 3, 2), ("C2", 2, 2, 2, 22)] {
        let g = make_group(spec).unwrap();
        let w = wreath_product(&g, m, 10_000).unwrap();
        assert_eq!(brute_class_count(&w, p, n), count, "{spec} wr {m}, n={n}");
        let base = Domain::plain(&Context::new(p, n, 1).unwrap(), Arc::new(g));
        assert_eq!(enumerate_sum_data(&base, m).unwrap().len(), count);
    }
}

#[test]
fn block_swap_with_a_fixed_partner_is_dual_to_the_projection() {
    let ctx = Context::new(2, 2, 1).unwrap();
    let base = Domain::plain(&ctx, Arc::new(make_group("e").unwrap()));
    let swap = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
    let d = classify(&base, 2, &[swap, Perm::identity(2)]).unwrap();
    assert_eq!(d.parts.len(), 1);
    // Block 0 is fixed by exactly the l with l_1 even, so H = {v : 2 v_1 = v_2 = 0}.
    let brute: BTreeSet<Vec<i64>> = points(&ctx)
        .into_iter()
        .filter(|v| (2 * v[0]) % 2 == 0 && v[1] == 0)
        .collect();
    assert_eq!(as_set(&d.parts[0].subgroup), brute);
    assert_eq!(brute, [vec![0, 0], vec![1, 0]].into());
}

#[test]
fn conjugate_tuples_classify_alike() {
    let base = Domain::plain(&Context::new(2, 1, 2).unwrap(), Arc::new(make_group("C2").unwrap()));
    let g = make_group("C2").unwrap();
    let w = wreath_product(&g, 2, 100).unwrap();
    let t = WreathElement { base: vec![Perm::identity(2), g.generators()[0].clone()], perm: Perm::from_cycles(2, &[vec![0, 1]]).unwrap() }
        .to_perm()
        .unwrap();
    let d = classify(&base, 2, std::slice::from_ref(&t)).unwrap();
    for x in w.elements() {
        let c = x.compose(&t).compose(&x.inverse());
        assert_eq!(classify(&base, 2, &[c]).unwrap(), d);
    }
    assert_eq!(d.parts[0].subgroup.order(), 2);
}

#[test]
fn quotient_for_the_trivial_group_has_one_value() {
    for p in [2u64, 3] {
        let ctx = Context::new(p, 1, 1).unwrap();
        let base = Domain::plain(&ctx, Arc::new(make_group("e").unwrap()));
        let f = ClassFunction::constant(&base, &CoeffValue::var(&ctx, &[1])).unwrap();
        let s = build_power_section(&ctx, 1).unwrap();
        let q = power_mod_transfer(&f, p as usize, &s).unwrap();
        assert_eq!(q.entries.len(), 1);
        // φ_H = [p] sends t_1 to t_p = t_0 at level 1.
        assert_eq!(q.entries.values().next().unwrap(), &CoeffValue::var(&ctx, &[0]));
    }
}

#[test]
fn squaring_on_c4() {
    let ctx = Context::new(2, 1, 2).unwrap();
    let base = Domain::plain(&ctx, Arc::new(make_group("C4").unwrap()));
    let g = base.group().unwrap().generators()[0].clone();
    let g2 = base.key(&[g.pow(2)]).unwrap();
    let f = ClassFunction::delta(&base, &g2, &CoeffValue::integer(5)).unwrap();
    let psi = adams(&f, 1).unwrap();
    for (key, v) in psi.entries() {
        let ClassKey::Tuple(CommutingTuple { entries }) = key else { panic!("plain key") };
        let hits = entries[0].pow(2) == g.pow(2);
        assert_eq!(v, &if hits { CoeffValue::integer(5) } else { CoeffValue::zero() }, "{key}");
    }
    assert_eq!(psi.entries().values().filter(|v| !v.is_zero()).count(), 2);
}

#[test]
fn doubling_twist_on_c4() {
    let ctx = Context::new(2, 1, 2).unwrap();
    let base = Domain::plain(&ctx, Arc::new(make_group("C4").unwrap()));
    let g = base.group().unwrap().generators()[0].clone();
    let key = base.key(std::slice::from_ref(&g)).unwrap();
    let f = ClassFunction::delta(&base, &key, &CoeffValue::var(&ctx, &[1])).unwrap();
    let tw = twist(&f, &Isogeny::scalar(&ctx, 2)).unwrap();
    assert_eq!(tw.lattice(), Some(&FiniteSubgroup::torsion(&ctx, 1).unwrap()));
    assert_eq!(tw.value(&key).unwrap(), &CoeffValue::var(&ctx, &[2]));
    assert_eq!(tw.entries().values().filter(|v| !v.is_zero()).count(), 1);
}
