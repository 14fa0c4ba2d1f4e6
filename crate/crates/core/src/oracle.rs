//! Brute-force verifiers for the classification, the power sections and the
//! identities satisfied by the power operation.
//!
//! Conjugacy orbits, subgroup lists and chain products are recomputed here
//! from group multiplication and point sets alone; the library code under
//! test is only used to produce the objects being checked.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classfn::{
    adams, aut_average, delta_basis, external_product, is_aut_invariant, power_mod_transfer, power_op,
    power_value, transfer, ClassFunction, CoeffValue,
};
use crate::classify::{classify, diagonal_datum, enumerate_sum_data, standard_representative, ClassKey, Domain, SumDatum};
use crate::error::{Error, Result};
use crate::groups::{delta_relabeling, make_group_with_cap, wreath_product, FiniteGroup, GroupHom, Perm};
use crate::isogeny::{
    build_power_section, is_power_section, mutate_section, twist_section, Isogeny, Section,
};
use crate::padic::{enumerate_subgroups, Context, FiniteSubgroup};

/// A concrete disagreement: the class where it happens and both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<ClassKey>,
    pub left: String,
    pub right: String,
}

/// The outcome of one check on one instance. `wall_time` is kept out of the
/// serialized form so that reports are reproducible byte for byte.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub counts: BTreeMap<String, u64>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    fn start(check: &str, params: &[(&str, String)]) -> Self {
        VerificationReport {
            check: check.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            pass: true,
            witness: None,
            counts: BTreeMap::new(),
            wall_time: Duration::ZERO,
        }
    }

    fn count(&mut self, name: &str, v: usize) {
        *self.counts.entry(name.to_string()).or_insert(0) += v as u64;
    }

    /// Records a failure; only the first witness is kept.
    fn fail(&mut self, class: impl Into<String>, key: Option<&ClassKey>, left: impl ToString, right: impl ToString) {
        self.pass = false;
        if self.witness.is_none() {
            self.witness = Some(Witness {
                class: class.into(),
                key: key.cloned(),
                left: left.to_string(),
                right: right.to_string(),
            });
        }
    }

    fn finish(mut self, t0: Instant) -> Self {
        self.wall_time = t0.elapsed();
        self
    }

    /// One line for logs: `PASS check {params}`.
    pub fn summary(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{} {} [{}]", if self.pass { "PASS" } else { "FAIL" }, self.check, params.join(" "))
    }
}

fn compare_functions(r: &mut VerificationReport, label: &str, lhs: &ClassFunction, rhs: &ClassFunction) {
    if let Some((k, a, b)) = lhs.first_difference(rhs) {
        r.fail(format!("{label}: {k}"), Some(&k), a, b);
    }
}

fn is_power_of(mut x: u64, p: u64) -> bool {
    while x > 1 {
        if !x.is_multiple_of(p) {
            return false;
        }
        x /= p;
    }
    x == 1
}

fn order_by_iteration(x: &Perm) -> u64 {
    let mut y = x.clone();
    let mut k = 1;
    while !y.is_identity() {
        y = y.compose(x);
        k += 1;
    }
    k
}

/// The largest `e` such that `G` has an element of order `p^e`.
pub fn p_exponent(g: &FiniteGroup, p: u64) -> u32 {
    g.elements()
        .iter()
        .map(order_by_iteration)
        .filter(|&o| is_power_of(o, p))
        .map(|mut o| {
            let mut e = 0;
            while o > 1 {
                o /= p;
                e += 1;
            }
            e
        })
        .max()
        .unwrap_or(0)
}

/// The largest `k` with `p^k <= m`.
pub fn log_floor(p: u64, m: usize) -> u32 {
    let mut k = 0;
    while p.pow(k + 1) <= m as u64 {
        k += 1;
    }
    k
}

/// Commuting `n`-tuples of `p`-elements of a group, grouped into conjugacy
/// orbits by brute force.
pub struct BruteClasses {
    pub tuples: Vec<Vec<Perm>>,
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
    index: HashMap<Vec<Perm>, usize>,
}

impl BruteClasses {
    pub fn new(g: &FiniteGroup, p: u64, n: usize) -> Self {
        let p_elements: Vec<&Perm> = g.elements().iter().filter(|x| is_power_of(order_by_iteration(x), p)).collect();
        let mut tuples: Vec<Vec<Perm>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for t in &tuples {
                for &x in &p_elements {
                    if t.iter().all(|y| x.compose(y) == y.compose(x)) {
                        let mut u = t.clone();
                        u.push(x.clone());
                        next.push(u);
                    }
                }
            }
            tuples = next;
        }
        let index: HashMap<Vec<Perm>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut class_of = vec![usize::MAX; tuples.len()];
        let mut representatives = Vec::new();
        let inverses: Vec<Perm> = g.elements().iter().map(|x| x.inverse()).collect();
        for i in 0..tuples.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(i);
            for (x, xi) in g.elements().iter().zip(&inverses) {
                let conj: Vec<Perm> = tuples[i].iter().map(|a| x.compose(a).compose(xi)).collect();
                class_of[index[&conj]] = c;
            }
        }
        BruteClasses { tuples, class_of, representatives, index }
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn class_of_tuple(&self, t: &[Perm]) -> Option<usize> {
        self.index.get(t).map(|&i| self.class_of[i])
    }
}

fn tuple_string(t: &[Perm]) -> String {
    let parts: Vec<String> = t.iter().map(|g| g.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn group_params(spec: &str, p: u64, n: usize) -> Vec<(&'static str, String)> {
    vec![("group", spec.to_string()), ("p", p.to_string()), ("n", n.to_string())]
}

/// Brute-force classes of `G ≀ Σ_m` against sum data, with both round trips.
pub fn verify_bijection(spec: &str, p: u64, n: usize, m: usize, cap: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut params = group_params(spec, p, n);
    params.push(("m", m.to_string()));
    let mut r = VerificationReport::start("bijection", &params);
    let g = make_group_with_cap(spec, cap)?;
    let ctx = Context::new(p, n, log_floor(p, m).max(1))?;
    let w = wreath_product(&g, m, cap)?;
    let brute = BruteClasses::new(&w, p, n);
    let base = Domain::plain(&ctx, Arc::new(g));
    let data = enumerate_sum_data(&base, m)?;
    r.count("wreath_order", w.order());
    r.count("brute_classes", brute.class_count());
    r.count("sum_data", data.len());
    if brute.class_count() != data.len() {
        r.fail("class count", None, brute.class_count(), data.len());
    }
    let mut hit: Vec<Option<&SumDatum>> = vec![None; brute.class_count()];
    for d in &data {
        let t = standard_representative(&base, m, d)?;
        let back = classify(&base, m, &t)?;
        if back != *d {
            r.fail(format!("classify(standard_representative({d}))"), None, back, d);
        }
        match brute.class_of_tuple(&t) {
            None => r.fail(format!("representative of {d}"), None, tuple_string(&t), "not a commuting p-tuple"),
            Some(c) => match hit[c] {
                Some(other) => r.fail("two data in one class", None, other, d),
                None => hit[c] = Some(d),
            },
        }
    }
    for (c, &i) in brute.representatives.iter().enumerate() {
        let t = &brute.tuples[i];
        let d = classify(&base, m, t)?;
        let back = standard_representative(&base, m, &d)?;
        if brute.class_of_tuple(&back) != Some(c) {
            r.fail(format!("round trip of {}", tuple_string(t)), None, tuple_string(&back), &d);
        }
    }
    Ok(r.finish(t0))
}

type Point = Vec<i64>;

fn all_points(q: i64, n: usize) -> Vec<Point> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Point| {
                (0..q).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn span(q: i64, gens: &[&Point]) -> Vec<Point> {
    let n = gens.first().map_or(0, |g| g.len());
    let mut set: BTreeSet<Point> = BTreeSet::new();
    set.insert(vec![0; n]);
    let mut frontier: Vec<Point> = vec![vec![0; n]];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w: Point = v.iter().zip(g.iter()).map(|(a, b)| (a + b).rem_euclid(q)).collect();
            if set.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    set.into_iter().collect()
}

fn element_set(h: &FiniteSubgroup) -> Vec<Point> {
    let mut e: Vec<Point> = h.elements().into_iter().map(|v| v.coords).collect();
    e.sort();
    e
}

/// `|Sub_{p^k}((Q_p/Z_p)^2)|` by the library and by spans of pairs of
/// torsion points, compared with `expected` when given.
pub fn verify_subgroup_counts(p: u64, k: u32, expected: Option<usize>) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut r = VerificationReport::start("subgroups", &[("p", p.to_string()), ("n", "2".into()), ("k", k.to_string())]);
    let ctx = Context::new(p, 2, k.max(1))?;
    let q = ctx.modulus();
    let order = p.pow(k) as usize;
    let points = all_points(q, 2);
    let mut brute: BTreeSet<Vec<Point>> = BTreeSet::new();
    for (i, u) in points.iter().enumerate() {
        for v in &points[i..] {
            let s = span(q, &[u, v]);
            if s.len() == order {
                brute.insert(s);
            }
        }
    }
    let lib: BTreeSet<Vec<Point>> = enumerate_subgroups(&ctx, k).iter().map(element_set).collect();
    r.count("library", lib.len());
    r.count("brute_force", brute.len());
    if lib != brute {
        r.fail("subgroup lists", None, lib.len(), brute.len());
    }
    if let Some(e) = expected {
        r.count("expected", e);
        if lib.len() != e {
            r.fail("expected count", None, lib.len(), e);
        }
    }
    Ok(r.finish(t0))
}

type BigMat = Vec<Vec<BigInt>>;

fn big_mul(a: &BigMat, b: &BigMat) -> BigMat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|l| &a[i][l] * &b[l][j]).sum()).collect())
        .collect()
}

fn big_scalar(n: usize, c: i64) -> BigMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::from(c) } else { BigInt::zero() }).collect())
        .collect()
}

fn apply_mod(a: &[Vec<i64>], v: &[i64], q: i64) -> Point {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| (x * y).rem_euclid(q)).sum::<i64>().rem_euclid(q))
        .collect()
}

fn image_set(a: &[Vec<i64>], set: &[Point], q: i64) -> Vec<Point> {
    let s: BTreeSet<Point> = set.iter().map(|v| apply_mod(a, v, q)).collect();
    s.into_iter().collect()
}

fn mat_string(m: &BigMat) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

/// The rank-2 power section up to `Λ*[p^level]`: order-`p` values, chain
/// independence, scalar values on `Λ*[p^k]`, and the power-section law.
pub fn verify_height_two_section(p: u64, level: u32) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut r = VerificationReport::start("section", &[("p", p.to_string()), ("n", "2".into()), ("level", level.to_string())]);
    let ctx = Context::new(p, 2, level)?;
    let q = ctx.modulus();
    let s = build_power_section(&ctx, level)?;
    let points = all_points(q, 2);
    let p_torsion: Vec<Point> = points.iter().filter(|v| v.iter().all(|&x| (x * p as i64) % q == 0)).cloned().collect();
    let mut order_p: Vec<(HashSet<Point>, Vec<Vec<i64>>, BigMat)> = Vec::new();
    for h in enumerate_subgroups(&ctx, 1) {
        let a = s.get(&h)?;
        let elems = element_set(&h);
        let am = a.mat_mod(q);
        if big_mul(&a.mat().to_vec(), &a.mat().to_vec()) != big_scalar(2, p as i64) {
            r.fail(format!("A^2 at {h}"), None, a, format!("{p}I"));
        }
        let ker: Vec<Point> = points.iter().filter(|v| apply_mod(&am, v, q).iter().all(|&x| x == 0)).cloned().collect();
        if ker != elems {
            r.fail(format!("kernel at {h}"), None, ker.len(), elems.len());
        }
        if image_set(&am, &p_torsion, q) != elems {
            r.fail(format!("image of Λ*[p] at {h}"), None, a, &h);
        }
        order_p.push((elems.into_iter().collect(), am, a.mat().to_vec()));
    }
    r.count("order_p_subgroups", order_p.len());
    for k in 0..=level {
        let h = FiniteSubgroup::torsion(&ctx, k)?;
        let a = s.get(&h)?;
        if a.mat() != big_scalar(2, ctx.pow(k)).as_slice() {
            r.fail(format!("value at Λ*[p^{k}]"), None, a, format!("{}I", ctx.pow(k)));
        }
    }
    let mut memo: HashMap<Vec<Point>, BTreeSet<BigMat>> = HashMap::new();
    let mut chains_total = 0;
    for (h, a) in s.entries() {
        let products = chain_products_by_sets(&element_set(h), &order_p, q, &mut memo);
        chains_total += products.len();
        if products.len() != 1 || !products.contains(a.mat()) {
            let found: Vec<String> = products.iter().map(mat_string).collect();
            r.fail(format!("chain products at {h}"), None, found.join(" "), a);
        }
    }
    r.count("subgroups", s.len());
    r.count("distinct_chain_products", chains_total);
    if !is_power_section(&s)?.is_pass() {
        r.fail("power-section law", None, "FAIL", "PASS");
    }
    Ok(r.finish(t0))
}

fn chain_products_by_sets(
    set: &[Point],
    order_p: &[(HashSet<Point>, Vec<Vec<i64>>, BigMat)],
    q: i64,
    memo: &mut HashMap<Vec<Point>, BTreeSet<BigMat>>,
) -> BTreeSet<BigMat> {
    if let Some(v) = memo.get(set) {
        return v.clone();
    }
    let mut out = BTreeSet::new();
    if set.len() == 1 {
        out.insert(big_scalar(set[0].len(), 1));
    } else {
        let members: HashSet<&Point> = set.iter().collect();
        for (kset, am, a) in order_p {
            if kset.iter().all(|v| members.contains(v)) {
                let image = image_set(am, set, q);
                for m in chain_products_by_sets(&image, order_p, q, memo) {
                    out.insert(big_mul(&m, a));
                }
            }
        }
    }
    memo.insert(set.to_vec(), out.clone());
    out
}

/// A domain, context and built section sized for `P_{p^t} ∘ P_{p^l}`.
///
/// The level leaves two spare digits beyond the element orders so that a
/// unit change of a section value stays visible in the coefficients.
pub fn global_power_setup(spec: &str, p: u64, n: usize, k: u32, cap: usize) -> Result<(Domain, Section)> {
    let g = make_group_with_cap(spec, cap)?;
    let level = k + p_exponent(&g, p) + 2;
    let ctx = Context::new(p, n, level)?;
    let s = build_power_section(&ctx, k)?;
    Ok((Domain::plain(&ctx, Arc::new(g)), s))
}

/// The non-power sections shipped for testing the converse: each changes
/// one value of `s` by a unit.
pub fn shipped_mutations(s: &Section) -> Result<Vec<(String, Section)>> {
    let ctx = *s.ctx();
    let top = s.level();
    let neg = Isogeny::scalar(&ctx, -1);
    let mut out = Vec::new();
    match ctx.n() {
        1 => {
            let h = FiniteSubgroup::torsion(&ctx, top)?;
            out.push((format!("negate at {h}"), mutate_section(s, &h, &neg)?));
        }
        _ => {
            let least = enumerate_subgroups(&ctx, 1).into_iter().next().expect("order-p subgroups exist");
            let mut rows = vec![vec![0i64; ctx.n()]; ctx.n()];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = 1;
            }
            rows[0][1] = 1;
            let shear = Isogeny::from_rows(&ctx, &rows)?;
            out.push((format!("shear at {least}"), mutate_section(s, &least, &shear)?));
            if top >= 2 {
                let h = FiniteSubgroup::torsion(&ctx, 1)?;
                out.push((format!("negate at {h}"), mutate_section(s, &h, &neg)?));
            }
        }
    }
    Ok(out)
}

/// `∇* P_{p^{t+l}}(f) = P_{p^t}(P_{p^l}(f))` for every delta function `f`.
pub fn verify_global_power(base: &Domain, t: u32, l: u32, s: &Section, label: &str) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let ctx = *base.ctx();
    let mut params = group_params(&base.spec(), ctx.p(), ctx.n());
    params.extend([("t", t.to_string()), ("l", l.to_string()), ("level", ctx.level().to_string()), ("section", label.to_string())]);
    let mut r = VerificationReport::start("global-power", &params);
    let a = ctx.pow(l) as usize;
    let b = ctx.pow(t) as usize;
    let inner = Domain::wreath(base, a);
    let outer = Domain::wreath(&inner, b);
    let mut flat = Vec::new();
    for key in outer.class_keys()? {
        let rep = outer.representative(&key)?;
        flat.push((key, classify(base, a * b, &rep)?));
    }
    r.count("classes", flat.len());
    let deltas = delta_basis(base)?;
    r.count("functions", deltas.len());
    for f in &deltas {
        let composite = power_op(&power_op(f, a, s)?, b, s)?;
        for (key, datum) in &flat {
            let lhs = power_value(f, s, datum)?;
            let rhs = composite.value(key)?;
            if lhs != *rhs {
                r.fail(key.to_string(), Some(key), lhs, rhs);
            }
        }
        if !r.pass {
            break;
        }
    }
    Ok(r.finish(t0))
}

fn random_functions(domain: &Domain, seed: u64, count: usize) -> Result<Vec<ClassFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| ClassFunction::random(domain, &mut rng)).collect()
}

/// The map from classes of one domain to classes of another along a map of
/// tuples, computed once and reused for every function.
fn key_map(source: &Domain, target: &Domain, f: impl Fn(&[Perm]) -> Vec<Perm>) -> Result<Vec<(ClassKey, ClassKey)>> {
    source
        .class_keys()?
        .into_iter()
        .map(|k| {
            let rep = source.representative(&k)?;
            let moved = target.key(&f(&rep))?;
            Ok((k, moved))
        })
        .collect()
}

/// The second factor `K` for relation (2): `C_p` when `G × C_p` has at
/// most 16 classes of tuples, the trivial group otherwise.
fn second_factor(g: &FiniteGroup, p: u64, n: usize, cap: usize) -> Result<FiniteGroup> {
    let cp = make_group_with_cap(&format!("C{p}"), cap)?;
    let classes = |x: &FiniteGroup| BruteClasses::new(x, p, n).class_count();
    if classes(g) * classes(&cp) <= 16 {
        Ok(cp)
    } else {
        make_group_with_cap("e", cap)
    }
}

fn power_of_domain(base: &Domain, m: usize) -> Result<Domain> {
    let mut d = base.clone();
    for _ in 1..m {
        d = Domain::product(base, &d)?;
    }
    Ok(d)
}

/// Relations (1)–(4) for random functions: restriction to
/// `G ≀ (Σ_m × Σ_l)`, compatibility with `δ` over `G × K`, restriction to
/// `G^{m+l}`, and the sum formula through transfers. Relations (2)–(4)
/// depend only on `m + l` and are checked when `l = 1`.
pub fn verify_relations(
    spec: &str,
    p: u64,
    n: usize,
    m: usize,
    l: usize,
    seed: u64,
    count: usize,
    cap: usize,
) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let g = Arc::new(make_group_with_cap(spec, cap)?);
    let full = l == 1;
    let second = second_factor(&g, p, n, cap)?;
    let mut params = group_params(spec, p, n);
    params.extend([("m", m.to_string()), ("l", l.to_string()), ("seed", seed.to_string()), ("functions", count.to_string())]);
    if full {
        params.push(("second_factor", second.name().to_string()));
    }
    let mut r = VerificationReport::start("relations", &params);
    let total = m + l;
    let k = log_floor(p, total);
    let ctx = Context::new(p, n, (k + p_exponent(&g, p)).max(1))?;
    let s = build_power_section(&ctx, k)?;
    let base = Domain::plain(&ctx, g.clone());
    let d = g.degree();
    let fs = random_functions(&base, seed, count)?;
    let gs = random_functions(&base, seed.wrapping_add(1 << 32), count)?;

    let split = Domain::product(&Domain::wreath(&base, m), &Domain::wreath(&base, l))?;
    let big = Domain::wreath(&base, total);
    let rel1 = key_map(&split, &big, |t| t.to_vec())?;
    r.count("relation1_classes", rel1.len());

    let kbase = Domain::plain(&ctx, Arc::new(second));
    let pair = Domain::product(&base, &kbase)?;
    let wreath_pair = Domain::wreath(&pair, total);
    let pair_of_wreaths = Domain::product(&big, &Domain::wreath(&kbase, total))?;
    let relabel = delta_relabeling(d, kbase.degree(), total);
    let rel2 = if full {
        key_map(&wreath_pair, &pair_of_wreaths, |t| t.iter().map(|x| x.relabel(&relabel)).collect())?
    } else {
        Vec::new()
    };
    r.count("relation2_classes", rel2.len());
    let ks = random_functions(&kbase, seed.wrapping_add(1 << 33), count)?;

    let diag = power_of_domain(&base, total)?;
    let one = Domain::wreath(&base, 1);
    let mut rel3 = Vec::new();
    for key in if full { diag.class_keys()? } else { Vec::new() } {
        let rep = diag.representative(&key)?;
        let flat = big.key(&rep)?;
        let comps: Result<Vec<ClassKey>> = (0..total)
            .map(|i| {
                let c: Result<Vec<Perm>> = rep.iter().map(|x| x.restrict(i * d, d)).collect();
                one.key(&c?)
            })
            .collect();
        rel3.push((key, flat, comps?));
    }
    r.count("relation3_classes", rel3.len());

    let w = wreath_product(&g, total, cap)?;
    let mut plans = Vec::new();
    for j in (0..=total).filter(|_| full) {
        let left = wreath_product(&g, j, cap)?;
        let right = wreath_product(&g, total - j, cap)?;
        let kgrp = Arc::new(left.direct_product(&right, cap)?);
        let kdom = Domain::product(&Domain::wreath(&base, j), &Domain::wreath(&base, total - j))?;
        plans.push(TransferPlan::new(&GroupHom::inclusion(kgrp), &w, &kdom, &big)?);
    }

    for (i, ((f, f2), fk)) in fs.iter().zip(&gs).zip(&ks).enumerate() {
        let pm = power_op(f, m, &s)?;
        let pl = power_op(f, l, &s)?;
        let pt = power_op(f, total, &s)?;
        let ext = external_product(&pm, &pl)?;
        for (src, dst) in &rel1 {
            let (a, b) = (pt.value(dst)?, ext.value(src)?);
            if a != b {
                r.fail(format!("relation 1, f#{i}: {src}"), Some(src), a, b);
            }
        }

        r.count("functions", 1);
        if !full {
            continue;
        }
        let fg = external_product(f, fk)?;
        let lhs2 = power_op(&fg, total, &s)?;
        let pk = power_op(fk, total, &s)?;
        for (src, dst) in &rel2 {
            let ClassKey::Pair { left, right } = dst else {
                return Err(Error::Internal("product domain produced a non-pair key".into()));
            };
            let a = lhs2.value(src)?;
            let b = pt.value(left)? * pk.value(right)?;
            if *a != b {
                r.fail(format!("relation 2, f#{i}: {src}"), Some(src), a, b);
            }
        }

        let p1 = power_op(f, 1, &s)?;
        for (key, flat, comps) in &rel3 {
            let mut rhs = CoeffValue::one();
            for c in comps {
                rhs = &rhs * p1.value(c)?;
            }
            let lhs = pt.value(flat)?;
            if *lhs != rhs {
                r.fail(format!("relation 3, f#{i}: {key}"), Some(key), lhs, rhs);
            }
        }

        let lhs4 = power_op(&f.add(f2)?, total, &s)?;
        let mut rhs4 = ClassFunction::constant(&big, &CoeffValue::zero())?;
        for (j, plan) in plans.iter().enumerate() {
            let term = external_product(&power_op(f, j, &s)?, &power_op(f2, total - j, &s)?)?;
            let tr = plan.apply(&term, &big)?;
            if i == 0 && j == 0 {
                let direct = transfer(&term, &GroupHom::inclusion(plan.source.clone()), &w, &big)?;
                compare_functions(&mut r, "transfer plan", &tr, &direct);
            }
            rhs4 = rhs4.add(&tr)?;
        }
        compare_functions(&mut r, &format!("relation 4, f#{i}"), &lhs4, &rhs4);
        if !r.pass {
            break;
        }
    }
    Ok(r.finish(t0))
}

/// The classes of the pulled-back tuples of every target class under a
/// transfer, so that many functions can be transferred along the same
/// inclusion cheaply.
struct TransferPlan {
    source: Arc<FiniteGroup>,
    terms: Vec<(ClassKey, Vec<ClassKey>)>,
}

impl TransferPlan {
    fn new(k: &GroupHom, g: &FiniteGroup, source: &Domain, target: &Domain) -> Result<Self> {
        let back = k.inverse_map()?;
        let mut terms = Vec::new();
        for key in target.class_keys()? {
            let alpha = target.representative(&key)?;
            let mut pulled = Vec::new();
            for x in crate::groups::fixed_cosets(g, k, &alpha)? {
                let t: Vec<Perm> = alpha.iter().map(|a| back[&a.conj(&x)].clone()).collect();
                pulled.push(source.key(&t)?);
            }
            terms.push((key, pulled));
        }
        Ok(TransferPlan { source: k.source().clone(), terms })
    }

    fn apply(&self, f: &ClassFunction, target: &Domain) -> Result<ClassFunction> {
        let mut values = HashMap::new();
        for (key, pulled) in &self.terms {
            let mut total = CoeffValue::zero();
            for t in pulled {
                total = &total + f.value(t)?;
            }
            values.insert(key.clone(), total);
        }
        ClassFunction::from_fn(target, |k, _| {
            values.remove(k).ok_or_else(|| Error::MissingEntry(format!("transfer has no value at {k}")))
        })
    }
}

/// The sections compared by the descent check: the built power section, a
/// unit mutation of it, and the section twisted by a unit at `φ_e`.
pub fn descent_sections(s: &Section) -> Result<Vec<(String, Section)>> {
    let ctx = *s.ctx();
    let mut out = vec![("built".to_string(), s.clone())];
    out.extend(shipped_mutations(s)?.into_iter().take(1));
    let u = if ctx.n() == 1 {
        Isogeny::scalar(&ctx, -1)
    } else {
        Isogeny::from_rows(&ctx, &[vec![1, 1], vec![0, 1]])?
    };
    out.push((format!("twisted by {u}"), twist_section(s, &u)?));
    Ok(out)
}

/// For `Aut`-averaged random `f`, `P_m(f)` is invariant and the same for
/// every section in [`descent_sections`].
pub fn verify_descent(spec: &str, p: u64, n: usize, m: usize, seed: u64, count: usize, cap: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut params = group_params(spec, p, n);
    params.extend([("m", m.to_string()), ("seed", seed.to_string()), ("functions", count.to_string())]);
    let mut r = VerificationReport::start("descent", &params);
    let g = make_group_with_cap(spec, cap)?;
    let k = log_floor(p, m);
    let ctx = Context::new(p, n, (k + p_exponent(&g, p)).max(1))?;
    let built = build_power_section(&ctx, k.max(1))?;
    let sections = descent_sections(&built)?;
    r.count("sections", sections.len());
    let base = Domain::plain(&ctx, Arc::new(g));
    for (i, f) in random_functions(&base, seed, count)?.iter().enumerate() {
        let avg = aut_average(f, cap as u64)?;
        if !is_aut_invariant(&avg)? {
            r.fail(format!("average of f#{i}"), None, "not invariant", "invariant");
            continue;
        }
        let reference = power_op(&avg, m, &sections[0].1)?;
        if !is_aut_invariant(&reference)? {
            r.fail(format!("P_{m} of averaged f#{i}"), None, "not invariant", "invariant");
        }
        for (label, s2) in &sections[1..] {
            compare_functions(&mut r, &format!("built vs {label}, f#{i}"), &reference, &power_op(&avg, m, s2)?);
        }
    }
    r.count("functions", count);
    Ok(r.finish(t0))
}

/// `ψ^{p^a} ψ^{p^b} = ψ^{p^{a+b}}` for `a + b <= 2`, and `ψ^{p^k}` agrees
/// with `P_{p^{nk}}/I` at the diagonal data `(Λ*[p^k], [α q*])`.
pub fn verify_adams(spec: &str, p: u64, n: usize, seed: u64, count: usize, cap: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut params = group_params(spec, p, n);
    params.extend([("seed", seed.to_string()), ("functions", count.to_string())]);
    let mut r = VerificationReport::start("adams", &params);
    let g = make_group_with_cap(spec, cap)?;
    let kmax = 2;
    let ctx = Context::new(p, n, n as u32 * kmax + p_exponent(&g, p))?;
    let s = build_power_section(&ctx, n as u32 * kmax)?;
    let base = Domain::plain(&ctx, Arc::new(g));
    for (i, f) in random_functions(&base, seed, count)?.iter().enumerate() {
        for a in 0..=2u32 {
            for b in 0..=2 - a {
                compare_functions(&mut r, &format!("ψ^{a}ψ^{b}, f#{i}"), &adams(&adams(f, b)?, a)?, &adams(f, a + b)?);
            }
        }
        for k in 1..=kmax {
            let psi = adams(f, k)?;
            let h = FiniteSubgroup::torsion(&ctx, k)?;
            let quotient = power_mod_transfer(f, h.order() as usize, &s)?;
            for (key, value) in psi.entries() {
                let datum = diagonal_datum(&base, &h, &base.representative(key)?)?;
                let other = quotient
                    .entries
                    .get(&datum)
                    .ok_or_else(|| Error::MissingEntry(format!("no quotient value at ({})", datum.subgroup)))?;
                if other != value {
                    r.fail(format!("ψ^(p^{k}) vs P/I, f#{i}: {key}"), Some(key), value, other);
                }
            }
        }
    }
    r.count("functions", count);
    Ok(r.finish(t0))
}

fn block_orbit(tuple: &[Perm], d: usize, m: usize) -> usize {
    let mut seen = vec![false; m];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut size = 1;
    while let Some(b) = stack.pop() {
        for g in tuple {
            let c = g.apply(b * d) / d;
            if !seen[c] {
                seen[c] = true;
                size += 1;
                stack.push(c);
            }
        }
    }
    size
}

/// Every class of `G ≀ Σ_{p^k}` is transitive or meets
/// `(G ≀ Σ_{p^{k-1}})^p`, so the pair (quotient, restriction) is injective.
pub fn verify_injection(spec: &str, p: u64, n: usize, k: u32, cap: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut params = group_params(spec, p, n);
    params.push(("k", k.to_string()));
    let mut r = VerificationReport::start("injection", &params);
    let g = make_group_with_cap(spec, cap)?;
    let d = g.degree();
    let m = p.pow(k) as usize;
    let chunk = (m / p as usize).max(1);
    let w = wreath_product(&g, m, cap)?;
    let brute = BruteClasses::new(&w, p, n);
    let mut transitive = vec![false; brute.class_count()];
    let mut restricted = vec![false; brute.class_count()];
    for (t, &c) in brute.tuples.iter().zip(&brute.class_of) {
        if block_orbit(t, d, m) == m {
            transitive[c] = true;
        }
        let keeps_chunks = t.iter().all(|x| (0..m).all(|b| x.apply(b * d) / d / chunk == b / chunk));
        if k > 0 && keeps_chunks {
            restricted[c] = true;
        }
    }
    r.count("classes", brute.class_count());
    r.count("transitive", transitive.iter().filter(|&&x| x).count());
    r.count("restricted", restricted.iter().filter(|&&x| x).count());
    for (c, &i) in brute.representatives.iter().enumerate() {
        if !transitive[c] && !restricted[c] {
            r.fail(tuple_string(&brute.tuples[i]), None, "not covered", "covered");
        }
    }
    Ok(r.finish(t0))
}

/// All abelian subgroups of `G`, as sorted element lists.
pub fn abelian_subgroups(g: &FiniteGroup) -> Vec<Vec<Perm>> {
    let close = |gens: &[Perm]| -> Vec<Perm> {
        let mut set: BTreeSet<Perm> = BTreeSet::new();
        set.insert(g.identity());
        let mut frontier = vec![g.identity()];
        while let Some(x) = frontier.pop() {
            for y in gens {
                let z = x.compose(y);
                if set.insert(z.clone()) {
                    frontier.push(z);
                }
            }
        }
        set.into_iter().collect()
    };
    let mut found: BTreeSet<Vec<Perm>> = BTreeSet::new();
    let mut frontier = vec![vec![g.identity()]];
    found.insert(vec![g.identity()]);
    while let Some(a) = frontier.pop() {
        for x in g.elements() {
            if a.contains(x) || !a.iter().all(|y| x.compose(y) == y.compose(x)) {
                continue;
            }
            let mut gens = a.clone();
            gens.push(x.clone());
            let b = close(&gens);
            if found.insert(b.clone()) {
                frontier.push(b);
            }
        }
    }
    found.into_iter().collect()
}

/// Every datum `(H, [α])` of `G` with `|H| = p^k` comes from an abelian
/// subgroup of `G`.
pub fn verify_abelian_embedding(spec: &str, p: u64, n: usize, k: u32, cap: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut params = group_params(spec, p, n);
    params.push(("k", k.to_string()));
    let mut r = VerificationReport::start("embedding", &params);
    let g = Arc::new(make_group_with_cap(spec, cap)?);
    let ctx = Context::new(p, n, k.max(1))?;
    let dom = Domain::plain(&ctx, g.clone());
    let subs = abelian_subgroups(&g);
    let mut image: BTreeSet<ClassKey> = BTreeSet::new();
    for a in &subs {
        let sub = FiniteGroup::from_generators("A", g.degree(), a.clone(), cap)?;
        for t in BruteClasses::new(&sub, p, n).tuples {
            image.insert(dom.key(&t)?);
        }
    }
    let keys = dom.class_keys()?;
    let hs = enumerate_subgroups(&ctx, k);
    r.count("abelian_subgroups", subs.len());
    r.count("data", keys.len() * hs.len());
    r.count("image", image.len() * hs.len());
    for key in &keys {
        if !image.contains(key) {
            r.fail(key.to_string(), Some(key), "not in image", "in image");
        }
    }
    Ok(r.finish(t0))
}

/// Products of sum data along the `p`-adic digits of `m`, joined block-wise,
/// reach every class of `G ≀ Σ_m`.
pub fn verify_assembly(spec: &str, p: u64, n: usize, m: usize, cap: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut params = group_params(spec, p, n);
    params.push(("m", m.to_string()));
    let mut r = VerificationReport::start("assembly", &params);
    let g = make_group_with_cap(spec, cap)?;
    let w = wreath_product(&g, m, cap)?;
    let brute = BruteClasses::new(&w, p, n);
    let ctx = Context::new(p, n, log_floor(p, m).max(1))?;
    let base = Domain::plain(&ctx, Arc::new(g));
    let mut sizes = Vec::new();
    let (mut rest, mut pj) = (m, 1usize);
    while rest > 0 {
        for _ in 0..rest % p as usize {
            sizes.push(pj);
        }
        rest /= p as usize;
        pj *= p as usize;
    }
    let mut blocks: Vec<Vec<Vec<Perm>>> = Vec::new();
    for &size in &sizes {
        let reps: Result<Vec<Vec<Perm>>> = enumerate_sum_data(&base, size)?
            .iter()
            .map(|d| standard_representative(&base, size, d))
            .collect();
        blocks.push(reps?);
    }
    let mut joined: Vec<Vec<Perm>> = vec![vec![Perm::identity(0); n]];
    for reps in &blocks {
        let mut next = Vec::new();
        for t in &joined {
            for u in reps {
                next.push(t.iter().zip(u).map(|(a, b)| a.join(b)).collect());
            }
        }
        joined = next;
    }
    let mut image = BTreeSet::new();
    for t in &joined {
        match brute.class_of_tuple(t) {
            Some(c) => {
                image.insert(c);
            }
            None => r.fail(tuple_string(t), None, "not a commuting p-tuple", "class of the wreath product"),
        }
    }
    r.count("products", joined.len());
    r.count("image", image.len());
    r.count("classes", brute.class_count());
    if image.len() != brute.class_count() {
        r.fail("assembly image", None, image.len(), brute.class_count());
    }
    Ok(r.finish(t0))
}

/// Parameters narrowing a suite's default grid; `None` keeps every value.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub group: Option<String>,
    pub p: Option<u64>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub k: Option<u32>,
    pub t: Option<u32>,
    pub seed: u64,
    pub functions: usize,
    pub mutated: bool,
    pub cap: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            group: None,
            p: None,
            n: None,
            m: None,
            l: None,
            k: None,
            t: None,
            seed: 0,
            functions: 20,
            mutated: false,
            cap: crate::groups::DEFAULT_CAP,
        }
    }
}

pub const SUITES: [&str; 10] = [
    "bijection",
    "subgroups",
    "section",
    "global-power",
    "relations",
    "descent",
    "adams",
    "injection",
    "embedding",
    "assembly",
];

const CENSUS_GROUPS: [&str; 6] = ["e", "C2", "C3", "C4", "C2xC2", "S3"];

fn wreath_fits(spec: &str, m: usize, n: usize) -> bool {
    let order = make_group_with_cap(spec, 1 << 20).map(|g| g.order() as u128).unwrap_or(u128::MAX);
    let cap = if n == 1 { 10_000 } else { 2_000 };
    order.checked_pow(m as u32).map(|x| x * crate::groups::factorial(m)).is_some_and(|x| x <= cap)
}

#[derive(Clone, Debug)]
enum Instance {
    Bijection { g: String, p: u64, n: usize, m: usize },
    Subgroups { p: u64, k: u32, expected: Option<usize> },
    Section { p: u64, level: u32 },
    GlobalPower { g: String, p: u64, n: usize, t: u32, l: u32 },
    Relations { g: String, p: u64, n: usize, m: usize, l: usize },
    Descent { g: String, p: u64, n: usize, m: usize },
    Adams { g: String, p: u64, n: usize },
    Injection { g: String, p: u64, n: usize, k: u32 },
    Embedding { g: String, p: u64, n: usize, k: u32 },
    Assembly { g: String, p: u64, n: usize, m: usize },
}

fn grid(suite: &str, o: &SuiteOptions) -> Result<Vec<Instance>> {
    let group_ok = |g: &str| o.group.as_deref().is_none_or(|x| x == g);
    let p_ok = |p: u64| o.p.is_none_or(|x| x == p);
    let n_ok = |n: usize| o.n.is_none_or(|x| x == n);
    let m_ok = |m: usize| o.m.is_none_or(|x| x == m);
    let k_ok = |k: u32| o.k.is_none_or(|x| x == k);
    let mut out = Vec::new();
    let groups_for = |extra: &[&'static str]| -> Vec<String> {
        let mut gs: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
        if let Some(g) = &o.group {
            if !gs.contains(g) {
                gs.push(g.clone());
            }
        }
        gs
    };
    match suite {
        "bijection" | "assembly" => {
            for p in [2u64, 3] {
                for n in [1usize, 2] {
                    for g in groups_for(&CENSUS_GROUPS) {
                        for m in 1..=if p == 2 { 4 } else { 3 } {
                            if group_ok(&g) && p_ok(p) && n_ok(n) && m_ok(m) && wreath_fits(&g, m, n) {
                                out.push(if suite == "bijection" {
                                    Instance::Bijection { g: g.clone(), p, n, m }
                                } else {
                                    Instance::Assembly { g: g.clone(), p, n, m }
                                });
                            }
                        }
                    }
                }
            }
        }
        "subgroups" => {
            for (p, k, e) in [(2u64, 1u32, 3usize), (3, 1, 4), (5, 1, 6), (7, 1, 8), (2, 2, 7)] {
                if p_ok(p) && k_ok(k) && n_ok(2) {
                    out.push(Instance::Subgroups { p, k, expected: Some(e) });
                }
            }
        }
        "section" => {
            for p in [2u64, 3] {
                if p_ok(p) && n_ok(2) {
                    out.push(Instance::Section { p, level: o.k.unwrap_or(3) });
                }
            }
        }
        "global-power" => {
            for (g, p) in [("e", 2u64), ("C2", 2), ("e", 3)] {
                for n in [1usize, 2] {
                    let (t, l) = (o.t.unwrap_or(1), o.l.map_or(1, |x| x as u32));
                    if group_ok(g) && p_ok(p) && n_ok(n) {
                        out.push(Instance::GlobalPower { g: g.to_string(), p, n, t, l });
                    }
                }
            }
            if let (Some(g), true) = (&o.group, out.is_empty()) {
                for n in [1usize, 2] {
                    let p = o.p.unwrap_or(2);
                    if n_ok(n) {
                        out.push(Instance::GlobalPower { g: g.clone(), p, n, t: o.t.unwrap_or(1), l: o.l.map_or(1, |x| x as u32) });
                    }
                }
            }
        }
        "relations" => {
            for p in [2u64, 3] {
                let gs = if p == 2 { ["e", "C2"] } else { ["e", "C3"] };
                for g in groups_for(&gs) {
                    for n in [1usize, 2] {
                        for m in 1..=3 {
                            for l in 1..=4 - m {
                                if group_ok(&g) && p_ok(p) && n_ok(n) && m_ok(m) && o.l.is_none_or(|x| x == l) {
                                    out.push(Instance::Relations { g: g.clone(), p, n, m, l });
                                }
                            }
                        }
                    }
                }
            }
        }
        "descent" => {
            for (g, p) in [("C2", 2u64), ("C4", 2), ("S3", 2), ("S3", 3)] {
                for n in [1usize, 2] {
                    let m = o.m.unwrap_or(p as usize);
                    if group_ok(g) && p_ok(p) && n_ok(n) {
                        out.push(Instance::Descent { g: g.to_string(), p, n, m });
                    }
                }
            }
        }
        "adams" => {
            for (g, p) in [("e", 2u64), ("C2", 2), ("C4", 2), ("S3", 2), ("C3", 3), ("S3", 3)] {
                for n in [1usize, 2] {
                    if group_ok(g) && p_ok(p) && n_ok(n) {
                        out.push(Instance::Adams { g: g.to_string(), p, n });
                    }
                }
            }
        }
        "injection" => {
            for (g, p) in [("e", 2u64), ("C2", 2), ("C4", 2), ("e", 3), ("C3", 3)] {
                for n in [1usize, 2] {
                    for k in 1..=2u32 {
                        let m = p.pow(k) as usize;
                        if group_ok(g) && p_ok(p) && n_ok(n) && k_ok(k) && wreath_fits(g, m, n) {
                            out.push(Instance::Injection { g: g.to_string(), p, n, k });
                        }
                    }
                }
            }
        }
        "embedding" => {
            for (g, p) in [("S3", 2u64), ("S3", 3), ("D4", 2), ("C2xC2", 2), ("S4", 2), ("S4", 3)] {
                for n in [1usize, 2] {
                    for k in 1..=2u32 {
                        if group_ok(g) && p_ok(p) && n_ok(n) && k_ok(k) {
                            out.push(Instance::Embedding { g: g.to_string(), p, n, k });
                        }
                    }
                }
            }
        }
        other => return Err(Error::invalid(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
    if out.is_empty() {
        return Err(Error::invalid(format!("the parameters select no instances of suite {suite}")));
    }
    Ok(out)
}

fn run_instance(inst: &Instance, o: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let cap = o.cap;
    Ok(match inst {
        Instance::Bijection { g, p, n, m } => vec![verify_bijection(g, *p, *n, *m, cap)?],
        Instance::Subgroups { p, k, expected } => vec![verify_subgroup_counts(*p, *k, *expected)?],
        Instance::Section { p, level } => vec![verify_height_two_section(*p, *level)?],
        Instance::GlobalPower { g, p, n, t, l } => {
            let (base, s) = global_power_setup(g, *p, *n, t + l, cap)?;
            if o.mutated {
                let mut out = Vec::new();
                for (label, ms) in shipped_mutations(&s)? {
                    out.push(verify_global_power(&base, *t, *l, &ms, &label)?);
                }
                out
            } else {
                vec![verify_global_power(&base, *t, *l, &s, "built")?]
            }
        }
        Instance::Relations { g, p, n, m, l } => {
            vec![verify_relations(g, *p, *n, *m, *l, o.seed, o.functions, cap)?]
        }
        Instance::Descent { g, p, n, m } => vec![verify_descent(g, *p, *n, *m, o.seed, o.functions.min(4), cap)?],
        Instance::Adams { g, p, n } => vec![verify_adams(g, *p, *n, o.seed, o.functions, cap)?],
        Instance::Injection { g, p, n, k } => vec![verify_injection(g, *p, *n, *k, cap)?],
        Instance::Embedding { g, p, n, k } => vec![verify_abelian_embedding(g, *p, *n, *k, cap)?],
        Instance::Assembly { g, p, n, m } => vec![verify_assembly(g, *p, *n, *m, cap)?],
    })
}

/// Runs every instance of a suite's grid in parallel; reports come back in
/// grid order.
pub fn run_suite(suite: &str, o: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let instances = grid(suite, o)?;
    let results: Vec<Result<Vec<VerificationReport>>> = instances.par_iter().map(|i| run_instance(i, o)).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// The number of `GL_n(Z/p^N)`-orbits on order-`p^k` subgroups, used as a
/// sanity figure in reports.
pub fn unit_orbit_count(ctx: &Context, k: u32, cap: u64) -> Result<usize> {
    let units = crate::isogeny::all_units(ctx, cap)?;
    let mut seen: BTreeSet<FiniteSubgroup> = BTreeSet::new();
    let mut orbits = 0;
    for h in enumerate_subgroups(ctx, k) {
        if seen.contains(&h) {
            continue;
        }
        orbits += 1;
        for u in &units {
            seen.insert(crate::padic::subgroup_image(u, &h));
        }
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bijections() {
        let r = verify_bijection("e", 2, 2, 2, 1000).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.counts["brute_classes"], 4);
        let r = verify_bijection("C2", 2, 1, 2, 1000).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.counts["brute_classes"], 5);
    }

    #[test]
    fn subgroup_counts_small() {
        assert!(verify_subgroup_counts(2, 1, Some(3)).unwrap().pass);
        assert!(verify_subgroup_counts(2, 2, Some(7)).unwrap().pass);
    }

    #[test]
    fn witness_reported_on_wrong_expectation() {
        let r = verify_subgroup_counts(3, 1, Some(5)).unwrap();
        assert!(!r.pass);
        assert!(r.witness.is_some());
    }

    #[test]
    fn abelian_subgroups_of_s3() {
        let g = make_group_with_cap("S3", 100).unwrap();
        assert_eq!(abelian_subgroups(&g).len(), 5);
    }

    #[test]
    fn report_json_omits_time() {
        let r = verify_subgroup_counts(2, 1, None).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(!s.contains("wall"));
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.counts, r.counts);
    }
}
