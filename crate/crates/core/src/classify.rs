//! Conjugacy classes of commuting tuples in wreath products, described as
//! sums `⊕_i (H_i, [ᾱ_i])` of finite subgroups with classes of tuples.
//!
//! A class function needs a set of classes with canonical keys. [`Domain`]
//! provides three kinds: tuples in a materialized group, tuples in `B ≀ Σ_m`
//! for a domain `B` (keyed by [`SumDatum`]), and products of two domains.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{self, block_entry, block_perm, CommutingTuple, FiniteGroup, Perm, TupleClass, WreathElement};
use crate::isogeny::Isogeny;
use crate::lattice::{self, Mat};
use crate::padic::{annihilator_basis, enumerate_subgroups, subgroup_from_annihilator, subgroup_image, subgroup_preimage, Context, FiniteSubgroup};

/// A canonical key for one conjugacy class of a [`Domain`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassKey {
    Tuple(CommutingTuple),
    Sum(SumDatum),
    Pair { left: Box<ClassKey>, right: Box<ClassKey> },
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::Tuple(t) => {
                let parts: Vec<String> = t.entries.iter().map(|g| g.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            ClassKey::Sum(d) => write!(f, "{d}"),
            ClassKey::Pair { left, right } => write!(f, "({left} | {right})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelDatum {
    pub subgroup: FiniteSubgroup,
    /// The class of `ᾱ` on the canonical basis of `Λ_H`, as a key of the base domain.
    pub tuple: ClassKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SumDatum {
    pub parts: Vec<LevelDatum>,
}

impl SumDatum {
    pub fn new(mut parts: Vec<LevelDatum>) -> Self {
        parts.sort();
        SumDatum { parts }
    }

    pub fn total_order(&self) -> u64 {
        self.parts.iter().map(|l| l.subgroup.order()).sum()
    }
}

impl fmt::Display for SumDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.parts.iter().map(|l| format!("({}, {})", l.subgroup, l.tuple)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug)]
pub struct PlainDomain {
    ctx: Context,
    group: Arc<FiniteGroup>,
    classes: Vec<TupleClass>,
    lookup: HashMap<Vec<u32>, u32>,
}

#[derive(Debug)]
pub struct WreathDomain {
    ctx: Context,
    base: Domain,
    m: usize,
}

#[derive(Debug)]
pub struct ProductDomain {
    left: Domain,
    right: Domain,
}

#[derive(Clone, Debug)]
pub enum Domain {
    Plain(Arc<PlainDomain>),
    Wreath(Arc<WreathDomain>),
    Product(Arc<ProductDomain>),
}

impl Domain {
    /// Classes of `n`-tuples of commuting `p`-elements of a materialized group.
    pub fn plain(ctx: &Context, group: Arc<FiniteGroup>) -> Domain {
        let tuples = groups::commuting_tuples(&group, ctx.p(), ctx.n());
        let (classes, assignment) = groups::classify_tuples(&group, &tuples);
        let lookup = tuples
            .iter()
            .zip(assignment)
            .map(|(t, c)| {
                let idx = t.entries.iter().map(|g| group.index_of(g).expect("tuple in group") as u32).collect();
                (idx, c as u32)
            })
            .collect();
        Domain::Plain(Arc::new(PlainDomain { ctx: *ctx, group, classes, lookup }))
    }

    /// Classes of `base ≀ Σ_m`, keyed by sums of subgroup data.
    pub fn wreath(base: &Domain, m: usize) -> Domain {
        Domain::Wreath(Arc::new(WreathDomain { ctx: *base.ctx(), base: base.clone(), m }))
    }

    pub fn product(left: &Domain, right: &Domain) -> Result<Domain> {
        if left.ctx() != right.ctx() {
            return Err(Error::invalid("product of domains from different contexts"));
        }
        Ok(Domain::Product(Arc::new(ProductDomain { left: left.clone(), right: right.clone() })))
    }

    /// Parses the inverse of [`Domain::spec`]: `wr(D,m)`, `prod(D,E)`, or a
    /// group spec for a materialized group.
    pub fn parse(ctx: &Context, spec: &str, cap: usize) -> Result<Domain> {
        let spec = spec.trim();
        if let Some(inner) = spec.strip_prefix("wr(").and_then(|s| s.strip_suffix(')')) {
            let (base, m) = split_top_comma(inner)?;
            let m: usize = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad wreath degree in {spec:?}")))?;
            if m > 64 {
                return Err(Error::SizeCap { what: "wreath degree".into(), needed: m as u128, cap: 64 });
            }
            return Ok(Domain::wreath(&Domain::parse(ctx, base, cap)?, m));
        }
        if let Some(inner) = spec.strip_prefix("prod(").and_then(|s| s.strip_suffix(')')) {
            let (l, r) = split_top_comma(inner)?;
            return Domain::product(&Domain::parse(ctx, l, cap)?, &Domain::parse(ctx, r, cap)?);
        }
        Ok(Domain::plain(ctx, Arc::new(groups::make_group_with_cap(spec, cap)?)))
    }

    pub fn ctx(&self) -> &Context {
        match self {
            Domain::Plain(d) => &d.ctx,
            Domain::Wreath(d) => &d.ctx,
            Domain::Product(d) => d.left.ctx(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Domain::Plain(d) => d.group.degree(),
            Domain::Wreath(d) => d.m * d.base.degree(),
            Domain::Product(d) => d.left.degree() + d.right.degree(),
        }
    }

    /// A textual description: a group spec, `wr(<base>,<m>)` or `prod(<a>,<b>)`.
    pub fn spec(&self) -> String {
        match self {
            Domain::Plain(d) => d.group.name().to_string(),
            Domain::Wreath(d) => format!("wr({},{})", d.base.spec(), d.m),
            Domain::Product(d) => format!("prod({},{})", d.left.spec(), d.right.spec()),
        }
    }

    pub fn group(&self) -> Option<&Arc<FiniteGroup>> {
        match self {
            Domain::Plain(d) => Some(&d.group),
            _ => None,
        }
    }

    /// `(base, m)` for a wreath domain.
    pub fn as_wreath(&self) -> Option<(&Domain, usize)> {
        match self {
            Domain::Wreath(d) => Some((&d.base, d.m)),
            _ => None,
        }
    }

    pub fn as_product(&self) -> Option<(&Domain, &Domain)> {
        match self {
            Domain::Product(d) => Some((&d.left, &d.right)),
            _ => None,
        }
    }

    /// Same classes, same keys: both domains describe the same group.
    pub fn same_as(&self, other: &Domain) -> bool {
        self.ctx() == other.ctx() && self.spec() == other.spec() && self.degree() == other.degree()
    }

    pub fn key(&self, tuple: &[Perm]) -> Result<ClassKey> {
        let ctx = self.ctx();
        if tuple.len() != ctx.n() {
            return Err(Error::invalid(format!("expected a {}-tuple, got {}", ctx.n(), tuple.len())));
        }
        match self {
            Domain::Plain(d) => {
                let idx: Option<Vec<u32>> = tuple.iter().map(|g| d.group.index_of(g).map(|i| i as u32)).collect();
                let idx = idx.ok_or_else(|| Error::invalid(format!("tuple is not in {}", d.group.name())))?;
                let c = d.lookup.get(&idx).ok_or_else(|| {
                    Error::invalid(format!("tuple in {} is not commuting of p-power order", d.group.name()))
                })?;
                Ok(ClassKey::Tuple(d.classes[*c as usize].representative.clone()))
            }
            Domain::Wreath(d) => Ok(ClassKey::Sum(classify(&d.base, d.m, tuple)?)),
            Domain::Product(d) => {
                let dl = d.left.degree();
                let dr = d.right.degree();
                let l: Result<Vec<Perm>> = tuple.iter().map(|g| g.restrict(0, dl)).collect();
                let r: Result<Vec<Perm>> = tuple.iter().map(|g| g.restrict(dl, dr)).collect();
                Ok(ClassKey::Pair { left: Box::new(d.left.key(&l?)?), right: Box::new(d.right.key(&r?)?) })
            }
        }
    }

    pub fn representative(&self, key: &ClassKey) -> Result<Vec<Perm>> {
        match (self, key) {
            (Domain::Plain(_), ClassKey::Tuple(t)) => {
                if self.key(&t.entries)? != *key {
                    return Err(Error::invalid(format!("{key} is not a class representative in {}", self.spec())));
                }
                Ok(t.entries.clone())
            }
            (Domain::Wreath(d), ClassKey::Sum(s)) => standard_representative(&d.base, d.m, s),
            (Domain::Product(d), ClassKey::Pair { left, right }) => {
                let l = d.left.representative(left)?;
                let r = d.right.representative(right)?;
                Ok(l.iter().zip(&r).map(|(a, b)| a.join(b)).collect())
            }
            _ => Err(Error::invalid(format!("key {key} does not belong to domain {}", self.spec()))),
        }
    }

    /// All class keys, sorted.
    pub fn class_keys(&self) -> Result<Vec<ClassKey>> {
        let mut keys = match self {
            Domain::Plain(d) => d.classes.iter().map(|c| ClassKey::Tuple(c.representative.clone())).collect(),
            Domain::Wreath(d) => enumerate_sum_data(&d.base, d.m)?.into_iter().map(ClassKey::Sum).collect(),
            Domain::Product(d) => {
                let l = d.left.class_keys()?;
                let r = d.right.class_keys()?;
                let mut out = Vec::with_capacity(l.len() * r.len());
                for a in &l {
                    for b in &r {
                        out.push(ClassKey::Pair { left: Box::new(a.clone()), right: Box::new(b.clone()) });
                    }
                }
                out
            }
        };
        keys.sort();
        Ok(keys)
    }
}

fn split_top_comma(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Ok((&s[..i], &s[i + 1..])),
            _ => {}
        }
        if depth < 0 {
            break;
        }
    }
    Err(Error::Parse(format!("expected two comma-separated arguments in {s:?}")))
}

/// `Π_j tuple_j^{m[j][k]}` for each column `k`: precomposition of the map
/// `Z^n → G` with the matrix `m`.
pub fn tuple_times_matrix(tuple: &[Perm], m: &[Vec<i64>]) -> Vec<Perm> {
    let n = tuple.len();
    let d = tuple.first().map_or(0, |g| g.degree());
    (0..n)
        .map(|k| {
            (0..n).fold(Perm::identity(d), |acc, j| acc.compose(&tuple[j].pow(m[j][k])))
        })
        .collect()
}

fn to_i64(m: &Mat) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

fn check_commuting(tuple: &[Perm], p: u64) -> Result<()> {
    let t = CommutingTuple { entries: tuple.to_vec() };
    if !t.is_valid(p) {
        return Err(Error::invalid("tuple entries must commute and have p-power order"));
    }
    Ok(())
}

/// Classifies a tuple whose block permutations act transitively on `m` blocks.
pub fn classify_transitive(base: &Domain, m: usize, tuple: &[Perm]) -> Result<LevelDatum> {
    let datum = classify(base, m, tuple)?;
    match <[LevelDatum; 1]>::try_from(datum.parts) {
        Ok([part]) => Ok(part),
        Err(_) => Err(Error::NotTransitive(m)),
    }
}

/// The sum datum of a commuting tuple in `base ≀ Σ_m`.
pub fn classify(base: &Domain, m: usize, tuple: &[Perm]) -> Result<SumDatum> {
    let ctx = base.ctx();
    let n = ctx.n();
    let d = base.degree();
    if tuple.len() != n {
        return Err(Error::invalid(format!("expected a {n}-tuple, got {}", tuple.len())));
    }
    for g in tuple {
        WreathElement::from_perm(g, d, m)?;
    }
    check_commuting(tuple, ctx.p())?;
    let sigmas: Vec<Perm> = tuple.iter().map(|g| block_perm(g, d, m)).collect();
    let mut coord: Vec<Option<Vec<i128>>> = vec![None; m];
    let mut parts = Vec::new();
    for start in 0..m {
        if coord[start].is_some() {
            continue;
        }
        coord[start] = Some(vec![0; n]);
        let mut orbit = vec![start];
        let mut relations: Vec<Vec<i128>> = Vec::new();
        let mut head = 0;
        while head < orbit.len() {
            let j = orbit[head];
            head += 1;
            let cj = coord[j].clone().expect("visited");
            for (i, s) in sigmas.iter().enumerate() {
                let target = s.apply(j);
                let mut step = cj.clone();
                step[i] += 1;
                match &coord[target] {
                    Some(ct) => relations.push(step.iter().zip(ct).map(|(a, b)| a - b).collect()),
                    None => {
                        coord[target] = Some(step);
                        orbit.push(target);
                    }
                }
            }
        }
        let h = subgroup_from_annihilator(ctx, &relations);
        if h.order() != orbit.len() as u64 {
            return Err(Error::precision(format!(
                "an orbit of {} blocks needs more than level N = {}",
                orbit.len(),
                ctx.level()
            )));
        }
        let ann = annihilator_basis(&h).columns();
        let mut alpha = Vec::with_capacity(n);
        for b in &ann {
            let t = tuple.iter().zip(b).fold(Perm::identity(m * d), |acc, (g, &e)| {
                acc.compose(&g.pow(e as i64))
            });
            if t.apply(start * d) / d != start {
                return Err(Error::Internal("annihilator element moves its base block".into()));
            }
            alpha.push(block_entry(&t, d, start));
        }
        parts.push(LevelDatum { subgroup: h, tuple: base.key(&alpha)? });
    }
    Ok(SumDatum::new(parts))
}

/// A tuple in `base ≀ Σ_m` with the given datum: each part occupies a run of
/// consecutive blocks labelled by the box representatives of `Z^n / Λ_H`.
pub fn standard_representative(base: &Domain, m: usize, datum: &SumDatum) -> Result<Vec<Perm>> {
    let ctx = base.ctx();
    let n = ctx.n();
    let d = base.degree();
    if datum.total_order() != m as u64 {
        return Err(Error::invalid(format!("datum {datum} has total order {}, not {m}", datum.total_order())));
    }
    let mut bases: Vec<Vec<Perm>> = vec![vec![Perm::identity(d); m]; n];
    let mut sigmas: Vec<Vec<u32>> = vec![vec![0; m]; n];
    let mut offset = 0usize;
    for part in &datum.parts {
        if part.subgroup.ctx() != ctx {
            return Err(Error::invalid("datum subgroup from a different context"));
        }
        let alpha = base.representative(&part.tuple)?;
        let b = annihilator_basis(&part.subgroup).as_i128();
        let reps = box_representatives(&b);
        let index: HashMap<&Vec<i128>, usize> = reps.iter().enumerate().map(|(i, r)| (r, i)).collect();
        for j in 0..n {
            for (i, r) in reps.iter().enumerate() {
                let mut moved = r.clone();
                moved[j] += 1;
                let target = lattice::reduce(&b, &moved);
                let lambda: Vec<i128> = moved.iter().zip(&target).map(|(x, y)| x - y).collect();
                let coeffs = lattice::solve_lower(&b, &lambda).expect("difference lies in the lattice");
                let g = alpha
                    .iter()
                    .zip(&coeffs)
                    .fold(Perm::identity(d), |acc, (a, &c)| acc.compose(&a.pow(c as i64)));
                sigmas[j][offset + i] = (offset + index[&target]) as u32;
                bases[j][offset + i] = g;
            }
        }
        offset += reps.len();
    }
    (0..n)
        .map(|j| {
            WreathElement { base: bases[j].clone(), perm: Perm::from_images(sigmas[j].clone())? }.to_perm()
        })
        .collect()
}

/// Representatives `0 <= r_i < b[i][i]` of `Z^n / bZ^n`, sorted.
fn box_representatives(b: &Mat) -> Vec<Vec<i128>> {
    let n = b.len();
    let mut out = Vec::new();
    let mut r = vec![0i128; n];
    loop {
        out.push(r.clone());
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            r[i] += 1;
            if r[i] < b[i][i] {
                break;
            }
            r[i] = 0;
        }
    }
}

/// All sum data of total order `m`, sorted and without repetition.
pub fn enumerate_sum_data(base: &Domain, m: usize) -> Result<Vec<SumDatum>> {
    let ctx = base.ctx();
    let p = ctx.p();
    let keys = base.class_keys()?;
    let mut level_data: Vec<(u64, LevelDatum)> = Vec::new();
    let mut k = 0u32;
    while p.pow(k) <= m as u64 {
        if k > ctx.level() {
            return Err(Error::precision(format!(
                "subgroups of order {}^{k} need level {k} > N = {}",
                p,
                ctx.level()
            )));
        }
        for h in enumerate_subgroups(ctx, k) {
            for key in &keys {
                level_data.push((h.order(), LevelDatum { subgroup: h.clone(), tuple: key.clone() }));
            }
        }
        k += 1;
    }
    level_data.sort_by(|a, b| a.1.cmp(&b.1));
    let mut out = Vec::new();
    let mut cur = Vec::new();
    multisets(&level_data, 0, m as u64, &mut cur, &mut out);
    out.sort();
    Ok(out)
}

fn multisets(items: &[(u64, LevelDatum)], from: usize, remaining: u64, cur: &mut Vec<LevelDatum>, out: &mut Vec<SumDatum>) {
    if remaining == 0 {
        out.push(SumDatum { parts: cur.clone() });
        return;
    }
    for i in from..items.len() {
        let (size, ref datum) = items[i];
        if size <= remaining {
            cur.push(datum.clone());
            multisets(items, i, remaining - size, cur, out);
            cur.pop();
        }
    }
}

/// `(H, [α q_H*])`: the tuple evaluated on the canonical basis of `Λ_H`.
pub fn diagonal_datum(base: &Domain, h: &FiniteSubgroup, tuple: &[Perm]) -> Result<LevelDatum> {
    let b = to_i64(&annihilator_basis(h).as_i128());
    let alpha = tuple_times_matrix(tuple, &b);
    Ok(LevelDatum { subgroup: h.clone(), tuple: base.key(&alpha)? })
}

/// Flattens a datum for `(G ≀ Σ_a) ≀ Σ_b` into one for `G ≀ Σ_{ab}` along
/// the block inclusion `∇`. `outer_base` must be the wreath domain `G ≀ Σ_a`.
pub fn compose_wreath_data(outer_base: &Domain, outer: &SumDatum) -> Result<SumDatum> {
    let (inner_base, _) = outer_base
        .as_wreath()
        .ok_or_else(|| Error::invalid("outer datum must live over a wreath domain"))?;
    let ctx = outer_base.ctx();
    let mut parts = Vec::new();
    for part in &outer.parts {
        let inner = match &part.tuple {
            ClassKey::Sum(s) => s,
            other => return Err(Error::invalid(format!("expected an inner sum datum, got {other}"))),
        };
        let b = annihilator_basis(&part.subgroup).as_i128();
        let bt = Isogeny::from_rows(ctx, &to_i64(&lattice::transpose(&b)))?;
        for ip in &inner.parts {
            let t = subgroup_preimage(&bt, &ip.subgroup)?;
            let c = annihilator_basis(&ip.subgroup).as_i128();
            let bc = lattice::mul(&b, &c);
            let dt = annihilator_basis(&t).as_i128();
            let change = lattice::solve_lower_mat(&bc, &dt)
                .ok_or_else(|| Error::Internal("pulled-back lattice is not spanned by B C".into()))?;
            let alpha = inner_base.representative(&ip.tuple)?;
            let beta = tuple_times_matrix(&alpha, &to_i64(&change));
            parts.push(LevelDatum { subgroup: t, tuple: inner_base.key(&beta)? });
        }
    }
    Ok(SumDatum::new(parts))
}

/// The action of a unit `σ` on sum data: `(H, [ᾱ]) ↦ (σH, [ᾱ ∘ σ*])`.
pub fn aut_on_sum_datum(base: &Domain, sigma: &Isogeny, datum: &SumDatum) -> Result<SumDatum> {
    if !sigma.is_unit() {
        return Err(Error::invalid(format!("{sigma} is not invertible mod p")));
    }
    let st = sigma
        .transpose()
        .rows_i64()
        .ok_or_else(|| Error::precision("unit matrix entries exceed i64"))?;
    let st: Mat = st.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut parts = Vec::with_capacity(datum.parts.len());
    for part in &datum.parts {
        let h2 = subgroup_image(sigma, &part.subgroup);
        let b = annihilator_basis(&part.subgroup).as_i128();
        let b2 = annihilator_basis(&h2).as_i128();
        let c = lattice::solve_lower_mat(&b, &lattice::mul(&st, &b2))
            .ok_or_else(|| Error::Internal("σ* does not map Λ_σH into Λ_H".into()))?;
        let alpha = base.representative(&part.tuple)?;
        let moved = tuple_times_matrix(&alpha, &to_i64(&c));
        parts.push(LevelDatum { subgroup: h2, tuple: base.key(&moved)? });
    }
    Ok(SumDatum::new(parts))
}

/// `α ∘ σᵀ` on tuples: the Aut-action on `hom(Λ, G)`.
pub fn aut_on_tuple(sigma: &Isogeny, tuple: &[Perm]) -> Result<Vec<Perm>> {
    let st = sigma
        .transpose()
        .rows_i64()
        .ok_or_else(|| Error::precision("unit matrix entries exceed i64"))?;
    Ok(tuple_times_matrix(tuple, &st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{diagonal, make_group};
    use crate::padic::{canonicalize, TorsionVector};

    fn plain(p: u64, n: usize, level: u32, g: &str) -> Domain {
        Domain::plain(&Context::new(p, n, level).unwrap(), Arc::new(make_group(g).unwrap()))
    }

    fn sub(ctx: &Context, nums: &[i64], den: i64) -> FiniteSubgroup {
        canonicalize(ctx, &[TorsionVector::from_fractions(ctx, nums, den).unwrap()]).unwrap()
    }

    fn swap_with(g: &Perm) -> Perm {
        let id = Perm::identity(g.degree());
        WreathElement { base: vec![id, g.clone()], perm: Perm::from_cycles(2, &[vec![0, 1]]).unwrap() }
            .to_perm()
            .unwrap()
    }

    #[test]
    fn transitive_rank_one() {
        let base = plain(2, 1, 2, "C2");
        let g = base.group().unwrap().generators()[0].clone();
        let t = swap_with(&g);
        let l = classify_transitive(&base, 2, std::slice::from_ref(&t)).unwrap();
        let ctx = base.ctx();
        assert_eq!(l.subgroup, FiniteSubgroup::torsion(ctx, 1).unwrap());
        assert_eq!(l.tuple, ClassKey::Tuple(CommutingTuple { entries: vec![g.clone()] }));
        let back = standard_representative(&base, 2, &SumDatum::new(vec![l])).unwrap();
        assert_eq!(back, vec![t]);
    }

    #[test]
    fn transitive_rank_two() {
        let base = plain(2, 2, 2, "C2");
        let g = base.group().unwrap().generators()[0].clone();
        let t = vec![diagonal(&g, 2), swap_with(&g)];
        let l = classify_transitive(&base, 2, &t).unwrap();
        let ctx = base.ctx();
        assert_eq!(l.subgroup, sub(ctx, &[0, 1], 2));
        assert_eq!(annihilator_basis(&l.subgroup).mat, vec![vec![1, 0], vec![0, 2]]);
        assert_eq!(l.tuple, ClassKey::Tuple(CommutingTuple { entries: vec![g.clone(), g] }));
    }

    #[test]
    fn non_transitive_is_rejected() {
        let base = plain(2, 1, 1, "C2");
        let g = base.group().unwrap().generators()[0].clone();
        assert!(matches!(classify_transitive(&base, 2, &[diagonal(&g, 2)]), Err(Error::NotTransitive(2))));
    }

    #[test]
    fn singleton_orbits() {
        let base = plain(2, 1, 1, "C2");
        let g = base.group().unwrap().generators()[0].clone();
        let d = classify(&base, 2, &[diagonal(&g, 2)]).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert!(d.parts.iter().all(|l| l.subgroup.is_trivial()));
        let one = classify(&base, 1, std::slice::from_ref(&g)).unwrap();
        assert_eq!(one.parts, vec![LevelDatum { subgroup: FiniteSubgroup::trivial(base.ctx()), tuple: base.key(&[g]).unwrap() }]);
    }

    #[test]
    fn sum_data_counts() {
        assert_eq!(enumerate_sum_data(&plain(2, 2, 1, "e"), 2).unwrap().len(), 4);
        assert_eq!(enumerate_sum_data(&plain(3, 1, 1, "e"), 3).unwrap().len(), 2);
        let c3 = plain(3, 2, 1, "S3");
        assert_eq!(enumerate_sum_data(&c3, 1).unwrap().len(), c3.class_keys().unwrap().len());
    }

    #[test]
    fn diagonal_data() {
        let base = plain(2, 1, 2, "C4");
        let g = base.group().unwrap().generators()[0].clone();
        let h = FiniteSubgroup::torsion(base.ctx(), 1).unwrap();
        let l = diagonal_datum(&base, &h, std::slice::from_ref(&g)).unwrap();
        assert_eq!(l.tuple, base.key(&[g.pow(2)]).unwrap());
        let triv = diagonal_datum(&base, &FiniteSubgroup::trivial(base.ctx()), std::slice::from_ref(&g)).unwrap();
        assert_eq!(triv.tuple, base.key(&[g]).unwrap());
    }

    #[test]
    fn pullback_of_order_two_in_rank_one() {
        let e = plain(2, 1, 2, "e");
        let inner = Domain::wreath(&e, 2);
        let ctx = *e.ctx();
        let z2 = FiniteSubgroup::torsion(&ctx, 1).unwrap();
        let unit = e.class_keys().unwrap()[0].clone();
        let inner_datum = SumDatum::new(vec![LevelDatum { subgroup: z2.clone(), tuple: unit }]);
        let outer = SumDatum::new(vec![LevelDatum { subgroup: z2, tuple: ClassKey::Sum(inner_datum) }]);
        let flat = compose_wreath_data(&inner, &outer).unwrap();
        assert_eq!(flat.parts.len(), 1);
        assert_eq!(flat.parts[0].subgroup, FiniteSubgroup::torsion(&ctx, 2).unwrap());
    }

    #[test]
    fn foreign_tuple_keys_are_rejected() {
        let text = r#"{"parts":[{"subgroup":{"p":2,"n":2,"level":1,"order_exp":1,"basis":[[2,0],[0,1]]},"tuple":[[1,0],[0,1]]}]}"#;
        let d: SumDatum = serde_json::from_str(text).unwrap();
        let e = plain(2, 2, 1, "e");
        assert!(matches!(standard_representative(&e, 2, &d), Err(Error::Invalid(_))));
    }

    #[test]
    fn unit_orbit_of_order_two_subgroups() {
        let e = plain(2, 2, 1, "e");
        let ctx = *e.ctx();
        let unit = e.class_keys().unwrap()[0].clone();
        let start = SumDatum::new(vec![LevelDatum { subgroup: sub(&ctx, &[1, 0], 2), tuple: unit }]);
        let mut orbit: Vec<SumDatum> = crate::isogeny::all_units(&ctx, 100)
            .unwrap()
            .iter()
            .map(|s| aut_on_sum_datum(&e, s, &start).unwrap())
            .collect();
        orbit.sort();
        orbit.dedup();
        assert_eq!(orbit.len(), 3);
    }
}
