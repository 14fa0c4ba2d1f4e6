//! Class functions on commuting tuples with values in [`CoeffValue`], and the
//! operations on them: restriction, transfer, isogeny twists, the power
//! operation `P^φ`, its quotient by transfers, Adams operations and the
//! action of `GL_n(Z_p)`.

mod coeff;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use coeff::{coeff_act, decode, encode, CoeffRepr, CoeffValue, Monomial, TermRepr};

use crate::classify::{classify, tuple_times_matrix, ClassKey, Domain, LevelDatum, SumDatum};
use crate::error::{Error, Result};
use crate::groups::{fixed_cosets, FiniteGroup, GroupHom, Perm};
use crate::isogeny::{all_units, kernel, psi_dual, unit_generators, Isogeny, PsiDualMatrix, Section};
use crate::padic::{Context, FiniteSubgroup};

/// A total function from the classes of a domain to coefficient values.
///
/// `lattice` records the subgroup `H` when the function lives on
/// `hom(Λ_H, G)` (the target of a twist by `φ_H`); `None` means `Λ` itself.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    domain: Domain,
    lattice: Option<FiniteSubgroup>,
    entries: BTreeMap<ClassKey, CoeffValue>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.domain.same_as(&other.domain) && self.lattice == other.lattice && self.entries == other.entries
    }
}

impl ClassFunction {
    /// Evaluates `f` on every class, passing the key and its representative.
    pub fn from_fn(domain: &Domain, mut f: impl FnMut(&ClassKey, &[Perm]) -> Result<CoeffValue>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for key in domain.class_keys()? {
            let rep = domain.representative(&key)?;
            let v = f(&key, &rep)?;
            entries.insert(key, v);
        }
        Ok(ClassFunction { domain: domain.clone(), lattice: None, entries })
    }

    pub fn constant(domain: &Domain, c: &CoeffValue) -> Result<Self> {
        ClassFunction::from_fn(domain, |_, _| Ok(c.clone()))
    }

    /// The indicator of one class, with the given value there.
    pub fn delta(domain: &Domain, key: &ClassKey, value: &CoeffValue) -> Result<Self> {
        let f = ClassFunction::from_fn(domain, |k, _| Ok(if k == key { value.clone() } else { CoeffValue::zero() }))?;
        if !f.entries.contains_key(key) {
            return Err(Error::MissingEntry(format!("{key} is not a class of {}", domain.spec())));
        }
        Ok(f)
    }

    /// Values `Σ c_i t_{v_i} + c_0` with small random integers.
    pub fn random(domain: &Domain, rng: &mut impl Rng) -> Result<Self> {
        let ctx = *domain.ctx();
        let q = ctx.modulus();
        ClassFunction::from_fn(domain, |_, _| {
            let mut v = CoeffValue::integer(rng.gen_range(-2..=2));
            for _ in 0..rng.gen_range(0..=2) {
                let idx: Vec<i64> = (0..ctx.n()).map(|_| rng.gen_range(0..q)).collect();
                let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                v = &v + &CoeffValue::var(&ctx, &idx).scale(&BigRational::from_integer(BigInt::from(c)));
            }
            Ok(v)
        })
    }

    pub fn ctx(&self) -> &Context {
        self.domain.ctx()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn lattice(&self) -> Option<&FiniteSubgroup> {
        self.lattice.as_ref()
    }

    pub fn entries(&self) -> &BTreeMap<ClassKey, CoeffValue> {
        &self.entries
    }

    pub fn value(&self, key: &ClassKey) -> Result<&CoeffValue> {
        self.entries
            .get(key)
            .ok_or_else(|| Error::MissingEntry(format!("no value at class {key} of {}", self.domain.spec())))
    }

    /// The value at the class of a tuple.
    pub fn eval(&self, tuple: &[Perm]) -> Result<&CoeffValue> {
        self.value(&self.domain.key(tuple)?)
    }

    fn zip_with(&self, other: &ClassFunction, op: impl Fn(&CoeffValue, &CoeffValue) -> CoeffValue) -> Result<Self> {
        if !self.domain.same_as(&other.domain) || self.lattice != other.lattice {
            return Err(Error::invalid("class functions on different domains"));
        }
        let mut entries = BTreeMap::new();
        for (k, v) in &self.entries {
            entries.insert(k.clone(), op(v, other.value(k)?));
        }
        Ok(ClassFunction { domain: self.domain.clone(), lattice: self.lattice.clone(), entries })
    }

    pub fn add(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        self.map_values(|v| v.scale(c))
    }

    pub fn map_values(&self, f: impl Fn(&CoeffValue) -> CoeffValue) -> Self {
        ClassFunction {
            domain: self.domain.clone(),
            lattice: self.lattice.clone(),
            entries: self.entries.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }

    /// The first class where two functions differ, with both values.
    pub fn first_difference(&self, other: &ClassFunction) -> Option<(ClassKey, CoeffValue, CoeffValue)> {
        for (k, v) in &self.entries {
            match other.entries.get(k) {
                Some(w) if w == v => {}
                Some(w) => return Some((k.clone(), v.clone(), w.clone())),
                None => return Some((k.clone(), v.clone(), CoeffValue::zero())),
            }
        }
        other
            .entries
            .iter()
            .find(|(k, _)| !self.entries.contains_key(k))
            .map(|(k, w)| (k.clone(), CoeffValue::zero(), w.clone()))
    }

    pub fn to_json(&self) -> Result<String> {
        let ctx = *self.ctx();
        let repr = ClassFunctionRepr {
            p: ctx.p(),
            n: ctx.n(),
            level: ctx.level(),
            group: self.domain.spec(),
            lattice: self.lattice.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryRepr { class: k.clone(), value: v.to_repr(&ctx) })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&repr)?)
    }

    /// Parses a class function, rebuilding its domain from the `group` field
    /// and insisting on exactly one entry per class.
    pub fn from_json(text: &str, cap: usize) -> Result<Self> {
        let repr: ClassFunctionRepr = serde_json::from_str(text)?;
        let ctx = Context::new(repr.p, repr.n, repr.level)?;
        let domain = Domain::parse(&ctx, &repr.group, cap)?;
        if let Some(h) = &repr.lattice {
            if h.ctx() != &ctx {
                return Err(Error::invalid("lattice tag from a different context"));
            }
        }
        let keys = domain.class_keys()?;
        let mut entries = BTreeMap::new();
        for e in &repr.entries {
            let value = CoeffValue::from_repr(&ctx, &e.value)?;
            if entries.insert(e.class.clone(), value).is_some() {
                return Err(Error::invalid(format!("duplicate entry for class {}", e.class)));
            }
        }
        if entries.len() != keys.len() || keys.iter().any(|k| !entries.contains_key(k)) {
            return Err(Error::invalid(format!(
                "entries do not match the {} classes of {}",
                keys.len(),
                domain.spec()
            )));
        }
        Ok(ClassFunction { domain, lattice: repr.lattice.filter(|h| !h.is_trivial()), entries })
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    class: ClassKey,
    value: CoeffRepr,
}

#[derive(Serialize, Deserialize)]
struct ClassFunctionRepr {
    p: u64,
    n: usize,
    level: u32,
    group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lattice: Option<FiniteSubgroup>,
    entries: Vec<EntryRepr>,
}

/// `(Res f)([α]) = f([j ∘ α])` for a map on tuples from `source` into the
/// domain of `f`.
pub fn restrict(f: &ClassFunction, source: &Domain, j: impl Fn(&Perm) -> Result<Perm>) -> Result<ClassFunction> {
    let mut out = ClassFunction::from_fn(source, |_, rep| {
        let moved: Result<Vec<Perm>> = rep.iter().map(&j).collect();
        Ok(f.eval(&moved?)?.clone())
    })?;
    out.lattice = f.lattice.clone();
    Ok(out)
}

/// Restriction along a homomorphism of materialized groups.
pub fn restrict_hom(f: &ClassFunction, source: &Domain, j: &GroupHom) -> Result<ClassFunction> {
    restrict(f, source, |g| j.apply(g))
}

/// `Tr(f)([α]) = Σ_{xK fixed by im α} f([x⁻¹ α x])` for `K ≤ G` embedded by
/// `k`; `f` lives on the classes of `K` and `target` on those of `G`.
pub fn transfer(f: &ClassFunction, k: &GroupHom, g: &FiniteGroup, target: &Domain) -> Result<ClassFunction> {
    let back = k.inverse_map()?;
    let mut out = ClassFunction::from_fn(target, |_, alpha| {
        let mut total = CoeffValue::zero();
        for x in fixed_cosets(g, k, alpha)? {
            let pulled: Vec<Perm> = alpha.iter().map(|a| back[&a.conj(&x)].clone()).collect();
            total = &total + f.eval(&pulled)?;
        }
        Ok(total)
    })?;
    out.lattice = f.lattice.clone();
    Ok(out)
}

fn check_orders(ctx: &Context, tuple: &[Perm]) -> Result<()> {
    let q = ctx.modulus() as u64;
    if let Some(g) = tuple.iter().find(|g| !q.is_multiple_of(g.order())) {
        return Err(Error::precision(format!(
            "element {g} of order {} is not killed by p^N = {q}",
            g.order()
        )));
    }
    Ok(())
}

/// `φ_H* f([ᾱ ψ_H*])` for a tuple `ᾱ` on the canonical basis of `Λ_H`.
pub fn twist_value(f: &ClassFunction, a: &Isogeny, psi: &PsiDualMatrix, alpha: &[Perm]) -> Result<CoeffValue> {
    check_orders(f.ctx(), alpha)?;
    let beta = tuple_times_matrix(alpha, &psi.mat);
    Ok(coeff_act(a, f.eval(&beta)?))
}

/// `f^{φ_H}([α]) = φ_H* f([α ψ_H*])`, a function on `hom(Λ_H, G)`.
pub fn twist(f: &ClassFunction, a: &Isogeny) -> Result<ClassFunction> {
    let psi = psi_dual(a)?;
    let h = kernel(a)?;
    let mut out = ClassFunction::from_fn(&f.domain, |_, alpha| twist_value(f, a, &psi, alpha))?;
    out.lattice = Some(h).filter(|h| !h.is_trivial());
    Ok(out)
}

/// `(f × g)([α], [β]) = f([α]) g([β])` on the product domain.
pub fn external_product(f: &ClassFunction, g: &ClassFunction) -> Result<ClassFunction> {
    let domain = Domain::product(&f.domain, &g.domain)?;
    let mut entries = BTreeMap::new();
    for (a, x) in &f.entries {
        for (b, y) in &g.entries {
            entries.insert(ClassKey::Pair { left: Box::new(a.clone()), right: Box::new(b.clone()) }, x * y);
        }
    }
    Ok(ClassFunction { domain, lattice: None, entries })
}

/// The value of `P^φ_m(f)` at the class with datum `⊕_i (H_i, [ᾱ_i])`:
/// `Π_i φ_{H_i}* f([ᾱ_i ψ_{H_i}*])`.
pub fn power_value(f: &ClassFunction, s: &Section, datum: &SumDatum) -> Result<CoeffValue> {
    let mut out = CoeffValue::one();
    for part in &datum.parts {
        out = &out * &part_value(f, s, part)?;
    }
    Ok(out)
}

fn part_value(f: &ClassFunction, s: &Section, part: &LevelDatum) -> Result<CoeffValue> {
    let a = s.get(&part.subgroup)?;
    let psi = s.psi(&part.subgroup)?;
    let alpha = f.domain.representative(&part.tuple)?;
    twist_value(f, a, psi, &alpha)
}

/// `P^φ_m(f)` at the class of an arbitrary tuple in `G ≀ Σ_m`.
pub fn power_eval(f: &ClassFunction, m: usize, s: &Section, tuple: &[Perm]) -> Result<CoeffValue> {
    power_value(f, s, &classify(&f.domain, m, tuple)?)
}

/// `P^φ_m(f)` as a class function on `G ≀ Σ_m`.
pub fn power_op(f: &ClassFunction, m: usize, s: &Section) -> Result<ClassFunction> {
    check_section(f, s)?;
    let domain = Domain::wreath(&f.domain, m);
    let keys = domain.class_keys()?;
    let mut parts: HashMap<&LevelDatum, CoeffValue> = HashMap::new();
    let mut entries = BTreeMap::new();
    for key in &keys {
        let ClassKey::Sum(datum) = key else {
            return Err(Error::Internal("wreath domain produced a non-sum key".into()));
        };
        let mut v = CoeffValue::one();
        for part in &datum.parts {
            if !parts.contains_key(part) {
                parts.insert(part, part_value(f, s, part)?);
            }
            v = &v * &parts[part];
        }
        entries.insert(key.clone(), v);
    }
    Ok(ClassFunction { domain, lattice: None, entries })
}

fn check_section(f: &ClassFunction, s: &Section) -> Result<()> {
    if s.ctx() != f.ctx() {
        return Err(Error::invalid("section and class function use different contexts"));
    }
    if f.lattice.is_some() {
        return Err(Error::invalid("the power operation takes functions on Λ itself"));
    }
    Ok(())
}

/// `P^φ_m(f)` modulo the transfer ideal: its values on the classes with a
/// single summand, i.e. on `Sub_m(Λ*, G)`. `m` must be a power of `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubPartFunction {
    pub m: usize,
    pub entries: BTreeMap<LevelDatum, CoeffValue>,
}

impl SubPartFunction {
    pub fn add(&self, other: &SubPartFunction) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &SubPartFunction) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    fn zip(&self, other: &SubPartFunction, op: impl Fn(&CoeffValue, &CoeffValue) -> CoeffValue) -> Result<Self> {
        if self.m != other.m || self.entries.len() != other.entries.len() {
            return Err(Error::invalid("quotient functions of different shape"));
        }
        let mut entries = BTreeMap::new();
        for (k, v) in &self.entries {
            let w = other.entries.get(k).ok_or_else(|| Error::MissingEntry(format!("no value at ({})", k.subgroup)))?;
            entries.insert(k.clone(), op(v, w));
        }
        Ok(SubPartFunction { m: self.m, entries })
    }
}

pub fn power_mod_transfer(f: &ClassFunction, m: usize, s: &Section) -> Result<SubPartFunction> {
    check_section(f, s)?;
    let ctx = f.ctx();
    let mut k = 0u32;
    while ctx.p().pow(k) < m as u64 {
        k += 1;
    }
    if ctx.p().pow(k) != m as u64 {
        return Err(Error::invalid(format!("{m} is not a power of {}", ctx.p())));
    }
    if k > ctx.level() {
        return Err(Error::precision(format!("order {m} needs level {k} > N = {}", ctx.level())));
    }
    let mut entries = BTreeMap::new();
    for h in crate::padic::enumerate_subgroups(ctx, k) {
        for key in f.domain.class_keys()? {
            let part = LevelDatum { subgroup: h.clone(), tuple: key };
            let v = part_value(f, s, &part)?;
            entries.insert(part, v);
        }
    }
    Ok(SubPartFunction { m, entries })
}

/// `ψ^{p^k}(f)([α]) = [p^k]* f([α^{p^k}])`.
pub fn adams(f: &ClassFunction, k: u32) -> Result<ClassFunction> {
    let ctx = *f.ctx();
    let pk = ctx.pow(k);
    let scalar = Isogeny::scalar(&ctx, pk);
    let mut out = ClassFunction::from_fn(&f.domain, |_, alpha| {
        let powered: Vec<Perm> = alpha.iter().map(|g| g.pow(pk)).collect();
        Ok(coeff_act(&scalar, f.eval(&powered)?))
    })?;
    out.lattice = f.lattice.clone();
    Ok(out)
}

/// `f^σ([α]) = σ* f([α σ*])` for a unit `σ`.
pub fn aut_act(sigma: &Isogeny, f: &ClassFunction) -> Result<ClassFunction> {
    if !sigma.is_unit() {
        return Err(Error::invalid(format!("{sigma} is not invertible mod p")));
    }
    let mut out = twist(f, sigma)?;
    out.lattice = f.lattice.clone();
    Ok(out)
}

/// The mean of `f^σ` over all of `GL_n(Z/p^N)`.
pub fn aut_average(f: &ClassFunction, cap: u64) -> Result<ClassFunction> {
    let units = all_units(f.ctx(), cap)?;
    let mut sum: BTreeMap<ClassKey, CoeffValue> = f.entries.keys().map(|k| (k.clone(), CoeffValue::zero())).collect();
    for sigma in &units {
        let g = aut_act(sigma, f)?;
        for (k, v) in g.entries {
            let slot = sum.get_mut(&k).expect("same class set");
            *slot = &*slot + &v;
        }
    }
    let inv = BigRational::new(BigInt::from(1), BigInt::from(units.len()));
    Ok(ClassFunction {
        domain: f.domain.clone(),
        lattice: f.lattice.clone(),
        entries: sum.into_iter().map(|(k, v)| (k, v.scale(&inv))).collect(),
    })
}

/// Checks `f^σ = f` for every generator `σ` of `GL_n(Z/p^N)`.
pub fn is_aut_invariant(f: &ClassFunction) -> Result<bool> {
    for sigma in unit_generators(f.ctx()) {
        if aut_act(&sigma, f)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The delta functions used as a test basis: one per class, with value
/// `Σ_j (j + 1) t_{e_j}` so that every matrix acts visibly.
pub fn delta_basis(domain: &Domain) -> Result<Vec<ClassFunction>> {
    let ctx = *domain.ctx();
    let n = ctx.n();
    let mut value = CoeffValue::zero();
    for j in 0..n {
        let mut e = vec![0i64; n];
        e[j] = 1;
        value = &value + &CoeffValue::var(&ctx, &e).scale(&BigRational::from_integer(BigInt::from(j as i64 + 1)));
    }
    domain.class_keys()?.iter().map(|k| ClassFunction::delta(domain, k, &value)).collect()
}

/// Convenience: the plain domain of a materialized group.
pub fn plain_domain(ctx: &Context, group: FiniteGroup) -> Domain {
    Domain::plain(ctx, Arc::new(group))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_group, wreath_product, DEFAULT_CAP};
    use crate::isogeny::build_power_section;

    fn c2_domain(n: usize, level: u32) -> Domain {
        plain_domain(&Context::new(2, n, level).unwrap(), make_group("C2").unwrap())
    }

    #[test]
    fn transfer_from_trivial_subgroup() {
        let dom = c2_domain(1, 1);
        let g = dom.group().unwrap().clone();
        let e = Arc::new(FiniteGroup::from_generators("e", 2, Vec::new(), 1).unwrap());
        let e_dom = Domain::plain(dom.ctx(), e.clone());
        let c = CoeffValue::integer(5);
        let f = ClassFunction::constant(&e_dom, &c).unwrap();
        let tr = transfer(&f, &GroupHom::inclusion(e), &g, &dom).unwrap();
        let id = g.identity();
        let gen = g.generators()[0].clone();
        assert_eq!(tr.eval(&[id]).unwrap(), &CoeffValue::integer(10));
        assert!(tr.eval(&[gen]).unwrap().is_zero());
    }

    #[test]
    fn p1_is_identity_for_built_sections() {
        let dom = c2_domain(2, 1);
        let s = build_power_section(dom.ctx(), 1).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(7);
        let f = ClassFunction::random(&dom, &mut rng).unwrap();
        let p1 = power_op(&f, 1, &s).unwrap();
        for (k, v) in f.entries() {
            assert_eq!(p1.eval(&dom.representative(k).unwrap()).unwrap(), v);
        }
        let one = ClassFunction::constant(&dom, &CoeffValue::one()).unwrap();
        let p2 = power_op(&one, 2, &s).unwrap();
        assert!(p2.entries().values().all(|v| *v == CoeffValue::one()));
    }

    #[test]
    fn power_op_evaluates_on_materialized_wreath() {
        let dom = c2_domain(1, 1);
        let s = build_power_section(dom.ctx(), 1).unwrap();
        let f = delta_basis(&dom).unwrap().pop().unwrap();
        let w = wreath_product(dom.group().unwrap(), 2, DEFAULT_CAP).unwrap();
        let p = power_op(&f, 2, &s).unwrap();
        for g in w.elements() {
            let t = [g.clone()];
            assert_eq!(p.eval(&t).unwrap(), &power_eval(&f, 2, &s, &t).unwrap());
        }
    }

    #[test]
    fn json_round_trip() {
        let dom = c2_domain(2, 2);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let f = ClassFunction::random(&dom, &mut rng).unwrap();
        let back = ClassFunction::from_json(&f.to_json().unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(back, f);
        let s = build_power_section(dom.ctx(), 1).unwrap();
        let p = power_op(&f, 2, &s).unwrap();
        let back = ClassFunction::from_json(&p.to_json().unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(back, p);
    }
}
