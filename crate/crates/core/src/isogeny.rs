//! Isogenies of `(Q_p/Z_p)^n` as exact integer matrices, and sections
//! `H ↦ φ_H` assigning to each finite subgroup an isogeny with kernel `H`.
//!
//! Matrices act on torsion columns as `A v`; the dual action on `Z^n` is `Aᵀ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{
    annihilator_basis, enumerate_subgroups, subgroup_image, subgroup_preimage, Context,
    FiniteSubgroup, TorsionVector,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isogeny {
    ctx: Context,
    mat: Vec<Vec<BigInt>>,
    det_val: u32,
}

fn det_big(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

impl Isogeny {
    pub fn new(ctx: &Context, mat: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = ctx.n();
        if mat.len() != n || mat.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("isogeny matrix must be {n}x{n}")));
        }
        let d = det_big(&mat);
        if d.is_zero() {
            return Err(Error::invalid("isogeny matrix is singular"));
        }
        let p = BigInt::from(ctx.p());
        let mut det_val = 0;
        let mut r = d.abs();
        while r.is_multiple_of(&p) {
            r /= &p;
            det_val += 1;
        }
        Ok(Isogeny { ctx: *ctx, mat, det_val })
    }

    pub fn from_rows(ctx: &Context, rows: &[Vec<i64>]) -> Result<Self> {
        Isogeny::new(ctx, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(ctx: &Context) -> Self {
        Isogeny::scalar(ctx, 1)
    }

    pub fn scalar(ctx: &Context, c: i64) -> Self {
        let n = ctx.n();
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { c } else { 0 }).collect()).collect();
        Isogeny::from_rows(ctx, &rows).expect("nonzero scalar matrix")
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn mat(&self) -> &[Vec<BigInt>] {
        &self.mat
    }

    pub fn det_val(&self) -> u32 {
        self.det_val
    }

    pub fn is_unit(&self) -> bool {
        self.det_val == 0
    }

    pub fn mat_mod(&self, q: i64) -> Vec<Vec<i64>> {
        let q = BigInt::from(q);
        self.mat
            .iter()
            .map(|r| r.iter().map(|x| x.mod_floor(&q).to_i64().expect("residue fits")).collect())
            .collect()
    }

    /// Entries as machine integers, if they fit.
    pub fn rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.mat.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn transpose(&self) -> Isogeny {
        let n = self.ctx.n();
        let mat = (0..n).map(|i| (0..n).map(|j| self.mat[j][i].clone()).collect()).collect();
        Isogeny { ctx: self.ctx, mat, det_val: self.det_val }
    }

    pub fn apply(&self, v: &TorsionVector) -> TorsionVector {
        let q = self.ctx.modulus();
        let m = self.mat_mod(q);
        let coords: Vec<i64> = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v.coords)
                    .map(|(a, b)| (*a as i128 * *b as i128).rem_euclid(q as i128))
                    .sum::<i128>()
                    .rem_euclid(q as i128) as i64
            })
            .collect();
        TorsionVector { coords }
    }
}

impl fmt::Display for Isogeny {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .mat
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// The finite subgroup `ker A`.
pub fn kernel(a: &Isogeny) -> Result<FiniteSubgroup> {
    subgroup_preimage(a, &FiniteSubgroup::trivial(a.ctx()))
}

/// The exact product `A B`.
pub fn compose(a: &Isogeny, b: &Isogeny) -> Result<Isogeny> {
    if a.ctx != b.ctx {
        return Err(Error::invalid("isogenies from different contexts"));
    }
    let n = a.ctx.n();
    let mat: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &a.mat[i][k] * &b.mat[k][j]))
                .collect()
        })
        .collect();
    Ok(Isogeny { ctx: a.ctx, mat, det_val: a.det_val + b.det_val })
}

/// The matrix of `ψ_H*: Λ → Λ_H` in the canonical basis of `Λ_H`, where
/// `H = ker A`; entries reduced mod `p^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PsiDualMatrix {
    pub mat: Vec<Vec<i64>>,
}

pub fn psi_dual(a: &Isogeny) -> Result<PsiDualMatrix> {
    let ctx = a.ctx();
    let n = ctx.n();
    let h = kernel(a)?;
    let b = annihilator_basis(&h).mat;
    let q = BigInt::from(ctx.modulus());
    let at = a.transpose();
    let mut out = vec![vec![0i64; n]; n];
    for j in 0..n {
        let mut x: Vec<BigInt> = Vec::with_capacity(n);
        for i in 0..n {
            let mut r = at.mat[i][j].clone();
            for (k, xk) in x.iter().enumerate() {
                r -= BigInt::from(b[i][k]) * xk;
            }
            let (quot, rem) = r.div_rem(&BigInt::from(b[i][i]));
            if !rem.is_zero() {
                return Err(Error::Internal(format!(
                    "dual of {a} does not factor through the annihilator of its kernel"
                )));
            }
            x.push(quot);
        }
        for i in 0..n {
            out[i][j] = x[i].mod_floor(&q).to_i64().expect("residue fits");
        }
    }
    let check = Isogeny::from_rows(ctx, &out)?;
    if !check.is_unit() {
        return Err(Error::Internal(format!("psi matrix of {a} is not invertible mod p")));
    }
    Ok(PsiDualMatrix { mat: out })
}

/// All subgroups of `Λ*[p^level]`, sorted.
pub fn subgroups_up_to_level(ctx: &Context, level: u32) -> Result<Vec<FiniteSubgroup>> {
    let top = FiniteSubgroup::torsion(ctx, level)?;
    let mut out = Vec::new();
    for k in 0..=top.order_exp() {
        out.extend(enumerate_subgroups(ctx, k).into_iter().filter(|h| h.is_subgroup_of(&top)));
    }
    Ok(out)
}

/// A choice of isogeny with kernel `H` for every `H ⊆ Λ*[p^level]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    ctx: Context,
    level: u32,
    table: BTreeMap<FiniteSubgroup, Isogeny>,
    psi: BTreeMap<FiniteSubgroup, PsiDualMatrix>,
}

#[derive(Serialize, Deserialize)]
struct SectionEntry {
    subgroup: FiniteSubgroup,
    matrix: Vec<Vec<i64>>,
}

impl Section {
    /// Builds a section, checking that every kernel is right and that all
    /// subgroups of `Λ*[p^level]` are covered.
    pub fn from_entries(ctx: &Context, level: u32, entries: Vec<(FiniteSubgroup, Isogeny)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        let mut psi = BTreeMap::new();
        for (h, a) in entries {
            if h.ctx() != ctx || a.ctx() != ctx {
                return Err(Error::invalid("section entry from a different context"));
            }
            let k = kernel(&a)?;
            if k != h {
                return Err(Error::invalid(format!("matrix {a} has kernel {k}, not {h}")));
            }
            psi.insert(h.clone(), psi_dual(&a)?);
            if table.insert(h.clone(), a).is_some() {
                return Err(Error::invalid(format!("duplicate section entry for {h}")));
            }
        }
        for h in subgroups_up_to_level(ctx, level)? {
            if !table.contains_key(&h) {
                return Err(Error::MissingEntry(format!("section has no value at {h}")));
            }
        }
        Ok(Section { ctx: *ctx, level, table, psi })
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn get(&self, h: &FiniteSubgroup) -> Result<&Isogeny> {
        self.table.get(h).ok_or_else(|| Error::MissingEntry(format!("section has no value at {h}")))
    }

    pub fn psi(&self, h: &FiniteSubgroup) -> Result<&PsiDualMatrix> {
        self.psi.get(h).ok_or_else(|| Error::MissingEntry(format!("section has no value at {h}")))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FiniteSubgroup, &Isogeny)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        let entries: Result<Vec<SectionEntry>> = self
            .table
            .iter()
            .map(|(h, a)| {
                let matrix = a
                    .rows_i64()
                    .ok_or_else(|| Error::precision(format!("matrix {a} does not fit in i64")))?;
                Ok(SectionEntry { subgroup: h.clone(), matrix })
            })
            .collect();
        Ok(serde_json::to_string_pretty(&entries?)?)
    }

    /// Loads a section file; the level is the largest exponent present and
    /// every kernel is re-verified.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<SectionEntry> = serde_json::from_str(text)?;
        let first = raw.first().ok_or_else(|| Error::invalid("empty section file"))?;
        let ctx = *first.subgroup.ctx();
        let mut level = 0;
        let mut entries = Vec::with_capacity(raw.len());
        for e in raw {
            if e.subgroup.ctx() != &ctx {
                return Err(Error::invalid("section entries from different contexts"));
            }
            while level < ctx.level() && !e.subgroup.is_subgroup_of(&FiniteSubgroup::torsion(&ctx, level)?) {
                level += 1;
            }
            let a = Isogeny::from_rows(&ctx, &e.matrix)?;
            entries.push((e.subgroup, a));
        }
        Section::from_entries(&ctx, level, entries)
    }
}

/// The order-`p` values for rank 2: `⟨(1/p, i/p)⟩ ↦ [[-i, 1], [p - i², i]]`
/// and `⟨(0, 1/p)⟩ ↦ [[0, p], [1, 0]]`.
pub fn order_p_matrix(h: &FiniteSubgroup) -> Result<Isogeny> {
    let ctx = h.ctx();
    if ctx.n() != 2 {
        return Err(Error::UnsupportedRank(ctx.n()));
    }
    if h.order_exp() != 1 {
        return Err(Error::invalid(format!("{h} does not have order p")));
    }
    let p = ctx.p() as i64;
    let q = ctx.modulus();
    for i in 0..p {
        let g = TorsionVector::reduced(ctx, &[q / p, i * (q / p)]);
        if h.contains(&g) {
            return Isogeny::from_rows(ctx, &[vec![-i, 1], vec![p - i * i, i]]);
        }
    }
    Isogeny::from_rows(ctx, &[vec![0, p], vec![1, 0]])
}

/// The power section: scalars `p^k` in rank 1, and in rank 2 the order-`p`
/// matrices composed along the composition series that always splits off
/// the least order-`p` subgroup.
pub fn build_power_section(ctx: &Context, level: u32) -> Result<Section> {
    if level > ctx.level() {
        return Err(Error::precision(format!("section level {level} exceeds N = {}", ctx.level())));
    }
    let subs = subgroups_up_to_level(ctx, level)?;
    let entries = match ctx.n() {
        1 => subs.into_iter().map(|h| {
            let c = ctx.pow(h.order_exp());
            (h, Isogeny::scalar(ctx, c))
        }).collect(),
        2 => {
            let order_p = enumerate_subgroups(ctx, 1);
            let mut memo: BTreeMap<FiniteSubgroup, Isogeny> = BTreeMap::new();
            for h in &subs {
                rank_two_value(ctx, h, &order_p, &mut memo)?;
            }
            subs.into_iter().map(|h| {
                let a = memo[&h].clone();
                (h, a)
            }).collect()
        }
        n => return Err(Error::UnsupportedRank(n)),
    };
    Section::from_entries(ctx, level, entries)
}

fn rank_two_value(
    ctx: &Context,
    h: &FiniteSubgroup,
    order_p: &[FiniteSubgroup],
    memo: &mut BTreeMap<FiniteSubgroup, Isogeny>,
) -> Result<Isogeny> {
    if let Some(a) = memo.get(h) {
        return Ok(a.clone());
    }
    let value = if h.is_trivial() {
        Isogeny::identity(ctx)
    } else if h.order_exp() == 1 {
        order_p_matrix(h)?
    } else {
        let k = order_p
            .iter()
            .find(|k| k.is_subgroup_of(h))
            .ok_or_else(|| Error::Internal(format!("{h} has no subgroup of order p")))?;
        let phi_k = order_p_matrix(k)?;
        let rest = subgroup_image(&phi_k, h);
        compose(&rank_two_value(ctx, &rest, order_p, memo)?, &phi_k)?
    };
    memo.insert(h.clone(), value.clone());
    Ok(value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerSectionCheck {
    Pass,
    /// `s[sup] ≠ s[φ_sub(sup)] · s[sub]`.
    Fail { sub: FiniteSubgroup, sup: FiniteSubgroup },
}

impl PowerSectionCheck {
    pub fn is_pass(&self) -> bool {
        matches!(self, PowerSectionCheck::Pass)
    }
}

pub fn is_power_section(s: &Section) -> Result<PowerSectionCheck> {
    for (t, phi_t) in s.entries() {
        for (h, phi_h) in s.entries() {
            if !h.is_subgroup_of(t) {
                continue;
            }
            let quotient = subgroup_image(phi_h, t);
            let phi_q = s
                .get(&quotient)
                .map_err(|_| Error::precision(format!("φ_H(T) = {quotient} is outside the section")))?;
            if compose(phi_q, phi_h)?.mat != phi_t.mat {
                return Ok(PowerSectionCheck::Fail { sub: h.clone(), sup: t.clone() });
            }
        }
    }
    Ok(PowerSectionCheck::Pass)
}

/// Replaces `s[H]` by `u · s[H]`.
pub fn mutate_section(s: &Section, h: &FiniteSubgroup, u: &Isogeny) -> Result<Section> {
    if !u.is_unit() {
        return Err(Error::invalid(format!("{u} is not invertible mod p")));
    }
    let mut entries: Vec<(FiniteSubgroup, Isogeny)> =
        s.entries().map(|(k, a)| (k.clone(), a.clone())).collect();
    let slot = entries
        .iter_mut()
        .find(|(k, _)| k == h)
        .ok_or_else(|| Error::MissingEntry(format!("section has no value at {h}")))?;
    slot.1 = compose(u, &slot.1)?;
    Section::from_entries(s.ctx(), s.level(), entries)
}

/// Multiplies every value by the unit `u`, so `φ_e = u`.
pub fn twist_section(s: &Section, u: &Isogeny) -> Result<Section> {
    if !u.is_unit() {
        return Err(Error::invalid(format!("{u} is not invertible mod p")));
    }
    let entries: Result<Vec<(FiniteSubgroup, Isogeny)>> =
        s.entries().map(|(k, a)| Ok((k.clone(), compose(u, a)?))).collect();
    Section::from_entries(s.ctx(), s.level(), entries?)
}

fn unit_residues(p: u64, q: i64) -> Vec<i64> {
    (1..q).filter(|&x| x % p as i64 != 0).collect()
}

fn mult_order(x: i64, q: i64) -> u64 {
    let mut y = x.rem_euclid(q);
    let mut k = 1;
    while y != 1 {
        y = (y * x).rem_euclid(q);
        k += 1;
    }
    k
}

/// Generators of `(Z/p^N)^×`.
pub fn scalar_unit_generators(ctx: &Context) -> Vec<i64> {
    let p = ctx.p();
    let q = ctx.modulus();
    if p == 2 {
        return match ctx.level() {
            1 => Vec::new(),
            2 => vec![q - 1],
            _ => vec![q - 1, 5],
        };
    }
    let phi = (q as u64 / p) * (p - 1);
    let g = unit_residues(p, q)
        .into_iter()
        .find(|&g| mult_order(g, q) == phi)
        .expect("(Z/p^N)^× is cyclic for odd p");
    vec![g]
}

/// Generators of `GL_n(Z/p^N)`: elementary matrices and `diag(g, 1, ..., 1)`.
pub fn unit_generators(ctx: &Context) -> Vec<Isogeny> {
    let n = ctx.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let rows: Vec<Vec<i64>> = (0..n)
                    .map(|r| (0..n).map(|c| i64::from(r == c || (r, c) == (i, j))).collect())
                    .collect();
                out.push(Isogeny::from_rows(ctx, &rows).expect("elementary matrix"));
            }
        }
    }
    for g in scalar_unit_generators(ctx) {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|r| (0..n).map(|c| if r != c { 0 } else if r == 0 { g } else { 1 }).collect())
            .collect();
        out.push(Isogeny::from_rows(ctx, &rows).expect("diagonal unit"));
    }
    out
}

/// Every element of `GL_n(Z/p^N)`, as matrices with entries in `[0, p^N)`.
pub fn all_units(ctx: &Context, cap: u64) -> Result<Vec<Isogeny>> {
    let n = ctx.n() as u32;
    let p = ctx.p() as u128;
    let q = ctx.modulus();
    let mut gl_p: u128 = 1;
    for i in 0..n {
        gl_p *= p.pow(n) - p.pow(i);
    }
    let count = gl_p * p.pow(n * n * (ctx.level() - 1));
    if count > cap as u128 {
        return Err(Error::SizeCap { what: format!("GL_{n}(Z/{q})"), needed: count, cap: cap as u128 });
    }
    let size = n as usize;
    let cells = size * size;
    let mut digits = vec![0i64; cells];
    let mut out = Vec::with_capacity(count as usize);
    loop {
        let rows: Vec<Vec<i64>> = digits.chunks(size).map(|c| c.to_vec()).collect();
        if let Ok(a) = Isogeny::from_rows(ctx, &rows) {
            if a.is_unit() {
                out.push(a);
            }
        }
        let mut i = 0;
        while i < cells {
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == cells {
            break;
        }
    }
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

/// All matrices `Π φ_{K_i}` over maximal chains of order-`p` steps
/// `0 = H_0 ⊂ ... ⊂ H_r = H`, using the rank-2 order-`p` values.
pub fn chain_products(h: &FiniteSubgroup) -> Result<BTreeSet<Vec<Vec<BigInt>>>> {
    let ctx = *h.ctx();
    let order_p = enumerate_subgroups(&ctx, 1);
    let mut memo = BTreeMap::new();
    chain_products_rec(&ctx, h, &order_p, &mut memo)
}

fn chain_products_rec(
    ctx: &Context,
    h: &FiniteSubgroup,
    order_p: &[FiniteSubgroup],
    memo: &mut BTreeMap<FiniteSubgroup, BTreeSet<Vec<Vec<BigInt>>>>,
) -> Result<BTreeSet<Vec<Vec<BigInt>>>> {
    if let Some(m) = memo.get(h) {
        return Ok(m.clone());
    }
    let mut out = BTreeSet::new();
    if h.is_trivial() {
        out.insert(Isogeny::identity(ctx).mat);
    } else {
        for k in order_p.iter().filter(|k| k.is_subgroup_of(h)) {
            let phi_k = order_p_matrix(k)?;
            let rest = subgroup_image(&phi_k, h);
            for m in chain_products_rec(ctx, &rest, order_p, memo)? {
                let left = Isogeny::new(ctx, m)?;
                out.insert(compose(&left, &phi_k)?.mat);
            }
        }
    }
    memo.insert(h.clone(), out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::canonicalize;

    fn ctx(p: u64, n: usize, level: u32) -> Context {
        Context::new(p, n, level).unwrap()
    }

    fn iso(c: &Context, rows: &[Vec<i64>]) -> Isogeny {
        Isogeny::from_rows(c, rows).unwrap()
    }

    fn sub(c: &Context, nums: &[&[i64]], den: i64) -> FiniteSubgroup {
        let gens: Vec<TorsionVector> =
            nums.iter().map(|g| TorsionVector::from_fractions(c, g, den).unwrap()).collect();
        canonicalize(c, &gens).unwrap()
    }

    #[test]
    fn kernels_of_order_two_matrices() {
        let c = ctx(2, 2, 2);
        assert_eq!(kernel(&iso(&c, &[vec![0, 2], vec![1, 0]])).unwrap(), sub(&c, &[&[0, 1]], 2));
        assert_eq!(kernel(&iso(&c, &[vec![-1, 1], vec![1, 1]])).unwrap(), sub(&c, &[&[1, 1]], 2));
        assert_eq!(kernel(&Isogeny::scalar(&c, 4)).unwrap(), FiniteSubgroup::torsion(&c, 2).unwrap());
    }

    #[test]
    fn kernel_beyond_level_is_refused() {
        let c = ctx(2, 1, 1);
        assert!(matches!(kernel(&Isogeny::scalar(&c, 4)), Err(Error::Precision(_))));
    }

    #[test]
    fn squares_are_multiplication_by_p() {
        let c = ctx(2, 2, 1);
        for rows in [vec![vec![-1, 1], vec![1, 1]], vec![vec![0, 2], vec![1, 0]]] {
            let a = iso(&c, &rows);
            assert_eq!(compose(&a, &a).unwrap(), Isogeny::scalar(&c, 2));
        }
        let a = iso(&c, &[vec![0, 1], vec![2, 0]]);
        assert_eq!(compose(&a, &Isogeny::identity(&c)).unwrap(), a);
    }

    #[test]
    fn psi_dual_examples() {
        let c = ctx(2, 2, 2);
        assert_eq!(psi_dual(&Isogeny::identity(&c)).unwrap().mat, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(psi_dual(&Isogeny::scalar(&c, 2)).unwrap().mat, vec![vec![1, 0], vec![0, 1]]);
        let a = iso(&c, &[vec![0, 2], vec![1, 0]]);
        assert_eq!(psi_dual(&a).unwrap().mat, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn built_section_values() {
        let c = ctx(2, 2, 3);
        let s = build_power_section(&c, 3).unwrap();
        let h = sub(&c, &[&[1, 0]], 2);
        assert_eq!(s.get(&h).unwrap(), &iso(&c, &[vec![0, 1], vec![2, 0]]));
        for k in 0..=3 {
            let t = FiniteSubgroup::torsion(&c, k).unwrap();
            assert_eq!(s.get(&t).unwrap(), &Isogeny::scalar(&c, 1 << k));
        }
        let c3 = ctx(3, 1, 2);
        let s3 = build_power_section(&c3, 2).unwrap();
        assert_eq!(s3.get(&FiniteSubgroup::torsion(&c3, 2).unwrap()).unwrap(), &Isogeny::scalar(&c3, 9));
    }

    #[test]
    fn rank_three_is_refused() {
        let c = ctx(2, 3, 1);
        assert!(matches!(build_power_section(&c, 1), Err(Error::UnsupportedRank(3))));
    }

    #[test]
    fn mutation_keeps_kernels_but_breaks_the_power_law() {
        let c = ctx(2, 2, 2);
        let s = build_power_section(&c, 2).unwrap();
        assert!(is_power_section(&s).unwrap().is_pass());
        let h = sub(&c, &[&[1, 0]], 2);
        let same = mutate_section(&s, &h, &Isogeny::identity(&c)).unwrap();
        assert_eq!(same, s);
        let u = iso(&c, &[vec![1, 1], vec![0, 1]]);
        let bad = mutate_section(&s, &h, &u).unwrap();
        assert!(!is_power_section(&bad).unwrap().is_pass());
    }

    #[test]
    fn unit_counts() {
        assert_eq!(all_units(&ctx(2, 2, 1), 100).unwrap().len(), 6);
        assert_eq!(all_units(&ctx(2, 2, 2), 1000).unwrap().len(), 96);
        assert_eq!(all_units(&ctx(3, 1, 2), 100).unwrap().len(), 6);
        assert!(matches!(all_units(&ctx(3, 2, 2), 100), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn section_json_round_trip() {
        let c = ctx(3, 2, 1);
        let s = build_power_section(&c, 1).unwrap();
        let back = Section::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, s);
        let bad = s.to_json().unwrap().replacen("-1", "-2", 1);
        assert!(Section::from_json(&bad).is_err());
    }
}
