//! Polynomials with rational coefficients in indeterminates `t_v`, one for
//! each `v ∈ (Z/p^N)^n`. Isogenies act by substituting indices.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isogeny::Isogeny;
use crate::padic::Context;

/// Sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(u64, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u64) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    fn from_unsorted(mut pairs: Vec<(u64, u32)>) -> Self {
        pairs.sort();
        let mut out: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        out.retain(|&(_, e)| e > 0);
        Monomial(out)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffValue {
    terms: BTreeMap<Monomial, BigRational>,
}

impl CoeffValue {
    pub fn zero() -> Self {
        CoeffValue::default()
    }

    pub fn one() -> Self {
        CoeffValue::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut x = CoeffValue::zero();
        x.add_term(Monomial::one(), c);
        x
    }

    pub fn integer(c: i64) -> Self {
        CoeffValue::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// The indeterminate `t_v`.
    pub fn var(ctx: &Context, v: &[i64]) -> Self {
        let mut x = CoeffValue::zero();
        x.add_term(Monomial::var(encode(ctx, v)), BigRational::one());
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// A common denominator and the integer numerators over it.
    fn numerators(&self) -> (BigInt, Vec<(&Monomial, BigInt)>) {
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.terms.iter().map(|(m, c)| (m, c.numer() * (&den / c.denom()))).collect();
        (den, nums)
    }

    pub fn scale(&self, c: &BigRational) -> CoeffValue {
        if c.is_zero() {
            return CoeffValue::zero();
        }
        CoeffValue { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Substitutes `t_v ↦ t_{f(v)}` on encoded indices.
    pub fn substitute(&self, f: impl Fn(u64) -> u64) -> CoeffValue {
        let mut image: HashMap<u64, u64> = HashMap::new();
        let mut out = CoeffValue::zero();
        for (m, c) in &self.terms {
            let moved = m.0.iter().map(|&(v, e)| (*image.entry(v).or_insert_with(|| f(v)), e)).collect();
            out.add_term(Monomial::from_unsorted(moved), c.clone());
        }
        out
    }

    pub fn to_repr(&self, ctx: &Context) -> CoeffRepr {
        CoeffRepr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    coeff: c.to_string(),
                    monomial: m.0.iter().map(|&(v, e)| (decode(ctx, v), e)).collect(),
                })
                .collect(),
        }
    }

    pub fn from_repr(ctx: &Context, repr: &CoeffRepr) -> Result<Self> {
        let mut out = CoeffValue::zero();
        for t in &repr.terms {
            let c: BigRational = t
                .coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational coefficient {:?}", t.coeff)))?;
            let mut pairs = Vec::with_capacity(t.monomial.len());
            for (v, e) in &t.monomial {
                if *e == 0 {
                    return Err(Error::Parse("zero exponent in monomial".into()));
                }
                let q = ctx.modulus();
                if v.len() != ctx.n() || v.iter().any(|x| !(0..q).contains(x)) {
                    return Err(Error::Parse(format!("variable index {v:?} outside (Z/{q})^{}", ctx.n())));
                }
                pairs.push((encode(ctx, v), *e));
            }
            out.add_term(Monomial::from_unsorted(pairs), c);
        }
        Ok(out)
    }
}

pub fn encode(ctx: &Context, v: &[i64]) -> u64 {
    let q = ctx.modulus();
    v.iter().rev().fold(0u64, |acc, &x| acc * q as u64 + x.rem_euclid(q) as u64)
}

pub fn decode(ctx: &Context, mut idx: u64) -> Vec<i64> {
    let q = ctx.modulus() as u64;
    (0..ctx.n())
        .map(|_| {
            let x = idx % q;
            idx /= q;
            x as i64
        })
        .collect()
}

/// The ring endomorphism `t_v ↦ t_{Aᵀ v mod p^N}`.
pub fn coeff_act(a: &Isogeny, x: &CoeffValue) -> CoeffValue {
    let ctx = *a.ctx();
    let q = ctx.modulus() as i128;
    let m = a.mat_mod(ctx.modulus());
    let n = ctx.n();
    x.substitute(|idx| {
        let v = decode(&ctx, idx);
        let w: Vec<i64> = (0..n)
            .map(|j| ((0..n).map(|i| m[i][j] as i128 * v[i] as i128).sum::<i128>()).rem_euclid(q) as i64)
            .collect();
        encode(&ctx, &w)
    })
}

impl Add for &CoeffValue {
    type Output = CoeffValue;

    fn add(self, rhs: &CoeffValue) -> CoeffValue {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &CoeffValue {
    type Output = CoeffValue;

    fn sub(self, rhs: &CoeffValue) -> CoeffValue {
        self + &(-rhs)
    }
}

impl Neg for &CoeffValue {
    type Output = CoeffValue;

    fn neg(self) -> CoeffValue {
        CoeffValue { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &CoeffValue {
    type Output = CoeffValue;

    fn mul(self, rhs: &CoeffValue) -> CoeffValue {
        let (da, a) = self.numerators();
        let (db, b) = rhs.numerators();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() * b.len());
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                *acc.entry(ma.times(mb)).or_default() += ca * cb;
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, BigRational::new(c, den.clone())))
            .collect();
        CoeffValue { terms }
    }
}

impl fmt::Display for CoeffValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.0.is_empty() {
                    return c.to_string();
                }
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .map(|&(v, e)| if e == 1 { format!("t{v}") } else { format!("t{v}^{e}") })
                    .collect();
                format!("{}*{}", c, vars.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub coeff: String,
    pub monomial: Vec<(Vec<i64>, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRepr {
    pub terms: Vec<TermRepr>,
}
