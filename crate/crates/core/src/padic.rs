//! Torsion points and finite subgroups of `(Q_p/Z_p)^n`.
//!
//! Everything lives in the `p^N`-torsion for a fixed working level `N`. A
//! vector of residues `c` encodes the point `c / p^N`, and a subgroup `H` is
//! stored as the lattice `L` with `p^N Z^n ⊆ L ⊆ Z^n` and `H = L / p^N Z^n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isogeny::Isogeny;
use crate::lattice::{self, Mat};

const MAX_MODULUS: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    p: u64,
    n: usize,
    level: u32,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Context {
    pub fn new(p: u64, n: usize, level: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::invalid("rank must be at least 1"));
        }
        if level == 0 {
            return Err(Error::invalid("level must be at least 1"));
        }
        let modulus = p.checked_pow(level).filter(|&q| q <= MAX_MODULUS).ok_or_else(|| {
            Error::precision(format!("p^N = {p}^{level} exceeds the supported modulus {MAX_MODULUS}"))
        })?;
        let vars = (modulus as u128).checked_pow(n as u32);
        if vars.is_none_or(|v| v > 1u128 << 62) {
            return Err(Error::precision(format!("(p^N)^n too large for rank {n}")));
        }
        Ok(Context { p, n, level })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `p^N`.
    pub fn modulus(&self) -> i64 {
        self.p.pow(self.level) as i64
    }

    pub fn pow(&self, k: u32) -> i64 {
        (self.p as i64).pow(k)
    }

    /// `v_p(x)` for nonzero `x`.
    pub fn valuation(&self, mut x: i128) -> u32 {
        assert!(x != 0, "valuation of zero");
        let p = self.p as i128;
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    }

    pub fn with_level(&self, level: u32) -> Result<Context> {
        Context::new(self.p, self.n, level)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} n={} N={}", self.p, self.n, self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionVector {
    pub coords: Vec<i64>,
}

impl TorsionVector {
    pub fn new(ctx: &Context, coords: Vec<i64>) -> Result<Self> {
        let v = TorsionVector { coords };
        v.validate(ctx)?;
        Ok(v)
    }

    pub fn reduced(ctx: &Context, coords: &[i64]) -> Self {
        let q = ctx.modulus();
        TorsionVector { coords: coords.iter().map(|c| c.rem_euclid(q)).collect() }
    }

    pub fn zero(ctx: &Context) -> Self {
        TorsionVector { coords: vec![0; ctx.n()] }
    }

    /// The point `(nums_1 / den, ..., nums_n / den)`; `den` must divide `p^N`.
    pub fn from_fractions(ctx: &Context, nums: &[i64], den: i64) -> Result<Self> {
        let q = ctx.modulus();
        if den <= 0 || q % den != 0 {
            return Err(Error::precision(format!("denominator {den} does not divide p^N = {q}")));
        }
        if nums.len() != ctx.n() {
            return Err(Error::invalid("wrong number of coordinates"));
        }
        let scaled: Vec<i64> = nums.iter().map(|x| x * (q / den)).collect();
        Ok(TorsionVector::reduced(ctx, &scaled))
    }

    pub fn validate(&self, ctx: &Context) -> Result<()> {
        if self.coords.len() != ctx.n() {
            return Err(Error::invalid(format!(
                "torsion vector has {} coordinates, expected {}",
                self.coords.len(),
                ctx.n()
            )));
        }
        let q = ctx.modulus();
        if let Some(c) = self.coords.iter().find(|&&c| !(0..q).contains(&c)) {
            return Err(Error::invalid(format!("coordinate {c} outside [0, {q})")));
        }
        Ok(())
    }

    pub fn as_i128(&self) -> Vec<i128> {
        self.coords.iter().map(|&c| c as i128).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// The least `p^j` with `p^j v = 0`.
pub fn elem_order(ctx: &Context, v: &TorsionVector) -> u64 {
    let q = ctx.modulus();
    let mut order = 1u64;
    let mut w: Vec<i64> = v.coords.clone();
    while w.iter().any(|&c| c.rem_euclid(q) != 0) {
        for c in w.iter_mut() {
            *c = (*c * ctx.p() as i64).rem_euclid(q);
        }
        order *= ctx.p();
    }
    order
}

/// A finite subgroup in canonical (HNF lattice) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SubgroupRepr", into = "SubgroupRepr")]
pub struct FiniteSubgroup {
    ctx: Context,
    order_exp: u32,
    basis: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct SubgroupRepr {
    p: u64,
    n: usize,
    level: u32,
    order_exp: u32,
    basis: Vec<Vec<i64>>,
}

impl From<FiniteSubgroup> for SubgroupRepr {
    fn from(h: FiniteSubgroup) -> Self {
        SubgroupRepr {
            p: h.ctx.p,
            n: h.ctx.n,
            level: h.ctx.level,
            order_exp: h.order_exp,
            basis: h.basis,
        }
    }
}

impl TryFrom<SubgroupRepr> for FiniteSubgroup {
    type Error = Error;

    fn try_from(r: SubgroupRepr) -> Result<Self> {
        let ctx = Context::new(r.p, r.n, r.level)?;
        FiniteSubgroup::from_basis(&ctx, r.basis, Some(r.order_exp))
    }
}

/// An HNF basis of a finite-index sublattice of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub mat: Vec<Vec<i64>>,
}

impl LatticeBasis {
    pub fn from_mat(m: &Mat) -> Self {
        LatticeBasis { mat: m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect() }
    }

    pub fn as_i128(&self) -> Mat {
        to_i128(&self.mat)
    }

    pub fn det(&self) -> i128 {
        lattice::det_lower(&self.as_i128())
    }

    pub fn columns(&self) -> Vec<Vec<i128>> {
        lattice::columns(&self.as_i128())
    }
}

fn to_i128(m: &[Vec<i64>]) -> Mat {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

impl FiniteSubgroup {
    fn from_lattice(ctx: &Context, m: Mat) -> Self {
        let d = lattice::det_lower(&m);
        let k = ctx.n() as u32 * ctx.level() - ctx.valuation(d);
        FiniteSubgroup { ctx: *ctx, order_exp: k, basis: LatticeBasis::from_mat(&m).mat }
    }

    /// Validates a basis supplied from outside and builds the subgroup.
    pub fn from_basis(ctx: &Context, basis: Vec<Vec<i64>>, order_exp: Option<u32>) -> Result<Self> {
        let n = ctx.n();
        if basis.len() != n || basis.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("basis must be {n}x{n}")));
        }
        let q = ctx.modulus() as i128;
        let m = to_i128(&basis);
        for i in 0..n {
            let d = m[i][i];
            if d <= 0 || d > q || q % d != 0 {
                return Err(Error::invalid(format!("diagonal entry {d} is not a p-power dividing p^N")));
            }
            for j in 0..n {
                let x = m[i][j];
                if j > i && x != 0 {
                    return Err(Error::invalid("basis is not lower triangular"));
                }
                if j < i && !(0..d).contains(&x) {
                    return Err(Error::invalid("basis is not Hermite-reduced"));
                }
            }
        }
        for j in 0..n {
            let mut e = vec![0i128; n];
            e[j] = q;
            if !lattice::contains(&m, &e) {
                return Err(Error::invalid("lattice does not contain p^N Z^n"));
            }
        }
        let h = FiniteSubgroup::from_lattice(ctx, m);
        if let Some(k) = order_exp {
            if k != h.order_exp {
                return Err(Error::invalid(format!(
                    "order_exp {k} disagrees with basis (order p^{})",
                    h.order_exp
                )));
            }
        }
        Ok(h)
    }

    pub fn trivial(ctx: &Context) -> Self {
        FiniteSubgroup::from_lattice(ctx, lattice::scalar(ctx.n(), ctx.modulus() as i128))
    }

    /// `Λ*[p^j]`.
    pub fn torsion(ctx: &Context, j: u32) -> Result<Self> {
        if j > ctx.level() {
            return Err(Error::precision(format!("Λ*[p^{j}] needs level {j} > N = {}", ctx.level())));
        }
        Ok(FiniteSubgroup::from_lattice(ctx, lattice::scalar(ctx.n(), ctx.pow(ctx.level() - j) as i128)))
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn order_exp(&self) -> u32 {
        self.order_exp
    }

    pub fn order(&self) -> u64 {
        self.ctx.p().pow(self.order_exp)
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn lattice(&self) -> Mat {
        to_i128(&self.basis)
    }

    pub fn is_trivial(&self) -> bool {
        self.order_exp == 0
    }

    pub fn generators(&self) -> Vec<TorsionVector> {
        let q = self.ctx.modulus();
        lattice::columns(&self.lattice())
            .into_iter()
            .map(|c| TorsionVector { coords: c.iter().map(|&x| (x as i64).rem_euclid(q)).collect() })
            .filter(|v| !v.is_zero())
            .collect()
    }

    pub fn contains(&self, v: &TorsionVector) -> bool {
        lattice::contains(&self.lattice(), &v.as_i128())
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        let outer = other.lattice();
        lattice::columns(&self.lattice()).iter().all(|c| lattice::contains(&outer, c))
    }

    /// All elements, sorted.
    pub fn elements(&self) -> Vec<TorsionVector> {
        let q = self.ctx.modulus() as i128;
        let b = self.lattice();
        let n = self.ctx.n();
        let ranges: Vec<i128> = (0..n).map(|j| q / b[j][j]).collect();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut a = vec![0i128; n];
        loop {
            let mut v = vec![0i128; n];
            for (j, &aj) in a.iter().enumerate() {
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi += aj * b[i][j];
                }
            }
            out.push(TorsionVector { coords: v.iter().map(|&x| x.rem_euclid(q) as i64).collect() });
            let mut j = 0;
            loop {
                if j == n {
                    out.sort();
                    return out;
                }
                a[j] += 1;
                if a[j] < ranges[j] {
                    break;
                }
                a[j] = 0;
                j += 1;
            }
        }
    }
}

impl fmt::Display for FiniteSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.ctx.modulus();
        let gens: Vec<String> = self
            .generators()
            .iter()
            .map(|g| {
                let parts: Vec<String> = g
                    .coords
                    .iter()
                    .map(|&c| {
                        if c == 0 {
                            "0".to_string()
                        } else {
                            let g = gcd(c, q);
                            format!("{}/{}", c / g, q / g)
                        }
                    })
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        if gens.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "<{}>", gens.join(", "))
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

pub fn canonicalize(ctx: &Context, gens: &[TorsionVector]) -> Result<FiniteSubgroup> {
    for g in gens {
        g.validate(ctx)?;
    }
    let cols: Vec<Vec<i128>> = gens.iter().map(|g| g.as_i128()).collect();
    let m = lattice::hnf_mod(ctx.n(), &cols, ctx.modulus() as i128);
    Ok(FiniteSubgroup::from_lattice(ctx, m))
}

/// All subgroups of order `p^k` in `Λ*[p^N]`, sorted.
pub fn enumerate_subgroups(ctx: &Context, k: u32) -> Vec<FiniteSubgroup> {
    let n = ctx.n();
    let big_n = ctx.level();
    let total = n as u32 * big_n;
    if k > total {
        return Vec::new();
    }
    let q = ctx.modulus() as i128;
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        if exps.iter().sum::<u32>() == total - k {
            let diag: Vec<i128> = exps.iter().map(|&e| ctx.pow(e) as i128).collect();
            let slots: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
            let mut m = vec![vec![0i128; n]; n];
            for i in 0..n {
                m[i][i] = diag[i];
            }
            let mut idx = vec![0i128; slots.len()];
            loop {
                for (s, &(i, j)) in slots.iter().enumerate() {
                    m[i][j] = idx[s];
                }
                let full = (0..n).all(|j| {
                    let mut e = vec![0i128; n];
                    e[j] = q;
                    lattice::contains(&m, &e)
                });
                if full {
                    out.push(FiniteSubgroup::from_lattice(ctx, m.clone()));
                }
                let mut s = 0;
                while s < slots.len() {
                    idx[s] += 1;
                    if idx[s] < diag[slots[s].0] {
                        break;
                    }
                    idx[s] = 0;
                    s += 1;
                }
                if s == slots.len() {
                    break;
                }
            }
        }
        let mut i = 0;
        while i < n {
            exps[i] += 1;
            if exps[i] <= big_n {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out.sort();
    out
}

/// HNF basis of `Λ_H = {l : <l, h> ∈ Z for all h ∈ H}`.
pub fn annihilator_basis(h: &FiniteSubgroup) -> LatticeBasis {
    let m = lattice::dual(&h.lattice(), h.ctx.modulus() as i128)
        .expect("lattice between p^N Z^n and Z^n has an integral dual");
    LatticeBasis::from_mat(&m)
}

/// The subgroup whose annihilator is generated by `gens` together with
/// `p^N Z^n`.
pub fn subgroup_from_annihilator(ctx: &Context, gens: &[Vec<i128>]) -> FiniteSubgroup {
    let q = ctx.modulus() as i128;
    let ann = lattice::hnf_mod(ctx.n(), gens, q);
    let m = lattice::dual(&ann, q).expect("lattice containing p^N Z^n has an integral dual");
    FiniteSubgroup::from_lattice(ctx, m)
}

fn mat_mod(a: &Isogeny, ctx: &Context) -> Mat {
    let q = ctx.modulus();
    a.mat_mod(q).iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

/// `A(H)` in canonical form.
pub fn subgroup_image(a: &Isogeny, h: &FiniteSubgroup) -> FiniteSubgroup {
    let ctx = h.ctx();
    let image = lattice::mul(&mat_mod(a, ctx), &h.lattice());
    let m = lattice::hnf_mod(ctx.n(), &lattice::columns(&image), ctx.modulus() as i128);
    FiniteSubgroup::from_lattice(ctx, m)
}

/// `{v ∈ Λ*[p^N] : A v ∈ K}`; fails unless this is the full preimage in `Λ*`.
pub fn subgroup_preimage(a: &Isogeny, k: &FiniteSubgroup) -> Result<FiniteSubgroup> {
    let ctx = k.ctx();
    let bk = k.lattice();
    let d = lattice::det_lower(&bk);
    let adj = lattice::adjugate_lower(&bk);
    let m = lattice::mul(&adj, &mat_mod(a, ctx));
    let t = FiniteSubgroup::from_lattice(ctx, lattice::kernel_mod(&m, d));
    let expected = k.order_exp() + a.det_val();
    if t.order_exp() != expected {
        return Err(Error::precision(format!(
            "preimage of {k} has order p^{expected}, which does not fit in level N = {}",
            ctx.level()
        )));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, n: usize, level: u32) -> Context {
        Context::new(p, n, level).unwrap()
    }

    fn tv(c: &Context, nums: &[i64], den: i64) -> TorsionVector {
        TorsionVector::from_fractions(c, nums, den).unwrap()
    }

    #[test]
    fn element_orders() {
        let c = ctx(2, 2, 2);
        assert_eq!(elem_order(&c, &TorsionVector::zero(&c)), 1);
        assert_eq!(elem_order(&c, &tv(&c, &[1, 1], 2)), 2);
        let c3 = ctx(3, 1, 2);
        assert_eq!(elem_order(&c3, &tv(&c3, &[1], 9)), 9);
    }

    #[test]
    fn canonical_forms() {
        let c = ctx(2, 2, 1);
        assert!(canonicalize(&c, &[]).unwrap().is_trivial());
        let full = canonicalize(&c, &[tv(&c, &[1, 0], 2), tv(&c, &[0, 1], 2)]).unwrap();
        assert_eq!(full, FiniteSubgroup::torsion(&c, 1).unwrap());
        assert_eq!(full.order_exp(), 2);
        let a = canonicalize(&c, &[tv(&c, &[1, 1], 2)]).unwrap();
        let b = canonicalize(&c, &[tv(&c, &[1, 1], 2), TorsionVector::zero(&c)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn order_two_subgroups_in_lex_order() {
        let c = ctx(2, 2, 1);
        let subs = enumerate_subgroups(&c, 1);
        let expected: Vec<FiniteSubgroup> = [[1, 0], [1, 1], [0, 1]]
            .iter()
            .map(|g| canonicalize(&c, &[tv(&c, g, 2)]).unwrap())
            .collect();
        assert_eq!(subs, expected);
        assert_eq!(subs[0].basis(), &[vec![1, 0], vec![0, 2]]);
    }

    #[test]
    fn rank_one_has_one_subgroup_per_order() {
        for p in [2, 3, 5] {
            let c = ctx(p, 1, 3);
            for k in 0..=3 {
                assert_eq!(enumerate_subgroups(&c, k).len(), 1);
            }
            assert!(enumerate_subgroups(&c, 4).is_empty());
        }
    }

    #[test]
    fn annihilators() {
        let c = ctx(2, 2, 1);
        let h = canonicalize(&c, &[tv(&c, &[1, 0], 2)]).unwrap();
        assert_eq!(annihilator_basis(&h).mat, vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(annihilator_basis(&FiniteSubgroup::trivial(&c)).mat, vec![vec![1, 0], vec![0, 1]]);
        let c3 = ctx(3, 2, 2);
        let t = FiniteSubgroup::torsion(&c3, 1).unwrap();
        assert_eq!(annihilator_basis(&t).mat, vec![vec![3, 0], vec![0, 3]]);
    }

    #[test]
    fn annihilator_round_trip() {
        let c = ctx(2, 2, 3);
        for k in 0..=6 {
            for h in enumerate_subgroups(&c, k) {
                let ann = annihilator_basis(&h);
                assert_eq!(ann.det(), h.order() as i128);
                assert_eq!(subgroup_from_annihilator(&c, &ann.columns()), h);
            }
        }
    }

    #[test]
    fn elements_match_order() {
        let c = ctx(3, 2, 2);
        for h in enumerate_subgroups(&c, 2) {
            let els = h.elements();
            assert_eq!(els.len() as u64, h.order());
            assert!(els.iter().all(|v| h.contains(v)));
        }
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let c = ctx(2, 2, 2);
        for h in enumerate_subgroups(&c, 2) {
            let s = serde_json::to_string(&h).unwrap();
            let back: FiniteSubgroup = serde_json::from_str(&s).unwrap();
            assert_eq!(back, h);
        }
        let bad = r#"{"p":2,"n":2,"level":2,"order_exp":1,"basis":[[1,0],[3,4]]}"#;
        assert!(serde_json::from_str::<FiniteSubgroup>(bad).is_err());
        let wrong_order = r#"{"p":2,"n":2,"level":1,"order_exp":2,"basis":[[1,0],[0,2]]}"#;
        assert!(serde_json::from_str::<FiniteSubgroup>(wrong_order).is_err());
    }
}
