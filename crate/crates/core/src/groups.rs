//! Permutation groups, wreath products and commuting tuples.
//!
//! Permutations compose right to left: `(a * b)(x) = a(b(x))`. An element
//! `(g_0, ..., g_{m-1}; σ)` of `G ≀ Σ_m` acts on the point `(i, x)`, stored as
//! `i * d + x`, by `(i, x) ↦ (σ(i), g_i(x))`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm(Vec<u32>);

impl TryFrom<Vec<u32>> for Perm {
    type Error = Error;

    fn try_from(images: Vec<u32>) -> Result<Self> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Self {
        p.0
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            let x = x as usize;
            if x >= d || seen[x] {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Builds a permutation from disjoint cycles on `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                let x = x as usize;
                if x >= degree || used[x] {
                    return Err(Error::invalid(format!("bad cycle {c:?} on {degree} points")));
                }
                used[x] = true;
                images[x] = c[(k + 1) % c.len()];
            }
        }
        Ok(Perm(images))
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `g⁻¹ self g`.
    pub fn conj(&self, g: &Perm) -> Perm {
        g.inverse().compose(self).compose(g)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_lengths().into_iter().fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }

    /// `self^e` for any integer `e`.
    pub fn pow(&self, e: i64) -> Perm {
        let d = self.0.len();
        let mut out = vec![0u32; d];
        let mut seen = vec![false; d];
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x] as usize;
            }
            let l = cycle.len() as i64;
            let shift = e.rem_euclid(l) as usize;
            for (k, &y) in cycle.iter().enumerate() {
                out[y] = cycle[(k + shift) % cycle.len()] as u32;
            }
        }
        Perm(out)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| other.0[y as usize] == self.0[other.0[x] as usize])
    }

    pub fn is_p_power_order(&self, p: u64) -> bool {
        let mut o = self.order();
        while o.is_multiple_of(p) {
            o /= p;
        }
        o == 1
    }

    /// Relabels points: the result sends `r(x)` to `r(self(x))`.
    pub fn relabel(&self, r: &[u32]) -> Perm {
        let mut out = vec![0u32; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            out[r[x] as usize] = r[y as usize];
        }
        Perm(out)
    }

    /// Places `self` on points `offset..offset+degree` of a larger set.
    pub fn shifted(&self, offset: usize, degree: usize) -> Perm {
        let mut out: Vec<u32> = (0..degree as u32).collect();
        for (x, &y) in self.0.iter().enumerate() {
            out[offset + x] = y + offset as u32;
        }
        Perm(out)
    }

    /// The restriction to `offset..offset+len`, which must be invariant.
    pub fn restrict(&self, offset: usize, len: usize) -> Result<Perm> {
        let mut out = Vec::with_capacity(len);
        for x in offset..offset + len {
            let y = self.0[x] as usize;
            if y < offset || y >= offset + len {
                return Err(Error::invalid("permutation does not preserve the factor"));
            }
            out.push((y - offset) as u32);
        }
        Ok(Perm(out))
    }

    /// Disjoint union of two permutations.
    pub fn join(&self, other: &Perm) -> Perm {
        let off = self.0.len() as u32;
        Perm(self.0.iter().copied().chain(other.0.iter().map(|&y| y + off)).collect())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for s in 0..self.0.len() {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x.to_string());
                x = self.0[x] as usize;
            }
            write!(f, "({})", cycle.join(" "))?;
            any = true;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Materializes `⟨gens⟩`; elements are sorted so the identity comes first.
    pub fn from_generators(name: impl Into<String>, degree: usize, gens: Vec<Perm>, cap: usize) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::invalid(format!("generator {g} does not have degree {degree}")));
        }
        let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::SizeCap {
                            what: "group order".into(),
                            needed: seen.len() as u128,
                            cap: cap as u128,
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort();
        let index = elements.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        Ok(FiniteGroup { name: name.into(), degree, generators: gens, elements, index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn index_of(&self, g: &Perm) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.index.contains_key(g)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| self.generators.iter().all(|b| a.commutes_with(b)))
    }

    /// Direct product acting on disjoint points.
    pub fn direct_product(&self, other: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
        let needed = self.order() as u128 * other.order() as u128;
        if needed > cap as u128 {
            return Err(Error::SizeCap { what: "direct product order".into(), needed, cap: cap as u128 });
        }
        let d = self.degree + other.degree;
        let mut gens: Vec<Perm> = self.generators.iter().map(|g| g.join(&other.identity())).collect();
        gens.extend(other.generators.iter().map(|g| self.identity().join(g)));
        FiniteGroup::from_generators(format!("{}x{}", self.name, other.name), d, gens, cap)
    }
}

fn parse_factor(s: &str) -> Result<FiniteGroup> {
    let num = |t: &str| -> Result<usize> {
        t.parse::<usize>().map_err(|_| Error::Parse(format!("bad group size in {s:?}")))
    };
    match s {
        "trivial" | "e" | "1" => return FiniteGroup::from_generators("e", 1, Vec::new(), 1),
        _ => {}
    }
    if let Some(k) = s.strip_prefix('C') {
        let k = num(k)?;
        if k == 0 || k > 10_000 {
            return Err(Error::Parse(format!("cyclic order out of range in {s:?}")));
        }
        let cycle: Vec<u32> = (0..k as u32).collect();
        let g = Perm::from_cycles(k, &[cycle])?;
        return FiniteGroup::from_generators(s, k, vec![g], DEFAULT_CAP);
    }
    if let Some(m) = s.strip_prefix('S') {
        let m = num(m)?;
        if m == 0 || m > 9 {
            return Err(Error::Parse(format!("symmetric degree out of range in {s:?}")));
        }
        let mut gens = Vec::new();
        if m >= 2 {
            gens.push(Perm::from_cycles(m, &[vec![0, 1]])?);
        }
        if m >= 3 {
            gens.push(Perm::from_cycles(m, &[(0..m as u32).collect()])?);
        }
        return FiniteGroup::from_generators(s, m, gens, DEFAULT_CAP);
    }
    if let Some(k) = s.strip_prefix('D') {
        let k = num(k)?;
        if !(3..=10_000).contains(&k) {
            return Err(Error::Parse(format!("dihedral degree out of range in {s:?}")));
        }
        let rot = Perm::from_cycles(k, &[(0..k as u32).collect()])?;
        let refl = Perm::from_images((0..k as u32).map(|i| (k as u32 - i) % k as u32).collect())?;
        return FiniteGroup::from_generators(s, k, vec![rot, refl], DEFAULT_CAP);
    }
    Err(Error::Parse(format!("unknown group {s:?}")))
}

/// Parses `perm:<degree>:<gen>;<gen>...` where each generator is written in
/// cycle notation on points `0..degree`, e.g. `perm:4:(0 1)(2 3);(0 2)`.
fn parse_perm_spec(spec: &str, body: &str, cap: usize) -> Result<FiniteGroup> {
    let (deg, gens) = body
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected perm:<degree>:<generators> in {spec:?}")))?;
    let degree: usize = deg
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree in {spec:?}")))?;
    if degree == 0 || degree > 4096 {
        return Err(Error::Parse(format!("degree out of range in {spec:?}")));
    }
    let mut perms = Vec::new();
    for word in gens.split(';').map(str::trim).filter(|w| !w.is_empty()) {
        let mut cycles = Vec::new();
        let mut rest = word;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in generator {word:?}")))?;
            let (inner, after) = open
                .split_once(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {word:?}")))?;
            let pts: Result<Vec<u32>> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad point {t:?} in {word:?}"))))
                .collect();
            let pts = pts?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
            rest = after.trim_start();
        }
        perms.push(Perm::from_cycles(degree, &cycles).map_err(|e| Error::Parse(e.to_string()))?);
    }
    FiniteGroup::from_generators(spec, degree, perms, cap)
}

/// Builds a group from a spec: `trivial`, `C{k}`, `S{m}`, `D{k}`, products
/// such as `C2xC4`, or `perm:{degree}:{generators}`.
pub fn make_group(spec: &str) -> Result<FiniteGroup> {
    make_group_with_cap(spec, DEFAULT_CAP)
}

pub fn make_group_with_cap(spec: &str, cap: usize) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if let Some(body) = spec.strip_prefix("perm:") {
        return parse_perm_spec(spec, body, cap);
    }
    if spec.is_empty() {
        return Err(Error::Parse("empty group spec".into()));
    }
    let mut factors = spec.split('x');
    let mut g = parse_factor(factors.next().unwrap_or_default())?;
    for f in factors {
        g = g.direct_product(&parse_factor(f)?, cap)?;
    }
    if g.order() > cap {
        return Err(Error::SizeCap { what: "group order".into(), needed: g.order() as u128, cap: cap as u128 });
    }
    g.name = spec.to_string();
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WreathElement {
    pub base: Vec<Perm>,
    pub perm: Perm,
}

impl WreathElement {
    pub fn to_perm(&self) -> Result<Perm> {
        let m = self.perm.degree();
        if self.base.len() != m {
            return Err(Error::invalid("wreath element needs one base entry per block"));
        }
        let d = self.base.first().map_or(0, |g| g.degree());
        if self.base.iter().any(|g| g.degree() != d) {
            return Err(Error::invalid("wreath base entries have different degrees"));
        }
        let mut images = vec![0u32; m * d];
        for (i, g) in self.base.iter().enumerate() {
            let target = self.perm.apply(i) * d;
            for x in 0..d {
                images[i * d + x] = (target + g.apply(x)) as u32;
            }
        }
        Perm::from_images(images)
    }

    pub fn from_perm(p: &Perm, d: usize, m: usize) -> Result<Self> {
        if p.degree() != d * m || d == 0 {
            return Err(Error::invalid(format!("permutation of degree {} is not in a wreath over {m} blocks of {d}", p.degree())));
        }
        let mut sigma = Vec::with_capacity(m);
        let mut base = Vec::with_capacity(m);
        for i in 0..m {
            let target = p.apply(i * d) / d;
            let mut g = Vec::with_capacity(d);
            for x in 0..d {
                let y = p.apply(i * d + x);
                if y / d != target {
                    return Err(Error::invalid("permutation does not preserve the block system"));
                }
                g.push((y - target * d) as u32);
            }
            sigma.push(target as u32);
            base.push(Perm(g));
        }
        Ok(WreathElement { base, perm: Perm(sigma) })
    }
}

/// `π`: the block permutation of a wreath element on `m` blocks of size `d`.
pub fn block_perm(p: &Perm, d: usize, m: usize) -> Perm {
    Perm((0..m).map(|i| (p.apply(i * d) / d) as u32).collect())
}

/// The base entry of `p` at block `i`, as a permutation of `0..d`.
pub fn block_entry(p: &Perm, d: usize, i: usize) -> Perm {
    let target = p.apply(i * d) / d;
    Perm((0..d).map(|x| (p.apply(i * d + x) - target * d) as u32).collect())
}

/// `Δ(g) = (g, ..., g; e)`.
pub fn diagonal(g: &Perm, m: usize) -> Perm {
    let d = g.degree();
    Perm((0..m).flat_map(|i| g.0.iter().map(move |&x| (i * d) as u32 + x)).collect())
}

/// Points relabeling for `δ: (G × K) ≀ Σ_m → (G ≀ Σ_m) × (K ≀ Σ_m)`.
pub fn delta_relabeling(dg: usize, dk: usize, m: usize) -> Vec<u32> {
    let mut r = Vec::with_capacity(m * (dg + dk));
    for i in 0..m {
        for x in 0..dg + dk {
            let y = if x < dg { i * dg + x } else { m * dg + i * dk + (x - dg) };
            r.push(y as u32);
        }
    }
    r
}

pub fn factorial(m: usize) -> u128 {
    (1..=m as u128).product()
}

/// `G ≀ Σ_m` as a permutation group on `m * degree(G)` points.
pub fn wreath_product(g: &FiniteGroup, m: usize, cap: usize) -> Result<FiniteGroup> {
    let needed = (g.order() as u128).checked_pow(m as u32).and_then(|x| x.checked_mul(factorial(m)));
    if needed.is_none_or(|x| x > cap as u128) {
        return Err(Error::SizeCap {
            what: format!("|{} wr S{m}|", g.name()),
            needed: needed.unwrap_or(u128::MAX),
            cap: cap as u128,
        });
    }
    let d = g.degree();
    let mut gens = Vec::new();
    for s in g.generators() {
        let mut base = vec![g.identity(); m];
        if m > 0 {
            base[0] = s.clone();
            gens.push(WreathElement { base, perm: Perm::identity(m) }.to_perm()?);
        }
    }
    let blocks = |sigma: Perm| WreathElement { base: vec![g.identity(); m], perm: sigma }.to_perm();
    if m >= 2 {
        gens.push(blocks(Perm::from_cycles(m, &[vec![0, 1]])?)?);
    }
    if m >= 3 {
        gens.push(blocks(Perm::from_cycles(m, &[(0..m as u32).collect()])?)?);
    }
    FiniteGroup::from_generators(format!("wr({},{m})", g.name()), m * d, gens, cap)
}

/// A homomorphism out of a materialized group, stored as the image of every
/// element.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target_degree: usize,
    images: Vec<Perm>,
}

impl GroupHom {
    /// Extends generator images to a homomorphism, failing if the assignment
    /// is not well defined.
    pub fn from_generator_images(source: Arc<FiniteGroup>, target_degree: usize, gen_images: Vec<Perm>) -> Result<Self> {
        if gen_images.len() != source.generators().len() {
            return Err(Error::invalid("one image per generator required"));
        }
        if gen_images.iter().any(|g| g.degree() != target_degree) {
            return Err(Error::invalid("generator image has the wrong degree"));
        }
        let mut images: Vec<Option<Perm>> = vec![None; source.order()];
        let id = source.index_of(&source.identity()).expect("identity present");
        images[id] = Some(Perm::identity(target_degree));
        let mut queue = VecDeque::from([id]);
        while let Some(i) = queue.pop_front() {
            let x = source.elements()[i].clone();
            let fx = images[i].clone().expect("visited");
            for (s, fs) in source.generators().iter().zip(&gen_images) {
                let j = source.index_of(&s.compose(&x)).expect("closed under generators");
                let fy = fs.compose(&fx);
                match &images[j] {
                    Some(existing) if *existing != fy => {
                        return Err(Error::invalid("generator images do not define a homomorphism"));
                    }
                    Some(_) => {}
                    None => {
                        images[j] = Some(fy);
                        queue.push_back(j);
                    }
                }
            }
        }
        Ok(GroupHom { source, target_degree, images: images.into_iter().map(|x| x.expect("connected")).collect() })
    }

    /// The homomorphism given by a point-level map applied to generators.
    pub fn from_map(source: Arc<FiniteGroup>, target_degree: usize, f: impl Fn(&Perm) -> Perm) -> Result<Self> {
        let gens = source.generators().iter().map(f).collect();
        GroupHom::from_generator_images(source, target_degree, gens)
    }

    /// Inclusion of a subgroup acting on the same points.
    pub fn inclusion(source: Arc<FiniteGroup>) -> Self {
        let d = source.degree();
        GroupHom::from_map(source, d, Perm::clone).expect("identity map is a homomorphism")
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target_degree(&self) -> usize {
        self.target_degree
    }

    pub fn apply(&self, g: &Perm) -> Result<Perm> {
        let i = self
            .source
            .index_of(g)
            .ok_or_else(|| Error::invalid(format!("{g} is not in {}", self.source.name())))?;
        Ok(self.images[i].clone())
    }

    pub fn is_injective(&self) -> bool {
        let set: HashSet<&Perm> = self.images.iter().collect();
        set.len() == self.images.len()
    }

    pub fn image_set(&self) -> HashSet<Perm> {
        self.images.iter().cloned().collect()
    }

    /// The inverse on the image, when injective.
    pub fn inverse_map(&self) -> Result<HashMap<Perm, Perm>> {
        if !self.is_injective() {
            return Err(Error::invalid("homomorphism is not injective"));
        }
        Ok(self.images.iter().cloned().zip(self.source.elements().iter().cloned()).collect())
    }
}

/// An `n`-tuple of pairwise commuting elements of `p`-power order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CommutingTuple {
    pub entries: Vec<Perm>,
}

impl CommutingTuple {
    pub fn is_valid(&self, p: u64) -> bool {
        self.entries.iter().all(|g| g.is_p_power_order(p))
            && self.entries.iter().enumerate().all(|(i, a)| self.entries[i + 1..].iter().all(|b| a.commutes_with(b)))
    }
}

/// All tuples of pairwise commuting `p`-elements, in lexicographic order.
pub fn commuting_tuples(g: &FiniteGroup, p: u64, n: usize) -> Vec<CommutingTuple> {
    let pel: Vec<usize> = (0..g.order()).filter(|&i| g.elements()[i].is_p_power_order(p)).collect();
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    extend_tuples(g, &pel, n, &mut cur, &mut out);
    out
}

fn extend_tuples(g: &FiniteGroup, pel: &[usize], n: usize, cur: &mut Vec<usize>, out: &mut Vec<CommutingTuple>) {
    if cur.len() == n {
        out.push(CommutingTuple { entries: cur.iter().map(|&i| g.elements()[i].clone()).collect() });
        return;
    }
    for &x in pel {
        let e = &g.elements()[x];
        if cur.iter().all(|&y| g.elements()[y].commutes_with(e)) {
            cur.push(x);
            extend_tuples(g, pel, n, cur, out);
            cur.pop();
        }
    }
}

/// A class of tuples under simultaneous conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleClass {
    pub representative: CommutingTuple,
    pub size: usize,
}

/// Orbits under simultaneous conjugation, with the lexicographically least
/// member as representative; sorted by representative.
pub fn conjugacy_classes(g: &FiniteGroup, tuples: &[CommutingTuple]) -> Vec<TupleClass> {
    classify_tuples(g, tuples).0
}

/// As [`conjugacy_classes`], also returning the class index of every input.
pub fn classify_tuples(g: &FiniteGroup, tuples: &[CommutingTuple]) -> (Vec<TupleClass>, Vec<usize>) {
    let lookup: HashMap<&[Perm], usize> =
        tuples.iter().enumerate().map(|(i, t)| (t.entries.as_slice(), i)).collect();
    let mut orbit_of: Vec<Option<usize>> = vec![None; tuples.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..tuples.len() {
        if orbit_of[start].is_some() {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = Some(id);
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = &tuples[orbit[head]];
            head += 1;
            for s in g.generators() {
                let y: Vec<Perm> = x.entries.iter().map(|e| e.conj(s)).collect();
                if let Some(&j) = lookup.get(y.as_slice()) {
                    if orbit_of[j].is_none() {
                        orbit_of[j] = Some(id);
                        orbit.push(j);
                    }
                }
            }
        }
        orbits.push(orbit);
    }
    let mut classes: Vec<(TupleClass, usize)> = orbits
        .iter()
        .enumerate()
        .map(|(id, o)| {
            let rep = o.iter().map(|&i| &tuples[i]).min().expect("orbit is nonempty");
            (TupleClass { representative: rep.clone(), size: o.len() }, id)
        })
        .collect();
    classes.sort_by(|a, b| a.0.representative.cmp(&b.0.representative));
    let mut rank = vec![0usize; orbits.len()];
    for (pos, (_, id)) in classes.iter().enumerate() {
        rank[*id] = pos;
    }
    let assignment = orbit_of.iter().map(|o| rank[o.expect("assigned")]).collect();
    (classes.into_iter().map(|c| c.0).collect(), assignment)
}

/// Representatives of the left cosets `xK` fixed by every entry of `t`.
pub fn fixed_cosets(g: &FiniteGroup, k: &GroupHom, t: &[Perm]) -> Result<Vec<Perm>> {
    let sub = k.image_set();
    if sub.iter().any(|x| !g.contains(x)) {
        return Err(Error::invalid("subgroup image is not contained in the group"));
    }
    let mut covered = vec![false; g.order()];
    let mut out = Vec::new();
    for (i, x) in g.elements().iter().enumerate() {
        if covered[i] {
            continue;
        }
        for y in &sub {
            covered[g.index_of(&x.compose(y)).expect("group is closed")] = true;
        }
        let x_inv = x.inverse();
        if t.iter().all(|a| sub.contains(&x_inv.compose(a).compose(x))) {
            out.push(x.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_specs() {
        assert_eq!(make_group("trivial").unwrap().order(), 1);
        assert_eq!(make_group("S3").unwrap().order(), 6);
        let g = make_group("C2xC4").unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        assert_eq!(make_group("D4").unwrap().order(), 8);
        assert_eq!(make_group("perm:4:(0 1)(2 3);(0 2)(1 3)").unwrap().order(), 4);
        for bad in ["", "Q8", "C", "Cx", "perm:3:(0 1", "perm:2:(0 5)", "S0"] {
            assert!(make_group(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn wreath_orders() {
        let e = make_group("trivial").unwrap();
        let s4 = make_group("S4").unwrap();
        assert_eq!(wreath_product(&e, 4, DEFAULT_CAP).unwrap().elements(), s4.elements());
        assert_eq!(wreath_product(&make_group("C2").unwrap(), 2, DEFAULT_CAP).unwrap().order(), 8);
        assert_eq!(wreath_product(&make_group("S3").unwrap(), 2, DEFAULT_CAP).unwrap().order(), 72);
        assert!(wreath_product(&make_group("S3").unwrap(), 4, 1000).is_err());
    }

    #[test]
    fn wreath_multiplication_rule() {
        let g = make_group("C3").unwrap();
        let r = g.generators()[0].clone();
        let id = g.identity();
        let a = WreathElement { base: vec![r.clone(), id.clone()], perm: Perm::from_cycles(2, &[vec![0, 1]]).unwrap() };
        let b = WreathElement { base: vec![id.clone(), r.pow(2)], perm: Perm::identity(2) };
        let ab = WreathElement::from_perm(&a.to_perm().unwrap().compose(&b.to_perm().unwrap()), 3, 2).unwrap();
        // k_i = g_{τ(i)} h_i with τ = e.
        assert_eq!(ab.base, vec![r.clone(), r.pow(2)]);
        assert_eq!(ab.perm, a.perm);
        let back = WreathElement::from_perm(&a.to_perm().unwrap(), 3, 2).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn tuple_counts() {
        let s2 = make_group("S2").unwrap();
        assert_eq!(commuting_tuples(&s2, 2, 1).len(), 2);
        assert_eq!(commuting_tuples(&make_group("e").unwrap(), 3, 2).len(), 1);
        let s3 = make_group("S3").unwrap();
        let t = commuting_tuples(&s3, 2, 1);
        assert_eq!(t.len(), 4);
        assert_eq!(conjugacy_classes(&s3, &t).len(), 2);
        let pairs = commuting_tuples(&s2, 2, 2);
        assert_eq!(conjugacy_classes(&s2, &pairs).len(), 4);
    }

    #[test]
    fn coset_fixed_points() {
        let c2 = Arc::new(make_group("C2").unwrap());
        let e = Arc::new(FiniteGroup::from_generators("e", 2, Vec::new(), 1).unwrap());
        let whole = GroupHom::inclusion(c2.clone());
        let triv = GroupHom::inclusion(e);
        let g = c2.generators()[0].clone();
        assert_eq!(fixed_cosets(&c2, &whole, std::slice::from_ref(&g)).unwrap().len(), 1);
        assert_eq!(fixed_cosets(&c2, &triv, &[c2.identity()]).unwrap().len(), 2);
        assert!(fixed_cosets(&c2, &triv, &[g]).unwrap().is_empty());
    }

    #[test]
    fn homomorphism_check() {
        let c4 = Arc::new(make_group("C4").unwrap());
        let c2 = make_group("C2").unwrap();
        let ok = GroupHom::from_generator_images(c4.clone(), 2, vec![c2.generators()[0].clone()]);
        assert!(ok.is_ok());
        let c3 = make_group("C3").unwrap();
        let bad = GroupHom::from_generator_images(c4, 3, vec![c3.generators()[0].clone()]);
        assert!(bad.is_err());
    }
}
