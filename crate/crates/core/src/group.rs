//! Finite permutation groups with a fully enumerated element table.
//!
//! Elements are indexed by the lexicographic order of their image lists, so
//! the identity is always element `0`. Every operation after construction
//! works on these integer indices.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::arith::{is_power_of, p_part};
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub const DEFAULT_ORDER_CAP: usize = 20_000;
pub const DEFAULT_SUBGROUP_CAP: usize = 512;

/// Groups up to this order keep a full multiplication table.
const TABLE_LIMIT: usize = 1024;
/// Largest `index²` accepted when realizing a quotient on its cosets.
const QUOTIENT_CELLS_LIMIT: usize = 50_000_000;

/// Size caps shared by the whole engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_order: usize,
    pub max_subgroup_enumeration: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: DEFAULT_ORDER_CAP,
            max_subgroup_enumeration: DEFAULT_SUBGROUP_CAP,
        }
    }
}

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct Group {
    id: u64,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    lookup: HashMap<Permutation, u32>,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
}

/// A subgroup of a specific ambient [`Group`], stored as the sorted list of
/// member indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    group: u64,
    members: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group == other.group
            && self.order() <= other.order()
            && self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn group_id(&self) -> u64 {
        self.group
    }

    /// Position of `x` in the sorted member list.
    pub fn position(&self, x: u32) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    /// Ordering used for every listing of subgroups: by order, then by the
    /// sorted member list.
    pub fn sort_key(&self) -> (usize, &[u32]) {
        (self.members.len(), &self.members)
    }
}

/// `G/N` realized as the permutation action of `G` on the left cosets of `N`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Group,
    /// `projection[x]` is the index in `group` of the coset `xN`.
    pub projection: Vec<u32>,
}

impl Group {
    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> Result<Group> {
        Self::from_generators_capped(degree, generators, DEFAULT_ORDER_CAP)
    }

    pub fn from_generators_capped(
        degree: usize,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<Group> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::BadPermutation(format!(
                    "{g} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
        }
        let identity = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(identity.clone());
        let mut queue = vec![identity];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in &generators {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "group order",
                            limit: cap,
                            actual: seen.len() + 1,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push(y);
                }
            }
        }
        let mut elements = queue;
        elements.sort();
        Ok(Self::from_sorted_elements(degree, generators, elements))
    }

    fn from_sorted_elements(
        degree: usize,
        generators: Vec<Permutation>,
        elements: Vec<Permutation>,
    ) -> Group {
        let n = elements.len();
        let lookup: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let inverses = elements.iter().map(|p| lookup[&p.inverse()]).collect();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(lookup[&a.compose(b)]);
                }
            }
            t
        });
        let mut group = Group {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            degree,
            generators,
            elements,
            lookup,
            table,
            inverses,
            orders: Vec::new(),
        };
        group.orders = (0..n as u32)
            .map(|x| {
                let mut k = 1;
                let mut y = x;
                while y != 0 {
                    y = group.mul(y, x);
                    k += 1;
                }
                k
            })
            .collect();
        group
    }

    pub fn trivial_group() -> Group {
        Self::from_sorted_elements(1, Vec::new(), vec![Permutation::identity(1)])
    }

    /// Direct product on disjoint point sets, factors laid out left to right.
    pub fn direct_product(factors: &[&Group], cap: usize) -> Result<Group> {
        let degree: usize = factors.iter().map(|g| g.degree.max(1)).sum();
        let order: usize = factors.iter().map(|g| g.order()).product();
        if order > cap {
            return Err(Error::CapExceeded {
                what: "group order",
                limit: cap,
                actual: order,
            });
        }
        let mut generators = Vec::new();
        let mut offset = 0;
        for g in factors {
            for gen in &g.generators {
                generators.push(gen.embed(offset, degree));
            }
            offset += g.degree.max(1);
        }
        Self::from_generators_capped(degree.max(1), generators, cap)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_indices(&self) -> Vec<u32> {
        self.generators.iter().map(|g| self.lookup[g]).collect()
    }

    pub fn element(&self, x: u32) -> &Permutation {
        &self.elements[x as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<u32> {
        self.lookup.get(p).copied()
    }

    pub const IDENTITY: u32 = 0;

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => self.lookup[&self.elements[a as usize].compose(&self.elements[b as usize])],
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    pub fn pow(&self, x: u32, mut k: u64) -> u32 {
        let mut base = x;
        let mut acc = Self::IDENTITY;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: u32) -> u32 {
        self.orders[x as usize]
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_indices();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    fn check(&self, h: &Subgroup) -> Result<()> {
        if h.group == self.id {
            Ok(())
        } else {
            Err(Error::ForeignSubgroup)
        }
    }

    fn subgroup_unchecked(&self, mut members: Vec<u32>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        Subgroup {
            group: self.id,
            members,
        }
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup_unchecked((0..self.order() as u32).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        self.subgroup_unchecked(vec![Self::IDENTITY])
    }

    /// Validates that `members` is closed under the group operation.
    pub fn subgroup_from_members(&self, members: Vec<u32>) -> Result<Subgroup> {
        let h = self.subgroup_unchecked(members);
        if h.members.iter().any(|&x| x as usize >= self.order()) {
            return Err(Error::NotASubgroup("index out of range".into()));
        }
        if !h.contains(Self::IDENTITY) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &h.members {
            for &b in &h.members {
                if !h.contains(self.mul(a, b)) {
                    return Err(Error::NotASubgroup("not closed under product".into()));
                }
            }
        }
        Ok(h)
    }

    /// The subgroup generated by `seeds`.
    pub fn closure(&self, seeds: &[u32]) -> Subgroup {
        let mut inside = vec![false; self.order()];
        inside[Self::IDENTITY as usize] = true;
        let mut members = vec![Self::IDENTITY];
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for &s in seeds {
                let y = self.mul(x, s);
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    members.push(y);
                }
            }
        }
        self.subgroup_unchecked(members)
    }

    pub fn cyclic(&self, x: u32) -> Subgroup {
        let mut members = vec![Self::IDENTITY];
        let mut y = x;
        while y != Self::IDENTITY {
            members.push(y);
            y = self.mul(y, x);
        }
        self.subgroup_unchecked(members)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        self.check(a)?;
        self.check(b)?;
        let mut seeds = self.generating_set(a);
        seeds.extend(self.generating_set(b));
        Ok(self.closure(&seeds))
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.subgroup_unchecked(
            a.members.iter().copied().filter(|&x| b.contains(x)).collect(),
        ))
    }

    /// A short generating sequence: members scanned by decreasing element
    /// order (ties by index), each kept only if it enlarges the span.
    pub fn generating_set(&self, h: &Subgroup) -> Vec<u32> {
        let mut candidates = h.members.clone();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut span = self.trivial();
        for x in candidates {
            if span.order() == h.order() {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, g: u32, h: &Subgroup) -> Subgroup {
        self.subgroup_unchecked(h.members.iter().map(|&x| self.conj(g, x)).collect())
    }

    pub fn is_normal_in(&self, h: &Subgroup, within: &Subgroup) -> Result<bool> {
        self.check(h)?;
        self.check(within)?;
        let hg = self.generating_set(h);
        Ok(self
            .generating_set(within)
            .iter()
            .all(|&g| hg.iter().all(|&x| h.contains(self.conj(g, x)))))
    }

    pub fn is_normal(&self, h: &Subgroup) -> Result<bool> {
        self.is_normal_in(h, &self.whole())
    }

    /// `C_W(H)`: elements of `within` commuting with every element of `h`.
    pub fn centralizer_in(&self, within: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
        self.check(within)?;
        self.check(h)?;
        let gens = self.generating_set(h);
        Ok(self.subgroup_unchecked(
            within
                .members
                .iter()
                .copied()
                .filter(|&g| gens.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
                .collect(),
        ))
    }

    /// `N_W(H)`: elements `g` of `within` with `gHg⁻¹ = H`.
    pub fn normalizer_in(&self, within: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
        self.check(within)?;
        self.check(h)?;
        let gens = self.generating_set(h);
        Ok(self.subgroup_unchecked(
            within
                .members
                .iter()
                .copied()
                .filter(|&g| gens.iter().all(|&x| h.contains(self.conj(g, x))))
                .collect(),
        ))
    }

    pub fn centralizer(&self, h: &Subgroup) -> Result<Subgroup> {
        self.centralizer_in(&self.whole(), h)
    }

    pub fn normalizer(&self, h: &Subgroup) -> Result<Subgroup> {
        self.normalizer_in(&self.whole(), h)
    }

    /// `N_G(H, K) = {g : gHg⁻¹ ⊆ K}`, in increasing index order.
    pub fn transporter(&self, h: &Subgroup, k: &Subgroup) -> Result<Vec<u32>> {
        self.check(h)?;
        self.check(k)?;
        if h.order() > k.order() {
            return Ok(Vec::new());
        }
        let gens = self.generating_set(h);
        Ok((0..self.order() as u32)
            .filter(|&g| gens.iter().all(|&x| k.contains(self.conj(g, x))))
            .collect())
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generator_indices();
        self.subgroup_unchecked(
            (0..self.order() as u32)
                .filter(|&z| gens.iter().all(|&g| self.mul(g, z) == self.mul(z, g)))
                .collect(),
        )
    }

    /// Conjugacy classes of elements; each class is sorted, classes are
    /// listed by their least element (which is also the representative).
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let gens = self.generator_indices();
        let mut assigned = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in 0..self.order() as u32 {
            if assigned[x as usize] {
                continue;
            }
            assigned[x as usize] = true;
            let mut class = vec![x];
            let mut head = 0;
            while head < class.len() {
                let y = class[head];
                head += 1;
                for &g in &gens {
                    let z = self.conj(g, y);
                    if !assigned[z as usize] {
                        assigned[z as usize] = true;
                        class.push(z);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// A Sylow `p`-subgroup, grown from the trivial subgroup by repeatedly
    /// adjoining the least `p`-element of `N_G(P) \ P`.
    pub fn sylow(&self, p: u64) -> Subgroup {
        let target = p_part(self.order() as u64, p) as usize;
        let mut current = self.trivial();
        while current.order() < target {
            let normalizer = self
                .normalizer(&current)
                .expect("subgroup of this group");
            let x = normalizer
                .members
                .iter()
                .copied()
                .find(|&x| !current.contains(x) && is_power_of(self.element_order(x) as u64, p))
                .expect("a non-Sylow p-subgroup has a p-element in its normalizer outside it");
            let mut seeds = self.generating_set(&current);
            seeds.push(x);
            current = self.closure(&seeds);
        }
        current
    }

    /// Every subgroup of `h`, sorted by order then member list.
    pub fn all_subgroups(&self, h: &Subgroup, cap: usize) -> Result<Vec<Subgroup>> {
        self.check(h)?;
        if h.order() > cap {
            return Err(Error::CapExceeded {
                what: "subgroup enumeration",
                limit: cap,
                actual: h.order(),
            });
        }
        let local = LocalTable::new(self, h);
        let mut subgroups: Vec<Subgroup> = local
            .enumerate_subgroups()
            .into_iter()
            .map(|bits| self.subgroup_unchecked(local.to_members(&bits)))
            .collect();
        subgroups.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Ok(subgroups)
    }

    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient> {
        self.check(n)?;
        if !self.is_normal(n)? {
            return Err(Error::NotNormal);
        }
        let index = self.order() / n.order();
        if index.saturating_mul(index) > QUOTIENT_CELLS_LIMIT {
            return Err(Error::CapExceeded {
                what: "quotient representation (index squared)",
                limit: QUOTIENT_CELLS_LIMIT,
                actual: index.saturating_mul(index),
            });
        }
        let mut coset = vec![u32::MAX; self.order()];
        let mut reps = Vec::with_capacity(index);
        for x in 0..self.order() as u32 {
            if coset[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for &m in &n.members {
                coset[self.mul(x, m) as usize] = c;
            }
        }
        let action = |g: u32| -> Permutation {
            let images = reps.iter().map(|&r| coset[self.mul(g, r) as usize]).collect();
            Permutation::from_images(images).expect("left multiplication permutes cosets")
        };
        let generators = self.generator_indices().into_iter().map(action).collect();
        let group = Group::from_generators_capped(index, generators, usize::MAX)?;
        let rep_image: Vec<u32> = reps
            .iter()
            .map(|&r| group.index_of(&action(r)).expect("coset action lies in quotient"))
            .collect();
        let projection = coset.iter().map(|&c| rep_image[c as usize]).collect();
        Ok(Quotient { group, projection })
    }

    /// Normal closure of `seeds` under conjugation by `within`.
    pub fn normal_closure_in(&self, within: &Subgroup, seeds: &[u32]) -> Result<Subgroup> {
        self.check(within)?;
        let conjugators = self.generating_set(within);
        let mut current = self.closure(seeds);
        loop {
            let gens = self.generating_set(&current);
            let extra: Vec<u32> = conjugators
                .iter()
                .flat_map(|&g| gens.iter().map(move |&x| (g, x)))
                .map(|(g, x)| self.conj(g, x))
                .filter(|&y| !current.contains(y))
                .collect();
            if extra.is_empty() {
                return Ok(current);
            }
            let mut seeds = gens;
            seeds.extend(extra);
            current = self.closure(&seeds);
        }
    }

    /// `[A, B]`, the normal closure in `⟨A, B⟩` of commutators of generators.
    pub fn commutator_of(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        let ag = self.generating_set(a);
        let bg = self.generating_set(b);
        let seeds: Vec<u32> = ag
            .iter()
            .flat_map(|&x| bg.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.commutator(x, y))
            .collect();
        let ab = self.join(a, b)?;
        self.normal_closure_in(&ab, &seeds)
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_of(&g, &g).expect("own subgroups")
    }

    pub fn abelianization(&self) -> Result<Group> {
        Ok(self.quotient(&self.commutator_subgroup())?.group)
    }

    /// `γ₁ = G, γₙ₊₁ = [γₙ, G]`, listed until the first repeat.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.commutator_of(last, &g).expect("own subgroups");
            if next == *last {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series()
            .last()
            .is_some_and(Subgroup::is_trivial)
    }

    /// `h` as a standalone permutation group. Because member indices follow
    /// the same lexicographic order, position `i` of `h.members()` is
    /// element `i` of the result.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<Group> {
        self.check(h)?;
        let generators = self
            .generating_set(h)
            .into_iter()
            .map(|x| self.element(x).clone())
            .collect();
        let elements = h.members.iter().map(|&x| self.element(x).clone()).collect();
        Ok(Self::from_sorted_elements(self.degree, generators, elements))
    }
}

/// Multiplication table of a subgroup in local `0..|H|` coordinates, used by
/// subgroup enumeration.
struct LocalTable {
    members: Vec<u32>,
    table: Vec<u32>,
    words: usize,
}

type Bits = Vec<u64>;

impl LocalTable {
    fn new(group: &Group, h: &Subgroup) -> Self {
        let m = h.order();
        let mut table = Vec::with_capacity(m * m);
        for &a in &h.members {
            for &b in &h.members {
                table.push(h.position(group.mul(a, b)).expect("closed") as u32);
            }
        }
        LocalTable {
            members: h.members.clone(),
            table,
            words: m.div_ceil(64),
        }
    }

    fn size(&self) -> usize {
        self.members.len()
    }

    fn closure(&self, gens: &[u32]) -> Bits {
        let mut bits = vec![0u64; self.words];
        bits[0] |= 1;
        let mut list = vec![0u32];
        let mut head = 0;
        while head < list.len() {
            let x = list[head] as usize;
            head += 1;
            for &g in gens {
                let y = self.table[x * self.size() + g as usize];
                let (w, b) = (y as usize / 64, y % 64);
                if bits[w] & (1 << b) == 0 {
                    bits[w] |= 1 << b;
                    list.push(y);
                }
            }
        }
        bits
    }

    fn contains(bits: &Bits, x: u32) -> bool {
        bits[x as usize / 64] & (1 << (x % 64)) != 0
    }

    fn is_subset(a: &Bits, b: &Bits) -> bool {
        a.iter().zip(b).all(|(x, y)| x & !y == 0)
    }

    /// Layered closure: cyclic subgroups first, then joins of each new
    /// subgroup with every cyclic subgroup it does not contain.
    fn enumerate_subgroups(&self) -> Vec<Bits> {
        let mut seen: HashSet<Bits> = HashSet::new();
        let mut cyclic: Vec<(u32, Bits)> = Vec::new();
        for x in 0..self.size() as u32 {
            let c = self.closure(&[x]);
            if seen.insert(c.clone()) {
                cyclic.push((x, c));
            }
        }
        let mut all: Vec<(Vec<u32>, Bits)> =
            cyclic.iter().map(|(x, c)| (vec![*x], c.clone())).collect();
        let mut frontier: Vec<usize> = (0..all.len()).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for k in frontier {
                for (x, c) in &cyclic {
                    if Self::is_subset(c, &all[k].1) {
                        continue;
                    }
                    let mut gens = all[k].0.clone();
                    gens.push(*x);
                    let j = self.closure(&gens);
                    if seen.insert(j.clone()) {
                        all.push((gens, j));
                        next.push(all.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        all.into_iter().map(|(_, b)| b).collect()
    }

    fn to_members(&self, bits: &Bits) -> Vec<u32> {
        (0..self.size() as u32)
            .filter(|&i| Self::contains(bits, i))
            .map(|i| self.members[i as usize])
            .collect()
    }
}
