//! p-local equivalence and the p-local invariants built from fusion.
//!
//! Two groups are p-locally equivalent when some isomorphism between their
//! Sylow p-subgroups carries G-subconjugations to H-subconjugations and
//! back. [`p_locally_equivalent`] first compares cheap invariants, then
//! searches the isomorphisms `S → R`, screening each with the essential
//! subgroup criterion and re-checking the winner against the definition.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;
use serde_json::json;

use crate::abelian::torsion_profile;
use crate::arith::{is_power_of, p_part, prime_divisors};
use crate::describe::Fingerprint;
use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Morphism};
use crate::group::{Group, Limits, Subgroup};
use crate::iso;

/// The invariant that separated two groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Invariant {
    PPart,
    SylowIso,
    CcP,
    AutomizerS,
    EssentialProfile,
    ExhaustedSearch,
}

impl Invariant {
    pub fn tag(self) -> &'static str {
        match self {
            Invariant::PPart => "p-part",
            Invariant::SylowIso => "sylow-iso",
            Invariant::CcP => "cc_p",
            Invariant::AutomizerS => "automizer-S",
            Invariant::EssentialProfile => "essential-profile",
            Invariant::ExhaustedSearch => "exhausted-search",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Invariant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Which invariant failed, with the value computed on each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub invariant: Invariant,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// a fusion-preserving isomorphism `S → R` when equivalent
    pub witness: Option<Morphism>,
    pub refutation: Option<Refutation>,
}

impl EquivalenceVerdict {
    fn refuted(invariant: Invariant, left: impl ToString, right: impl ToString) -> Self {
        EquivalenceVerdict {
            equivalent: false,
            witness: None,
            refutation: Some(Refutation {
                invariant,
                left: left.to_string(),
                right: right.to_string(),
            }),
        }
    }

    /// `{"equivalent", "refuted_by", "detail", "witness"}` where the witness
    /// maps each generator of `S` (cycle notation) to its image.
    pub fn to_json(&self, g: &Group, h: &Group) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|w| {
            let gens = g.generating_set(w.source());
            let map: BTreeMap<String, String> = gens
                .iter()
                .map(|&x| {
                    let y = w.apply(x).expect("generator in S");
                    (g.element(x).to_string(), h.element(y).to_string())
                })
                .collect();
            map
        });
        json!({
            "equivalent": self.equivalent,
            "refuted_by": self.refutation.as_ref().map(|r| r.invariant.tag()),
            "detail": self.refutation.as_ref().map(|r| json!({"left": r.left, "right": r.right})),
            "witness": witness,
        })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EquivalenceOptions {
    pub limits: Limits,
    /// screen candidates with the definition instead of the essential-subgroup test
    pub oracle: bool,
    /// go straight to the isomorphism search
    pub skip_invariants: bool,
}

/// `α(P)` for an isomorphism given on the members of `S`.
struct Transport<'a> {
    map: HashMap<u32, u32>,
    from: &'a FusionSystem<'a>,
    to: &'a FusionSystem<'a>,
}

impl<'a> Transport<'a> {
    fn new(alpha: &Morphism, from: &'a FusionSystem<'a>, to: &'a FusionSystem<'a>) -> Self {
        let map = alpha
            .source()
            .members()
            .iter()
            .copied()
            .zip(alpha.map().iter().copied())
            .collect();
        Transport { map, from, to }
    }

    fn inverse(&self) -> Transport<'a> {
        Transport {
            map: self.map.iter().map(|(&a, &b)| (b, a)).collect(),
            from: self.to,
            to: self.from,
        }
    }

    fn object(&self, object: usize) -> Option<usize> {
        let mut image: Vec<u32> = self
            .from
            .object(object)
            .members()
            .iter()
            .map(|x| self.map[x])
            .collect();
        image.sort_unstable();
        self.to.object_of_members(&image)
    }

    /// `α ∘ f ∘ α⁻¹` as a table on the members of `α(P)`.
    fn conjugate_map(&self, object: usize, table: &[u32]) -> Vec<u32> {
        let mut pairs: Vec<(u32, u32)> = self
            .from
            .object(object)
            .members()
            .iter()
            .zip(table)
            .map(|(x, fx)| (self.map[x], self.map[fx]))
            .collect();
        pairs.sort_unstable();
        pairs.into_iter().map(|(_, y)| y).collect()
    }

    fn one_direction(&self) -> bool {
        let n = self.from.objects().len();
        for p in 0..n {
            let Some(p_img) = self.object(p) else {
                return false;
            };
            for q in 0..n {
                let Some(q_img) = self.object(q) else {
                    return false;
                };
                let target = self.to.object(q_img);
                for f in self.from.hom(p, q) {
                    let t = self.conjugate_map(p, f.map());
                    if !(t.iter().all(|&y| target.contains(y)) && self.to.contains_map(p_img, &t)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn check_alpha(alpha: &Morphism, fg: &FusionSystem, fh: &FusionSystem) -> bool {
    alpha.source() == fg.sylow()
        && alpha.target() == fh.sylow()
        && alpha.is_injective_homomorphism(fg.group(), fh.group())
        && alpha.source().order() == alpha.target().order()
}

/// The definition: for all `P, Q ≤ S` and `f ∈ Hom_G(P, Q)`,
/// `αfα⁻¹ ∈ Hom_H(αP, αQ)`, and the same for `α⁻¹`.
pub fn preserves_fusion_naive(alpha: &Morphism, fg: &FusionSystem, fh: &FusionSystem) -> bool {
    if !check_alpha(alpha, fg, fh) {
        return false;
    }
    let forward = Transport::new(alpha, fg, fh);
    forward.one_direction() && forward.inverse().one_direction()
}

/// Essential subgroups correspond and conjugation by `α` carries
/// `Aut_G(P)` onto `Aut_H(αP)` for every essential `P` and for `P = S`.
pub fn preserves_fusion_fast(alpha: &Morphism, fg: &FusionSystem, fh: &FusionSystem) -> bool {
    if !check_alpha(alpha, fg, fh) {
        return false;
    }
    let t = Transport::new(alpha, fg, fh);
    let mut controlling = vec![fg.sylow_object()];
    for p in 0..fg.objects().len() {
        let Some(q) = t.object(p) else {
            return false;
        };
        if fg.is_essential(p) != fh.is_essential(q) {
            return false;
        }
        if fg.is_essential(p) {
            controlling.push(p);
        }
    }
    controlling.into_iter().all(|p| {
        let q = t.object(p).expect("checked above");
        let mut moved: Vec<Vec<u32>> = fg
            .automorphism_tables(p)
            .iter()
            .map(|a| t.conjugate_map(p, a))
            .collect();
        moved.sort();
        moved == fh.automorphism_tables(q)
    })
}

/// Number of conjugacy classes of p-power-order elements, computed both as
/// `|S/~_G|` and by filtering the conjugacy classes of `G`.
pub fn cc_p(g: &Group, p: u64) -> Result<usize> {
    let s = g.sylow(p);
    let mut class = vec![usize::MAX; s.order()];
    let mut via_sylow = 0;
    for (i, &x) in s.members().iter().enumerate() {
        if class[i] != usize::MAX {
            continue;
        }
        for h in 0..g.order() as u32 {
            if let Some(j) = s.position(g.conj(h, x)) {
                class[j] = via_sylow;
            }
        }
        via_sylow += 1;
    }
    let via_classes = g
        .conjugacy_classes()
        .iter()
        .filter(|c| is_power_of(g.element_order(c[0]) as u64, p))
        .count();
    if via_sylow != via_classes {
        return Err(Error::CriteriaDisagree(format!(
            "cc_p: {via_sylow} classes meet S but {via_classes} classes have p-power order"
        )));
    }
    Ok(via_sylow)
}

fn essential_profile(f: &FusionSystem) -> Vec<(usize, Fingerprint, String)> {
    let mut profile: Vec<_> = f
        .classes()
        .iter()
        .filter(|c| c.essential)
        .map(|c| {
            (
                f.object(c.representative).order(),
                c.automizer_fingerprint.clone(),
                c.automizer_label.clone(),
            )
        })
        .collect();
    profile.sort();
    profile
}

fn render_profile(profile: &[(usize, Fingerprint, String)]) -> String {
    let parts: Vec<String> = profile
        .iter()
        .map(|(order, _, label)| format!("{order}:{label}"))
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Cheap invariants in increasing cost; the first mismatch refutes.
pub fn compare_invariants(fg: &FusionSystem, fh: &FusionSystem) -> Result<Option<EquivalenceVerdict>> {
    let (g, h, p) = (fg.group(), fh.group(), fg.prime());
    let (pg, ph) = (p_part(g.order() as u64, p), p_part(h.order() as u64, p));
    if pg != ph {
        return Ok(Some(EquivalenceVerdict::refuted(Invariant::PPart, pg, ph)));
    }
    if !iso::are_isomorphic(g, fg.sylow(), h, fh.sylow()) {
        let describe = |grp: &Group, s: &Subgroup| {
            crate::describe::label(&grp.subgroup_as_group(s).expect("own subgroup"))
        };
        return Ok(Some(EquivalenceVerdict::refuted(
            Invariant::SylowIso,
            describe(g, fg.sylow()),
            describe(h, fh.sylow()),
        )));
    }
    let (cg, ch) = (cc_p(g, p)?, cc_p(h, p)?);
    if cg != ch {
        return Ok(Some(EquivalenceVerdict::refuted(Invariant::CcP, cg, ch)));
    }
    let (ag, ah) = (fg.class(fg.sylow_object()), fh.class(fh.sylow_object()));
    if ag.automizer_fingerprint != ah.automizer_fingerprint {
        return Ok(Some(EquivalenceVerdict::refuted(
            Invariant::AutomizerS,
            &ag.automizer_label,
            &ah.automizer_label,
        )));
    }
    let (eg, eh) = (essential_profile(fg), essential_profile(fh));
    if eg != eh {
        return Ok(Some(EquivalenceVerdict::refuted(
            Invariant::EssentialProfile,
            render_profile(&eg),
            render_profile(&eh),
        )));
    }
    Ok(None)
}

/// Size of the class of `⟨x⟩` for each member `x` of `S`.
fn cyclic_class_sizes(f: &FusionSystem) -> HashMap<u32, usize> {
    let g = f.group();
    f.sylow()
        .members()
        .iter()
        .map(|&x| {
            let o = f.object_index(&g.cyclic(x)).expect("cyclic subgroups of S are objects");
            (x, f.class(o).size())
        })
        .collect()
}

/// Walks the isomorphisms `S → R` in deterministic order, calling
/// `observe(α, passed)` for each candidate screened, and returns the first
/// one that passes. A candidate passing the fast screen is re-checked
/// against the definition.
pub fn search_witness(
    fg: &FusionSystem,
    fh: &FusionSystem,
    oracle: bool,
    mut observe: impl FnMut(&Morphism, bool),
) -> Result<Option<Morphism>> {
    let (g, h) = (fg.group(), fh.group());
    let (sg, sh) = (cyclic_class_sizes(fg), cyclic_class_sizes(fh));
    let mut found = None;
    let mut failure = None;
    iso::for_each_isomorphism(
        g,
        fg.sylow(),
        h,
        fh.sylow(),
        |x, y| sg[&x] == sh[&y],
        |table| {
            let alpha = Morphism::new(fg.sylow().clone(), fh.sylow().clone(), table.to_vec(), None);
            let passed = if oracle {
                preserves_fusion_naive(&alpha, fg, fh)
            } else {
                preserves_fusion_fast(&alpha, fg, fh)
            };
            observe(&alpha, passed);
            if !passed {
                return ControlFlow::Continue(());
            }
            if !oracle && !preserves_fusion_naive(&alpha, fg, fh) {
                failure = Some(Error::CriteriaDisagree(
                    "essential-subgroup test accepted a map that does not preserve fusion".into(),
                ));
            } else {
                found = Some(alpha);
            }
            ControlFlow::Break(())
        },
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// Decides `G ≃_p H` for fusion systems already built.
pub fn decide(fg: &FusionSystem, fh: &FusionSystem, options: EquivalenceOptions) -> Result<EquivalenceVerdict> {
    if !options.skip_invariants {
        if let Some(verdict) = compare_invariants(fg, fh)? {
            return Ok(verdict);
        }
    } else if fg.sylow().order() != fh.sylow().order() {
        return Ok(EquivalenceVerdict::refuted(
            Invariant::PPart,
            fg.sylow().order(),
            fh.sylow().order(),
        ));
    }
    match search_witness(fg, fh, options.oracle, |_, _| {})? {
        Some(alpha) => Ok(EquivalenceVerdict {
            equivalent: true,
            witness: Some(alpha),
            refutation: None,
        }),
        None => Ok(EquivalenceVerdict::refuted(Invariant::ExhaustedSearch, "-", "-")),
    }
}

pub fn p_locally_equivalent(g: &Group, h: &Group, p: u64) -> Result<EquivalenceVerdict> {
    p_locally_equivalent_with(g, h, p, EquivalenceOptions::default())
}

pub fn p_locally_equivalent_with(
    g: &Group,
    h: &Group,
    p: u64,
    options: EquivalenceOptions,
) -> Result<EquivalenceVerdict> {
    let (pg, ph) = (p_part(g.order() as u64, p), p_part(h.order() as u64, p));
    if pg != ph {
        return Ok(EquivalenceVerdict::refuted(Invariant::PPart, pg, ph));
    }
    let fg = FusionSystem::with_limits(g, p, options.limits)?;
    let fh = FusionSystem::with_limits(h, p, options.limits)?;
    decide(&fg, &fh, options)
}

/// Normal subgroups, as joins of normal closures of single elements.
pub fn normal_subgroups(g: &Group) -> Vec<Subgroup> {
    let whole = g.whole();
    let mut found: Vec<Subgroup> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for class in g.conjugacy_classes() {
        let n = g.normal_closure_in(&whole, &[class[0]]).expect("own subgroup");
        if seen.insert(n.members().to_vec()) {
            found.push(n);
        }
    }
    let minimal = found.clone();
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &minimal {
                let j = g.join(a, b).expect("own subgroups");
                if seen.insert(j.members().to_vec()) {
                    found.push(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    found.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    found
}

/// The four characterizations of p-nilpotency, in order: p′-elements form a
/// subgroup; a normal complement `N` with `S → G/N` an isomorphism exists;
/// `G ≃_p S`; every `Aut_G(P)`, `P ≤ S`, is a p-group.
pub fn p_nilpotency_criteria(g: &Group, p: u64, limits: Limits) -> Result<[bool; 4]> {
    let p_prime: Vec<u32> = (0..g.order() as u32)
        .filter(|&x| !(g.element_order(x) as u64).is_multiple_of(p))
        .collect();
    let span = g.closure(&p_prime);
    let closed = span.order() == p_prime.len();

    let s = g.sylow(p);
    let complement_order = g.order() / s.order();
    let mut has_complement = false;
    for n in normal_subgroups(g) {
        if n.order() != complement_order {
            continue;
        }
        let q = g.quotient(&n)?;
        let mut image: Vec<u32> = s.members().iter().map(|&x| q.projection[x as usize]).collect();
        image.sort_unstable();
        image.dedup();
        if image.len() == s.order() && q.group.order() == s.order() {
            has_complement = true;
            break;
        }
    }

    let s_abstract = g.subgroup_as_group(&s)?;
    let options = EquivalenceOptions {
        limits,
        ..Default::default()
    };
    let local = p_locally_equivalent_with(g, &s_abstract, p, options)?.equivalent;

    let f = FusionSystem::on_sylow(g, p, s, limits)?;
    let automizers_are_p_groups = (0..f.objects().len())
        .all(|o| is_power_of(f.automorphism_tables(o).len() as u64, p));

    Ok([closed, has_complement, local, automizers_are_p_groups])
}

pub fn is_p_nilpotent(g: &Group, p: u64) -> Result<bool> {
    is_p_nilpotent_with(g, p, Limits::default())
}

pub fn is_p_nilpotent_with(g: &Group, p: u64, limits: Limits) -> Result<bool> {
    let criteria = p_nilpotency_criteria(g, p, limits)?;
    if criteria.iter().any(|&c| c != criteria[0]) {
        return Err(Error::CriteriaDisagree(format!(
            "p-nilpotency criteria at p = {p}: {criteria:?}"
        )));
    }
    Ok(criteria[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotencyReport {
    pub nilpotent: bool,
    pub sylow_product_iso: bool,
    pub all_p_nilpotent: bool,
}

pub fn nilpotency_report(g: &Group) -> Result<NilpotencyReport> {
    nilpotency_report_with(g, Limits::default())
}

pub fn nilpotency_report_with(g: &Group, limits: Limits) -> Result<NilpotencyReport> {
    let primes = prime_divisors(g.order() as u64);
    let sylows = primes
        .iter()
        .map(|&p| g.subgroup_as_group(&g.sylow(p)))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Group> = sylows.iter().collect();
    let product = Group::direct_product(&refs, limits.max_order)?;
    let report = NilpotencyReport {
        nilpotent: g.is_nilpotent(),
        sylow_product_iso: iso::groups_isomorphic(g, &product),
        all_p_nilpotent: primes
            .iter()
            .map(|&p| is_p_nilpotent_with(g, p, limits))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|b| b),
    };
    if report.nilpotent != report.sylow_product_iso || report.nilpotent != report.all_p_nilpotent {
        return Err(Error::CriteriaDisagree(format!("nilpotency: {report:?}")));
    }
    Ok(report)
}

/// `dim H¹(G; F_p) = dim (G_ab ⊗ Z/p)`.
pub fn h1_mod_p(g: &Group, p: u64) -> Result<usize> {
    let ab = g.abelianization()?;
    Ok(torsion_profile(&ab, p)?.rank() as usize)
}

/// Which fusion morphisms the stable-element conditions range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StableConditions {
    /// automorphisms of `S` and of the essential subgroups
    Controlling,
    /// every morphism `P → S` of the fusion system
    AllMorphisms,
}

/// Stable homomorphisms `S → Z/p`, written as functionals on `S/Φ(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableH1 {
    pub dimension: usize,
    /// `dim Hom(S, Z/p)`
    pub hom_dimension: usize,
    /// coefficient vectors w.r.t. `basis_elements`
    pub basis: Vec<Vec<u64>>,
    /// members of `S` whose images form a basis of `S/Φ(S)`
    pub basis_elements: Vec<u32>,
}

pub fn stable_h1(f: &FusionSystem) -> Result<StableH1> {
    stable_h1_with(f, StableConditions::Controlling)
}

pub fn stable_h1_with(f: &FusionSystem, conditions: StableConditions) -> Result<StableH1> {
    let g = f.group();
    let p = f.prime();
    let s = f.sylow();
    let coords = frattini_coordinates(g, s, p)?;
    let d = coords.basis_elements.len();
    let objects: Vec<usize> = match conditions {
        StableConditions::Controlling => {
            let mut v = f.essential_objects();
            v.push(f.sylow_object());
            v
        }
        StableConditions::AllMorphisms => (0..f.objects().len()).collect(),
    };
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for o in objects {
        let obj = f.object(o);
        let gens = g.generating_set(obj);
        let maps: Vec<Vec<u32>> = match conditions {
            StableConditions::Controlling => f.automorphism_tables(o),
            StableConditions::AllMorphisms => f
                .hom(o, f.sylow_object())
                .into_iter()
                .map(|m| m.map().to_vec())
                .collect(),
        };
        for map in maps {
            for &x in &gens {
                let fx = map[obj.position(x).expect("generator of P")];
                let (cx, cfx) = (&coords.of[&x], &coords.of[&fx]);
                rows.push((0..d).map(|i| (cfx[i] + p - cx[i]) % p).collect());
            }
        }
    }
    let basis = nullspace_mod_p(rows, d, p);
    Ok(StableH1 {
        dimension: basis.len(),
        hom_dimension: d,
        basis,
        basis_elements: coords.basis_elements,
    })
}

struct FrattiniCoordinates {
    basis_elements: Vec<u32>,
    of: HashMap<u32, Vec<u64>>,
}

/// Coordinates of every member of `S` in `S/Φ(S) ≅ (Z/p)^d`.
fn frattini_coordinates(g: &Group, s: &Subgroup, p: u64) -> Result<FrattiniCoordinates> {
    let mut seeds: Vec<u32> = s.members().iter().map(|&x| g.pow(x, p)).collect();
    let sg = g.generating_set(s);
    for &a in &sg {
        for &b in &sg {
            seeds.push(g.commutator(a, b));
        }
    }
    let frattini = g.normal_closure_in(s, &seeds)?;
    // greedy basis: members of S outside the span of the previous choices
    let mut basis_elements = Vec::new();
    let mut span = frattini.clone();
    for &x in s.members() {
        if !span.contains(x) {
            basis_elements.push(x);
            let mut seeds = g.generating_set(&frattini);
            seeds.extend(&basis_elements);
            span = g.closure(&seeds);
        }
    }
    let d = basis_elements.len();
    // every coset of Φ is Π b_i^{c_i} Φ for a unique c ∈ F_p^d
    let mut of = HashMap::new();
    let total = (p as usize).pow(d as u32);
    for code in 0..total {
        let mut c = vec![0u64; d];
        let mut rest = code;
        let mut element = Group::IDENTITY;
        for i in 0..d {
            c[i] = (rest % p as usize) as u64;
            rest /= p as usize;
            element = g.mul(element, g.pow(basis_elements[i], c[i]));
        }
        for &phi in frattini.members() {
            of.insert(g.mul(element, phi), c.clone());
        }
    }
    debug_assert_eq!(of.len(), s.order());
    Ok(FrattiniCoordinates { basis_elements, of })
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p−2) is the inverse
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Basis of `{v : row · v = 0 for every row}` over `F_p`.
fn nullspace_mod_p(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[i][fc]) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_and_build;

    fn g(src: &str) -> Group {
        parse_and_build(src, 20_000).unwrap()
    }

    #[test]
    fn nullspace_small() {
        // x + y = 0 over F_3 → span{(1, 2)}
        let basis = nullspace_mod_p(vec![vec![1, 1]], 2, 3);
        assert_eq!(basis, vec![vec![2, 1]]);
        assert_eq!(nullspace_mod_p(vec![], 3, 2).len(), 3);
        assert!(nullspace_mod_p(vec![vec![1, 0], vec![0, 1]], 2, 5).is_empty());
    }

    #[test]
    fn cc_p_examples() {
        assert_eq!(cc_p(&g("A(4)"), 2).unwrap(), 2);
        assert_eq!(cc_p(&g("D(12)"), 2).unwrap(), 4);
        assert_eq!(cc_p(&g("D(10)"), 3).unwrap(), 1);
    }

    /// Independent count for the D12 value: conjugacy classes of 2-elements
    /// found by brute-force orbit computation on all elements.
    #[test]
    fn cc_p_dihedral_twelve_by_brute_force() {
        let d12 = g("D(12)");
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for x in 0..12u32 {
            if !is_power_of(d12.element_order(x) as u64, 2) {
                continue;
            }
            let mut orbit: Vec<u32> = (0..12).map(|h| d12.conj(h, x)).collect();
            orbit.sort();
            orbit.dedup();
            if !classes.contains(&orbit) {
                classes.push(orbit);
            }
        }
        assert_eq!(classes.len(), 4);
    }

    fn compare_invariants_after_cc_p(fg: &FusionSystem, fh: &FusionSystem) -> Refutation {
        let (ag, ah) = (fg.class(fg.sylow_object()), fh.class(fh.sylow_object()));
        assert_ne!(ag.automizer_fingerprint, ah.automizer_fingerprint);
        Refutation {
            invariant: Invariant::AutomizerS,
            left: ag.automizer_label.clone(),
            right: ah.automizer_label.clone(),
        }
    }

    #[test]
    fn worked_verdicts() {
        let v = p_locally_equivalent(&g("A(4)"), &g("D(12)"), 2).unwrap();
        assert!(!v.equivalent);
        let r = v.refutation.unwrap();
        assert_eq!(r.invariant, Invariant::CcP);
        assert_eq!((r.left.as_str(), r.right.as_str()), ("2", "4"));

        // cc_p (3 vs 2) already separates these before the automizer stage
        let (d10, agl) = (g("D(10)"), g("AGL(1,5)"));
        let v = p_locally_equivalent(&d10, &agl, 5).unwrap();
        assert!(!v.equivalent);
        let r = v.refutation.unwrap();
        assert_eq!(r.invariant, Invariant::CcP);
        assert_eq!((r.left.as_str(), r.right.as_str()), ("3", "2"));
        let (fd, fa) = (FusionSystem::new(&d10, 5).unwrap(), FusionSystem::new(&agl, 5).unwrap());
        assert_eq!(fd.automorphism_tables(fd.sylow_object()).len(), 2);
        assert_eq!(fa.automorphism_tables(fa.sylow_object()).len(), 4);
        let r = compare_invariants_after_cc_p(&fd, &fa);
        assert_eq!(r.invariant, Invariant::AutomizerS);
        assert_eq!((r.left.as_str(), r.right.as_str()), ("Z(2)", "Z(4)"));

        let v = p_locally_equivalent(&g("Z(2)"), &g("S(3)"), 2).unwrap();
        assert!(v.equivalent);
        let v = p_locally_equivalent(&g("Z(3)"), &g("S(3)"), 3).unwrap();
        assert!(!v.equivalent);
    }

    #[test]
    fn naive_oracle_examples() {
        // Z/2 → {1, (0 1)} ≤ S(3)
        let (z2, s3) = (g("Z(2)"), g("S(3)"));
        let (fz, fs) = (FusionSystem::new(&z2, 2).unwrap(), FusionSystem::new(&s3, 2).unwrap());
        let alpha = Morphism::new(
            fz.sylow().clone(),
            fs.sylow().clone(),
            fs.sylow().members().to_vec(),
            None,
        );
        assert!(preserves_fusion_naive(&alpha, &fz, &fs));
        assert!(preserves_fusion_fast(&alpha, &fz, &fs));

        // both isomorphisms Z/3 → A(3) ≤ S(3) fail
        let z3 = g("Z(3)");
        let (fz, fs) = (FusionSystem::new(&z3, 3).unwrap(), FusionSystem::new(&s3, 3).unwrap());
        let r = fs.sylow().members();
        for map in [vec![r[0], r[1], r[2]], vec![r[0], r[2], r[1]]] {
            let alpha = Morphism::new(fz.sylow().clone(), fs.sylow().clone(), map, None);
            assert!(alpha.is_injective_homomorphism(&z3, &s3));
            assert!(!preserves_fusion_naive(&alpha, &fz, &fs));
            assert!(!preserves_fusion_fast(&alpha, &fz, &fs));
        }

        // identity of F_S(S(4)) at 2
        let s4 = g("S(4)");
        let f = FusionSystem::new(&s4, 2).unwrap();
        let id = Morphism::new(f.sylow().clone(), f.sylow().clone(), f.sylow().members().to_vec(), None);
        assert!(preserves_fusion_naive(&id, &f, &f));
        assert!(preserves_fusion_fast(&id, &f, &f));
    }

    #[test]
    fn sigma4_against_its_sylow() {
        let s4 = g("S(4)");
        let f = FusionSystem::new(&s4, 2).unwrap();
        let d8 = s4.subgroup_as_group(f.sylow()).unwrap();
        let fd = FusionSystem::new(&d8, 2).unwrap();
        let mut count = 0;
        let found = search_witness(&f, &fd, false, |alpha, passed| {
            count += 1;
            assert!(!passed);
            assert!(!preserves_fusion_naive(alpha, &f, &fd));
        })
        .unwrap();
        assert!(found.is_none());
        assert!(count > 0);
    }

    #[test]
    fn identity_witness_for_a_group_against_itself() {
        for src in ["S(4)", "Dic(12) x Z(2)", "A(4)"] {
            let grp = g(src);
            for p in [2, 3] {
                let v = p_locally_equivalent(&grp, &grp, p).unwrap();
                assert!(v.equivalent);
                let w = v.witness.unwrap();
                assert_eq!(w.map(), w.source().members());
            }
        }
    }

    #[test]
    fn p_nilpotency_examples() {
        assert!(is_p_nilpotent(&g("S(3)"), 2).unwrap());
        assert!(!is_p_nilpotent(&g("S(3)"), 3).unwrap());
        assert!(is_p_nilpotent(&g("A(4)"), 3).unwrap());
        assert!(!is_p_nilpotent(&g("A(4)"), 2).unwrap());
        assert!(is_p_nilpotent(&g("A(4)"), 5).unwrap());
        assert!(is_p_nilpotent(&g("Dic(12)"), 2).unwrap());
    }

    #[test]
    fn nilpotency_reports() {
        let all = |b| NilpotencyReport {
            nilpotent: b,
            sylow_product_iso: b,
            all_p_nilpotent: b,
        };
        assert_eq!(nilpotency_report(&g("D(8)")).unwrap(), all(true));
        assert_eq!(nilpotency_report(&g("S(3)")).unwrap(), all(false));
        assert_eq!(nilpotency_report(&g("Z(6)")).unwrap(), all(true));
        assert_eq!(nilpotency_report(&g("Z(1)")).unwrap(), all(true));
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_mod_p(&g("S(4)"), 2).unwrap(), 1);
        assert_eq!(h1_mod_p(&g("A(4)"), 3).unwrap(), 1);
        assert_eq!(h1_mod_p(&g("A(5)"), 2).unwrap(), 0);
        assert_eq!(h1_mod_p(&g("Z(1)"), 2).unwrap(), 0);
    }

    #[test]
    fn stable_h1_examples() {
        let s4 = g("S(4)");
        let f = FusionSystem::new(&s4, 2).unwrap();
        let st = stable_h1(&f).unwrap();
        assert_eq!((st.dimension, st.hom_dimension), (1, 2));
        assert_eq!(stable_h1_with(&f, StableConditions::AllMorphisms).unwrap().dimension, 1);

        let d8 = s4.subgroup_as_group(f.sylow()).unwrap();
        let fd = FusionSystem::new(&d8, 2).unwrap();
        let st = stable_h1(&fd).unwrap();
        assert_eq!(st.dimension, st.hom_dimension);

        let a4 = g("A(4)");
        let f = FusionSystem::new(&a4, 3).unwrap();
        assert_eq!(stable_h1(&f).unwrap().dimension, 1);
    }

    #[test]
    fn normal_subgroups_of_sigma4() {
        let orders: Vec<usize> = normal_subgroups(&g("S(4)")).iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
    }
}
