//! The fusion system `F_S(G)` of a finite group at a prime.
//!
//! Objects are the subgroups of a fixed Sylow p-subgroup `S`, morphisms the
//! maps `x ↦ gxg⁻¹` between them. Construction enumerates the objects,
//! partitions them into G-conjugacy classes, and for each class records
//! whether it is centric and essential together with the automizer type of
//! its representative. Hom-sets are computed on first use.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use crate::arith::p_part;
use crate::describe::{fingerprint, label, Fingerprint};
use crate::error::{Error, Result};
use crate::group::{Group, Limits, Subgroup};
use crate::perm::Permutation;

/// An injective homomorphism between subgroups, stored elementwise: entry
/// `i` of the map is the image of the `i`-th member of the source.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Subgroup,
    target: Subgroup,
    map: Vec<u32>,
    witness: Option<u32>,
}

impl Morphism {
    pub fn new(source: Subgroup, target: Subgroup, map: Vec<u32>, witness: Option<u32>) -> Self {
        assert_eq!(source.order(), map.len(), "map must cover the source");
        Morphism {
            source,
            target,
            map,
            witness,
        }
    }

    pub fn inclusion(source: &Subgroup, target: &Subgroup) -> Self {
        Morphism::new(source.clone(), target.clone(), source.members().to_vec(), Some(Group::IDENTITY))
    }

    pub fn source(&self) -> &Subgroup {
        &self.source
    }

    pub fn target(&self) -> &Subgroup {
        &self.target
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    /// An ambient element `g` with `map = c_g`, when known.
    pub fn witness(&self) -> Option<u32> {
        self.witness
    }

    pub fn apply(&self, x: u32) -> Option<u32> {
        self.source.position(x).map(|i| self.map[i])
    }

    /// Sorted image set.
    pub fn image(&self) -> Vec<u32> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img
    }

    pub fn is_identity_map(&self) -> bool {
        self.map == self.source.members()
    }

    /// `self ∘ first`, defined when the image of `first` lies in the source
    /// of `self`.
    pub fn after(&self, first: &Morphism) -> Option<Morphism> {
        let map = first
            .map
            .iter()
            .map(|&y| self.apply(y))
            .collect::<Option<Vec<_>>>()?;
        Some(Morphism::new(first.source.clone(), self.target.clone(), map, None))
    }

    /// Checks the map is an injective homomorphism landing in the target.
    pub fn is_injective_homomorphism(&self, source_group: &Group, target_group: &Group) -> bool {
        let mut img = self.image();
        img.dedup();
        if img.len() != self.map.len() || !img.iter().all(|&y| self.target.contains(y)) {
            return false;
        }
        let members = self.source.members();
        members.iter().enumerate().all(|(i, &a)| {
            members.iter().enumerate().all(|(j, &b)| {
                self.apply(source_group.mul(a, b))
                    == Some(target_group.mul(self.map[i], self.map[j]))
            })
        })
    }
}

/// One G-conjugacy class of subgroups of `S`.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// object indices, ascending
    pub members: Vec<usize>,
    /// least fully normalized member
    pub representative: usize,
    pub centric: bool,
    pub essential: bool,
    pub automizer_label: String,
    pub automizer_fingerprint: Fingerprint,
}

impl SubgroupClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A G-conjugation from `P` into `S`: table, least witness, image object.
#[derive(Clone, Debug)]
struct Conjugation {
    table: Vec<u32>,
    witness: u32,
    image: usize,
}

/// `Aut_G(P)` realized as permutations of the positions `0..|P|` of the
/// members of `P`.
#[derive(Clone, Debug)]
pub struct Automizer {
    pub object: usize,
    pub group: Group,
}

pub struct FusionSystem<'g> {
    group: &'g Group,
    p: u64,
    limits: Limits,
    sylow: Subgroup,
    objects: Vec<Subgroup>,
    index: HashMap<Vec<u32>, usize>,
    class_of: Vec<usize>,
    classes: Vec<SubgroupClass>,
    /// `conjugator[P]` conjugates the least member of P's class onto P
    conjugator: Vec<u32>,
    fully_normalized: Vec<bool>,
    conjugations: Vec<OnceLock<Vec<Conjugation>>>,
}

impl<'g> FusionSystem<'g> {
    pub fn new(group: &'g Group, p: u64) -> Result<Self> {
        Self::with_limits(group, p, Limits::default())
    }

    pub fn with_limits(group: &'g Group, p: u64, limits: Limits) -> Result<Self> {
        let sylow = group.sylow(p);
        Self::on_sylow(group, p, sylow, limits)
    }

    /// Builds `F_S(G)` for a given Sylow p-subgroup `sylow` of `group`.
    pub fn on_sylow(group: &'g Group, p: u64, sylow: Subgroup, limits: Limits) -> Result<Self> {
        if sylow.group_id() != group.id() {
            return Err(Error::ForeignSubgroup);
        }
        if sylow.order() as u64 != p_part(group.order() as u64, p) {
            return Err(Error::NotASubgroup("not a Sylow subgroup".into()));
        }
        let objects = group.all_subgroups(&sylow, limits.max_subgroup_enumeration)?;
        let index: HashMap<Vec<u32>, usize> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.members().to_vec(), i))
            .collect();

        let n = objects.len();
        let mut class_of = vec![usize::MAX; n];
        let mut conjugator = vec![Group::IDENTITY; n];
        let mut raw_classes: Vec<Vec<usize>> = Vec::new();
        for root in 0..n {
            if class_of[root] != usize::MAX {
                continue;
            }
            let c = raw_classes.len();
            let mut members = Vec::new();
            let normalizer = group.normalizer(&objects[root])?;
            let mut covered = vec![false; group.order()];
            for g in 0..group.order() as u32 {
                if covered[g as usize] {
                    continue;
                }
                for &m in normalizer.members() {
                    covered[group.mul(g, m) as usize] = true;
                }
                let image = group.conjugate(g, &objects[root]);
                if let Some(&obj) = index.get(image.members()) {
                    class_of[obj] = c;
                    conjugator[obj] = g;
                    members.push(obj);
                }
            }
            members.sort_unstable();
            raw_classes.push(members);
        }

        let normalizer_in_s: Vec<usize> = objects
            .iter()
            .map(|o| group.normalizer_in(&sylow, o).map(|n| n.order()))
            .collect::<Result<_>>()?;
        let mut fully_normalized = vec![false; n];
        for members in &raw_classes {
            let best = members.iter().map(|&o| normalizer_in_s[o]).max().unwrap_or(0);
            for &o in members {
                fully_normalized[o] = normalizer_in_s[o] == best;
            }
        }

        let mut fusion = FusionSystem {
            group,
            p,
            limits,
            sylow,
            objects,
            index,
            class_of,
            classes: Vec::new(),
            conjugator,
            fully_normalized,
            conjugations: (0..n).map(|_| OnceLock::new()).collect(),
        };

        let mut classes = Vec::with_capacity(raw_classes.len());
        for members in raw_classes {
            let representative = *members
                .iter()
                .find(|&&o| fusion.fully_normalized[o])
                .expect("the maximum is attained");
            let centric = members.iter().all(|&o| fusion.centric_member(o));
            let automizer = fusion.automizer(representative)?;
            let essential = centric && {
                let out = fusion.outer_automizer_of(&automizer)?;
                has_strongly_p_embedded(&out, p, limits.max_subgroup_enumeration)?.is_some()
            };
            classes.push(SubgroupClass {
                members,
                representative,
                centric,
                essential,
                automizer_label: label(&automizer.group),
                automizer_fingerprint: fingerprint(&automizer.group),
            });
        }
        // classes are listed by representative; class_of follows
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by_key(|&c| classes[c].representative);
        let mut renumber = vec![0; classes.len()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        for c in fusion.class_of.iter_mut() {
            *c = renumber[*c];
        }
        let mut slots: Vec<Option<SubgroupClass>> = classes.into_iter().map(Some).collect();
        fusion.classes = order
            .iter()
            .map(|&old| slots[old].take().expect("each class once"))
            .collect();
        Ok(fusion)
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn sylow(&self) -> &Subgroup {
        &self.sylow
    }

    /// Object index of `S` itself (always the last object).
    pub fn sylow_object(&self) -> usize {
        self.objects.len() - 1
    }

    /// All subgroups of `S`, sorted by order then member list.
    pub fn objects(&self) -> &[Subgroup] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &Subgroup {
        &self.objects[i]
    }

    pub fn object_index(&self, h: &Subgroup) -> Option<usize> {
        if h.group_id() != self.group.id() {
            return None;
        }
        self.index.get(h.members()).copied()
    }

    /// Object whose member list is exactly `members` (sorted).
    pub fn object_of_members(&self, members: &[u32]) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class_of(&self, object: usize) -> usize {
        self.class_of[object]
    }

    pub fn class(&self, object: usize) -> &SubgroupClass {
        &self.classes[self.class_of[object]]
    }

    /// An element `g` with `g P g⁻¹ = Q` for objects in one class.
    pub fn conjugating_element(&self, from: usize, to: usize) -> Option<u32> {
        (self.class_of[from] == self.class_of[to]).then(|| {
            let g = self.group;
            g.mul(self.conjugator[to], g.inv(self.conjugator[from]))
        })
    }

    fn centric_member(&self, o: usize) -> bool {
        let p = &self.objects[o];
        let centralizer = self
            .group
            .centralizer_in(&self.sylow, p)
            .expect("own subgroups");
        centralizer.is_subgroup_of(p)
    }

    pub fn is_centric(&self, object: usize) -> bool {
        self.class(object).centric
    }

    pub fn is_fully_normalized(&self, object: usize) -> bool {
        self.fully_normalized[object]
    }

    pub fn is_essential(&self, object: usize) -> bool {
        self.class(object).essential
    }

    /// Essential objects, ascending.
    pub fn essential_objects(&self) -> Vec<usize> {
        (0..self.objects.len()).filter(|&o| self.is_essential(o)).collect()
    }

    fn conjugations(&self, object: usize) -> &[Conjugation] {
        self.conjugations[object].get_or_init(|| {
            let g = self.group;
            let p = &self.objects[object];
            let gens = g.generating_set(p);
            let mut found: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
            for h in 0..g.order() as u32 {
                if !gens.iter().all(|&x| self.sylow.contains(g.conj(h, x))) {
                    continue;
                }
                let table: Vec<u32> = p.members().iter().map(|&x| g.conj(h, x)).collect();
                found.entry(table).or_insert(h);
            }
            found
                .into_iter()
                .map(|(table, witness)| {
                    let mut image = table.clone();
                    image.sort_unstable();
                    let image = self.index[&image];
                    Conjugation {
                        table,
                        witness,
                        image,
                    }
                })
                .collect()
        })
    }

    /// `Hom_G(P, Q)`: every distinct map `c_g` with `gPg⁻¹ ≤ Q`, each with
    /// its least witness, ordered by table.
    pub fn hom(&self, from: usize, to: usize) -> Vec<Morphism> {
        let q = &self.objects[to];
        self.conjugations(from)
            .iter()
            .filter(|c| self.objects[c.image].is_subgroup_of(q))
            .map(|c| Morphism::new(self.objects[from].clone(), q.clone(), c.table.clone(), Some(c.witness)))
            .collect()
    }

    /// Number of morphisms out of `P` (into `S`).
    pub fn hom_count_into_sylow(&self, from: usize) -> usize {
        self.conjugations(from).len()
    }

    /// Whether the elementwise map `table` on `P` is a G-subconjugation.
    pub fn contains_map(&self, from: usize, table: &[u32]) -> bool {
        let mut image = table.to_vec();
        image.sort_unstable();
        image.dedup();
        if image.len() != table.len() {
            return false;
        }
        self.conjugations(from).iter().any(|c| c.table == table)
    }

    /// Whether `m` is a morphism of this fusion system.
    pub fn contains(&self, m: &Morphism) -> bool {
        let Some(from) = self.object_index(m.source()) else {
            return false;
        };
        m.target().group_id() == self.group.id()
            && m.map().iter().all(|&y| m.target().contains(y))
            && self.contains_map(from, m.map())
    }

    /// `Aut_G(P)` as tables on the members of `P`, ordered by table.
    pub fn automorphism_tables(&self, object: usize) -> Vec<Vec<u32>> {
        self.conjugations(object)
            .iter()
            .filter(|c| c.image == object)
            .map(|c| c.table.clone())
            .collect()
    }

    /// `Aut_G(P)` as a permutation group on the positions of P's members.
    pub fn automizer(&self, object: usize) -> Result<Automizer> {
        let p = &self.objects[object];
        let perms: Vec<Permutation> = self
            .automorphism_tables(object)
            .iter()
            .map(|t| position_permutation(p, t))
            .collect();
        let degree = p.order();
        let mut generators: Vec<Permutation> = Vec::new();
        let mut group = Group::from_generators(degree, Vec::new())?;
        for perm in perms {
            if group.index_of(&perm).is_none() {
                generators.push(perm);
                group = Group::from_generators_capped(degree, generators.clone(), self.limits.max_order)?;
            }
        }
        Ok(Automizer { object, group })
    }

    /// `Out_G(P) = Aut_G(P) / Inn(P)`.
    pub fn outer_automizer(&self, object: usize) -> Result<Group> {
        let a = self.automizer(object)?;
        self.outer_automizer_of(&a)
    }

    fn outer_automizer_of(&self, a: &Automizer) -> Result<Group> {
        let g = self.group;
        let p = &self.objects[a.object];
        let inner: Vec<u32> = p
            .members()
            .iter()
            .map(|&x| {
                let table: Vec<u32> = p.members().iter().map(|&y| g.conj(x, y)).collect();
                a.group
                    .index_of(&position_permutation(p, &table))
                    .expect("inner automorphisms are G-conjugations")
            })
            .collect();
        let inn = a.group.subgroup_from_members(inner)?;
        Ok(a.group.quotient(&inn)?.group)
    }

    /// Converts an automizer element back to a table on P's members.
    pub fn automizer_table(&self, a: &Automizer, element: u32) -> Vec<u32> {
        let members = self.objects[a.object].members();
        a.group
            .element(element)
            .images()
            .iter()
            .map(|&i| members[i as usize])
            .collect()
    }
}

/// The map `table` on `P`, as a permutation of the positions of P's members.
fn position_permutation(p: &Subgroup, table: &[u32]) -> Permutation {
    Permutation::from_images(
        table
            .iter()
            .map(|&y| p.position(y).expect("automorphism stays in P") as u32)
            .collect(),
    )
    .expect("automorphisms are bijective")
}

/// A proper subgroup `K < H` with `p | |K|` containing a Sylow p-subgroup of
/// `H` such that `K ∩ hKh⁻¹` has order prime to `p` for every `h ∉ K`.
/// Returns the least such `K` (by order, then members).
pub fn has_strongly_p_embedded(h: &Group, p: u64, cap: usize) -> Result<Option<Subgroup>> {
    let target = p_part(h.order() as u64, p);
    if target == 1 {
        return Ok(None);
    }
    let sylow = h.sylow(p);
    if h.is_normal(&sylow)? {
        return Ok(None);
    }
    for k in h.all_subgroups(&h.whole(), cap)? {
        if k.order() == h.order() || p_part(k.order() as u64, p) != target {
            continue;
        }
        let strongly_embedded = (0..h.order() as u32).filter(|&x| !k.contains(x)).all(|x| {
            let xinv = h.inv(x);
            let meet = k
                .members()
                .iter()
                .filter(|&&y| k.contains(h.mul(h.mul(xinv, y), x)))
                .count();
            !(meet as u64).is_multiple_of(p)
        });
        if strongly_embedded {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_and_build;

    fn g(src: &str) -> Group {
        parse_and_build(src, 20_000).unwrap()
    }

    fn object_generated_by(f: &FusionSystem, perm_src: &[&str]) -> usize {
        let group = f.group();
        let seeds: Vec<u32> = perm_src
            .iter()
            .map(|s| {
                let e = crate::catalog::parse(&format!("perm[{s}]")).unwrap();
                let crate::catalog::GroupExpr::Perm(gens) = e else { unreachable!() };
                let perm = Permutation::from_cycles(group.degree(), &gens[0]).unwrap();
                group.index_of(&perm).unwrap()
            })
            .collect();
        f.object_index(&group.closure(&seeds)).expect("inside S")
    }

    #[test]
    fn sigma4_at_two() {
        let s4 = g("S(4)");
        let f = FusionSystem::new(&s4, 2).unwrap();
        assert_eq!(f.objects().len(), 10);
        assert_eq!(f.classes().len(), 7);
        let mut sizes: Vec<usize> = f.classes().iter().map(|c| c.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 1, 1, 1, 2, 3]);
        let s = f.class(f.sylow_object());
        assert_eq!(s.automizer_label, "Z(2) x Z(2)");
        let essential: Vec<&SubgroupClass> = f.classes().iter().filter(|c| c.essential).collect();
        assert_eq!(essential.len(), 1);
        assert_eq!(essential[0].automizer_label, "S(3)");
        assert_eq!(f.object(essential[0].representative).order(), 4);
        // the order-2 class of size 3 consists of double transpositions
        let big = f.classes().iter().find(|c| c.size() == 3).unwrap();
        assert!(big.members.iter().all(|&o| f.object(o).order() == 2));
    }

    #[test]
    fn dihedral_sylow_on_its_own() {
        let d8 = g("perm[(0 1 2 3), (0 2)]");
        let f = FusionSystem::new(&d8, 2).unwrap();
        assert_eq!(f.classes().len(), 8);
        let singles_of_order_two = f
            .classes()
            .iter()
            .filter(|c| c.size() == 1 && f.object(c.representative).order() == 2)
            .count();
        assert_eq!(singles_of_order_two, 1);
        assert!(f.essential_objects().is_empty());
    }

    #[test]
    fn trivial_sylow() {
        let s3 = g("S(3)");
        let f = FusionSystem::new(&s3, 5).unwrap();
        assert_eq!(f.objects().len(), 1);
        assert_eq!(f.classes().len(), 1);
        assert!(f.is_centric(0));
        assert!(!f.is_essential(0));
    }

    #[test]
    fn centric_examples() {
        let s4 = g("S(4)");
        let f = FusionSystem::new(&s4, 2).unwrap();
        assert!(f.is_centric(f.sylow_object()));
        let s = f.sylow();
        // the normal Klein four group is inside every Sylow 2-subgroup
        let klein = object_generated_by(&f, &["(0 1)(2 3)", "(0 2)(1 3)"]);
        assert!(f.is_centric(klein));
        assert!(f.is_essential(klein));
        let transposition = f
            .objects()
            .iter()
            .position(|o| {
                o.order() == 2 && s4.element(o.members()[1]).cycles().len() == 1
            })
            .unwrap();
        assert!(!f.is_centric(transposition));
        assert!(s.order() == 8);
    }

    #[test]
    fn fully_normalized_examples() {
        for src in ["S(4)", "D(16)", "A(4) x Z(2)", "S(3) x S(3)"] {
            let group = g(src);
            for p in [2, 3] {
                let f = FusionSystem::new(&group, p).unwrap();
                assert!(f.is_fully_normalized(f.sylow_object()));
                for (o, obj) in f.objects().iter().enumerate() {
                    if group.is_normal_in(obj, f.sylow()).unwrap() {
                        assert!(f.is_fully_normalized(o));
                    }
                }
                for class in f.classes() {
                    assert!(class.members.iter().any(|&o| f.is_fully_normalized(o)));
                    assert!(f.is_fully_normalized(class.representative));
                }
            }
        }
    }

    #[test]
    fn strongly_embedded_examples() {
        let s3 = g("S(3)");
        let k = has_strongly_p_embedded(&s3, 2, 512).unwrap().unwrap();
        assert_eq!(k.order(), 2);
        assert!(has_strongly_p_embedded(&s3, 3, 512).unwrap().is_none());
        assert!(has_strongly_p_embedded(&g("Z(9)"), 2, 512).unwrap().is_none());
        // a p-group never has one: its Sylow is normal
        assert!(has_strongly_p_embedded(&g("D(8)"), 2, 512).unwrap().is_none());
    }

    #[test]
    fn automizers_from_worked_examples() {
        let d10 = g("D(10)");
        let f = FusionSystem::new(&d10, 5).unwrap();
        assert_eq!(f.automizer(f.sylow_object()).unwrap().group.order(), 2);
        let agl = g("AGL(1,5)");
        let f = FusionSystem::new(&agl, 5).unwrap();
        let a = f.automizer(f.sylow_object()).unwrap();
        assert_eq!(a.group.order(), 4);
        assert_eq!(label(&a.group), "Z(4)");
    }

    #[test]
    fn outer_automizer_of_abelian_object_is_its_automizer() {
        let s4 = g("S(4)");
        let f = FusionSystem::new(&s4, 2).unwrap();
        for (o, obj) in f.objects().iter().enumerate() {
            let sub = s4.subgroup_as_group(obj).unwrap();
            if sub.is_abelian() {
                let aut = f.automizer(o).unwrap().group.order();
                assert_eq!(f.outer_automizer(o).unwrap().order(), aut);
            }
        }
    }

    #[test]
    fn abelian_group_has_only_inclusions() {
        let z6 = g("Z(2) x Z(2) x Z(3)");
        let f = FusionSystem::new(&z6, 2).unwrap();
        for a in 0..f.objects().len() {
            for b in 0..f.objects().len() {
                let homs = f.hom(a, b);
                if f.object(a).is_subgroup_of(f.object(b)) {
                    assert_eq!(homs.len(), 1);
                    assert!(homs[0].is_identity_map());
                } else {
                    assert!(homs.is_empty());
                }
            }
        }
    }

    #[test]
    fn identity_is_in_every_endomorphism_set() {
        let s4 = g("S(4)");
        let f = FusionSystem::new(&s4, 2).unwrap();
        for o in 0..f.objects().len() {
            assert!(f.hom(o, o).iter().any(Morphism::is_identity_map));
        }
    }

    #[test]
    fn morphism_membership() {
        let z6 = g("Z(6)");
        let f = FusionSystem::new(&z6, 3).unwrap();
        let s = f.sylow_object();
        let members = f.object(s).members();
        let swap = Morphism::new(
            f.object(s).clone(),
            f.object(s).clone(),
            vec![members[0], members[2], members[1]],
            None,
        );
        assert!(swap.is_injective_homomorphism(&z6, &z6));
        assert!(!f.contains(&swap));
        assert!(f.contains(&Morphism::inclusion(f.object(s), f.object(s))));
    }
}
