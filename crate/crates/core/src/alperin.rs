//! Constructive Alperin fusion: factor a G-subconjugation `P → S` through
//! automorphisms of `S` and of fully normalized essential subgroups.
//!
//! States of the search are elementwise maps `P → S`. From the current map
//! `ψ` one may apply any `φ ∈ Aut_G(R)` with `ψ(P) ≤ R`. The search is
//! breadth first from the inclusion, so the factorization returned has the
//! fewest steps; ties go to the least `(R, φ)` sequence.

use std::collections::{HashMap, VecDeque};

use serde_json::json;

use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Morphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlperinStep {
    /// object index of `R`
    pub subgroup: usize,
    /// an element of `Aut_G(R)`
    pub automorphism: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlperinFactorization {
    pub morphism: Morphism,
    /// object indices `Q_0 = P, Q_1, …, Q_n = m(P)`
    pub intermediates: Vec<usize>,
    pub steps: Vec<AlperinStep>,
}

/// `S` first, then the fully normalized essential objects ascending.
pub fn admissible_objects(f: &FusionSystem) -> Vec<usize> {
    let mut out = vec![f.sylow_object()];
    out.extend(
        f.essential_objects()
            .into_iter()
            .filter(|&o| f.is_fully_normalized(o) && o != f.sylow_object()),
    );
    out
}

/// `(previous state, admissible index, automorphism index)`
type Edge = (Vec<u32>, usize, usize);

fn image_object(f: &FusionSystem, map: &[u32]) -> usize {
    let mut image = map.to_vec();
    image.sort_unstable();
    f.object_of_members(&image).expect("images of objects are objects")
}

pub fn alperin_decompose(f: &FusionSystem, m: &Morphism) -> Result<AlperinFactorization> {
    if !f.contains(m) {
        return Err(Error::NotAFusionMorphism);
    }
    let source = f.object_index(m.source()).ok_or(Error::NotAFusionMorphism)?;
    let admissible: Vec<(usize, Vec<Vec<u32>>)> = admissible_objects(f)
        .into_iter()
        .map(|r| (r, f.automorphism_tables(r)))
        .collect();

    let start = m.source().members().to_vec();
    let mut parent: HashMap<Vec<u32>, Option<Edge>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let mut reached = None;
    while let Some(psi) = queue.pop_front() {
        if psi == m.map() {
            reached = Some(psi);
            break;
        }
        for (k, (r, auts)) in admissible.iter().enumerate() {
            let obj = f.object(*r);
            if !psi.iter().all(|&y| obj.contains(y)) {
                continue;
            }
            for (a, table) in auts.iter().enumerate() {
                let next: Vec<u32> = psi
                    .iter()
                    .map(|&y| table[obj.position(y).expect("checked above")])
                    .collect();
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((psi.clone(), k, a)));
                    queue.push_back(next);
                }
            }
        }
    }
    let Some(mut state) = reached else {
        return Err(Error::SearchExhausted);
    };

    let mut steps = Vec::new();
    let mut intermediates = vec![image_object(f, &state)];
    while let Some(Some((prev, k, a))) = parent.get(&state) {
        let (r, auts) = &admissible[*k];
        steps.push(AlperinStep {
            subgroup: *r,
            automorphism: automorphism(f, *r, auts[*a].clone()),
        });
        intermediates.push(image_object(f, prev));
        state = prev.clone();
    }
    steps.reverse();
    intermediates.reverse();
    debug_assert_eq!(intermediates[0], source);
    Ok(AlperinFactorization {
        morphism: m.clone(),
        intermediates,
        steps,
    })
}

fn automorphism(f: &FusionSystem, r: usize, table: Vec<u32>) -> Morphism {
    f.hom(r, r)
        .into_iter()
        .find(|h| h.map() == table)
        .unwrap_or_else(|| Morphism::new(f.object(r).clone(), f.object(r).clone(), table, None))
}

/// Checks every condition of the theorem elementwise.
pub fn verify_factorization(f: &FusionSystem, fac: &AlperinFactorization) -> bool {
    let m = &fac.morphism;
    if !f.contains(m) || fac.intermediates.len() != fac.steps.len() + 1 {
        return false;
    }
    let Some(source) = f.object_index(m.source()) else {
        return false;
    };
    if fac.intermediates[0] != source || fac.intermediates.iter().any(|&q| q >= f.objects().len()) {
        return false;
    }
    let mut current: Vec<u32> = m.source().members().to_vec();
    for (i, step) in fac.steps.iter().enumerate() {
        let r = step.subgroup;
        if r >= f.objects().len() {
            return false;
        }
        let obj = f.object(r);
        let admissible = r == f.sylow_object() || (f.is_essential(r) && f.is_fully_normalized(r));
        let phi = &step.automorphism;
        if !admissible
            || phi.source() != obj
            || phi.target() != obj
            || !f.contains_map(r, phi.map())
            || image_object(f, phi.map()) != r
        {
            return false;
        }
        let (before, after) = (f.object(fac.intermediates[i]), f.object(fac.intermediates[i + 1]));
        if !before.is_subgroup_of(obj) || !after.is_subgroup_of(obj) {
            return false;
        }
        let mut moved: Vec<u32> = before.members().iter().filter_map(|&x| phi.apply(x)).collect();
        moved.sort_unstable();
        if moved != after.members() {
            return false;
        }
        let Some(next) = current.iter().map(|&y| phi.apply(y)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        current = next;
    }
    current == m.map() && image_object(f, &current) == *fac.intermediates.last().expect("nonempty")
}

/// `{"P": [...], "image": [...], "steps": [{"R": [...], "phi": {x: φ(x)}}]}`
/// with elements in cycle notation.
pub fn to_json(f: &FusionSystem, fac: &AlperinFactorization) -> serde_json::Value {
    let g = f.group();
    let name = |x: u32| g.element(x).to_string();
    let names = |xs: &[u32]| xs.iter().map(|&x| name(x)).collect::<Vec<_>>();
    let steps: Vec<serde_json::Value> = fac
        .steps
        .iter()
        .map(|s| {
            let r = f.object(s.subgroup);
            let phi: std::collections::BTreeMap<String, String> = r
                .members()
                .iter()
                .zip(s.automorphism.map())
                .map(|(&x, &y)| (name(x), name(y)))
                .collect();
            json!({"R": names(r.members()), "phi": phi})
        })
        .collect();
    json!({
        "P": names(fac.morphism.source().members()),
        "image": names(&fac.morphism.image()),
        "steps": steps,
    })
}
