//! Backtracking isomorphism search between subgroups of (possibly different)
//! permutation groups.
//!
//! The domain is generated by a short sequence of elements; each generator is
//! assigned a candidate image of the same element order and the same
//! internal class size, and the partial assignment is extended along the
//! Cayley graph to check that it defines an injective homomorphism.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::group::{Group, Subgroup};

/// An isomorphism stored as images of the domain members, aligned with the
/// sorted member list of the domain subgroup.
pub type IsoTable = Vec<u32>;

struct Side<'a> {
    group: &'a Group,
    sub: &'a Subgroup,
    class_size: Vec<usize>,
}

impl<'a> Side<'a> {
    fn new(group: &'a Group, sub: &'a Subgroup) -> Self {
        let class_size = sub
            .members()
            .iter()
            .map(|&x| {
                let mut orbit: Vec<u32> = sub.members().iter().map(|&g| group.conj(g, x)).collect();
                orbit.sort_unstable();
                orbit.dedup();
                orbit.len()
            })
            .collect();
        Side {
            group,
            sub,
            class_size,
        }
    }

    fn signature(&self, pos: usize) -> (u32, usize) {
        (
            self.group.element_order(self.sub.members()[pos]),
            self.class_size[pos],
        )
    }

    fn histogram(&self) -> BTreeMap<(u32, usize), usize> {
        let mut h = BTreeMap::new();
        for pos in 0..self.sub.order() {
            *h.entry(self.signature(pos)).or_default() += 1;
        }
        h
    }
}

struct Search<'a, F> {
    dom: Side<'a>,
    cod: Side<'a>,
    gens: Vec<u32>,
    /// image of each domain position, `u32::MAX` when unassigned
    image: Vec<u32>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    filter: F,
}

impl<F: FnMut(u32, u32) -> bool> Search<'_, F> {
    fn assign(&mut self, pos: usize, y: u32) -> bool {
        let Some(cpos) = self.cod.sub.position(y) else {
            return false;
        };
        if self.used[cpos] {
            return false;
        }
        self.image[pos] = y;
        self.used[cpos] = true;
        self.assigned.push(pos);
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let pos = self.assigned.pop().expect("nonempty");
            let cpos = self.cod.sub.position(self.image[pos]).expect("assigned");
            self.used[cpos] = false;
            self.image[pos] = u32::MAX;
        }
    }

    /// Extends the map over `⟨gens[..=level]⟩`; false on any inconsistency.
    fn extend(&mut self, level: usize) -> bool {
        let (g, h) = (self.dom.group, self.cod.group);
        let gens: Vec<(usize, u32)> = self.gens[..=level]
            .iter()
            .map(|&x| (self.dom.sub.position(x).expect("member"), x))
            .collect();
        let mut head = 0;
        while head < self.assigned.len() {
            let pos = self.assigned[head];
            head += 1;
            let x = self.dom.sub.members()[pos];
            let fx = self.image[pos];
            for &(gpos, gx) in &gens {
                let z = g.mul(x, gx);
                let fz = h.mul(fx, self.image[gpos]);
                let zpos = self.dom.sub.position(z).expect("closed");
                if self.image[zpos] == u32::MAX {
                    let Some(fzpos) = self.cod.sub.position(fz) else {
                        return false;
                    };
                    if self.dom.signature(zpos) != self.cod.signature(fzpos)
                        || !self.assign(zpos, fz)
                    {
                        return false;
                    }
                } else if self.image[zpos] != fz {
                    return false;
                }
            }
        }
        true
    }

    fn candidates(&mut self, level: usize) -> Vec<u32> {
        let x = self.gens[level];
        let xpos = self.dom.sub.position(x).expect("member");
        let sig = self.dom.signature(xpos);
        let same = self
            .cod
            .group
            .index_of(self.dom.group.element(x))
            .filter(|y| self.cod.sub.contains(*y));
        let mut out: Vec<u32> = Vec::new();
        if let Some(y) = same {
            out.push(y);
        }
        for (cpos, &y) in self.cod.sub.members().iter().enumerate() {
            if Some(y) != same && self.cod.signature(cpos) == sig {
                out.push(y);
            }
        }
        out.retain(|&y| (self.filter)(x, y));
        out
    }

    fn run(&mut self, level: usize, visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>) -> ControlFlow<()> {
        if level == self.gens.len() {
            debug_assert!(self.image.iter().all(|&y| y != u32::MAX));
            return visit(&self.image);
        }
        let xpos = self.dom.sub.position(self.gens[level]).expect("member");
        for y in self.candidates(level) {
            let mark = self.assigned.len();
            if self.image[xpos] != u32::MAX {
                // the generator is already determined by earlier ones
                if self.image[xpos] != y {
                    continue;
                }
            } else if !self.assign(xpos, y) {
                continue;
            }
            if self.extend(level) {
                self.run(level + 1, visit)?;
            }
            self.rollback(mark);
        }
        ControlFlow::Continue(())
    }
}

/// Visits every isomorphism `A → B` whose generator images pass `filter`,
/// in a deterministic order. Candidate images that are the very same
/// permutation are tried first, so the identity comes first when `A = B`.
pub fn for_each_isomorphism(
    dom: &Group,
    a: &Subgroup,
    cod: &Group,
    b: &Subgroup,
    filter: impl FnMut(u32, u32) -> bool,
    mut visit: impl FnMut(&[u32]) -> ControlFlow<()>,
) {
    if a.order() != b.order() {
        return;
    }
    let dom_side = Side::new(dom, a);
    let cod_side = Side::new(cod, b);
    if dom_side.histogram() != cod_side.histogram() {
        return;
    }
    let gens = dom.generating_set(a);
    let mut search = Search {
        dom: dom_side,
        cod: cod_side,
        gens,
        image: vec![u32::MAX; a.order()],
        used: vec![false; b.order()],
        assigned: Vec::new(),
        filter,
    };
    // identity always maps to identity
    search.assign(0, Group::IDENTITY);
    let _ = search.run(0, &mut visit);
}

pub fn find_isomorphism(dom: &Group, a: &Subgroup, cod: &Group, b: &Subgroup) -> Option<IsoTable> {
    let mut found = None;
    for_each_isomorphism(dom, a, cod, b, |_, _| true, |t| {
        found = Some(t.to_vec());
        ControlFlow::Break(())
    });
    found
}

pub fn are_isomorphic(dom: &Group, a: &Subgroup, cod: &Group, b: &Subgroup) -> bool {
    find_isomorphism(dom, a, cod, b).is_some()
}

/// Whole-group convenience wrapper.
pub fn groups_isomorphic(g: &Group, h: &Group) -> bool {
    are_isomorphic(g, &g.whole(), h, &h.whole())
}
