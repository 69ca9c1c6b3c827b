//! Layered diagrams of a fusion system and their DOT / JSON renderings.
//!
//! Objects of order `p^n` sit on level `n`. Solid edges are inclusions
//! between adjacent levels, dashed edges chain the members of each
//! G-conjugacy class, and every class representative carries its automizer
//! type as an external label.

use std::fmt::Write as _;

use serde::Serialize;

use crate::fusion::FusionSystem;
use crate::group::Group;

#[derive(Clone, Debug, Serialize)]
pub struct DiagramClass {
    pub class: usize,
    pub order: usize,
    pub size: usize,
    pub representative: usize,
    pub members: Vec<usize>,
    pub automizer: String,
    pub essential: bool,
    pub centric: bool,
}

#[derive(Clone, Debug)]
pub struct FusionDiagram {
    pub prime: u64,
    /// `levels[n]` holds the included objects of order `p^n`
    pub levels: Vec<Vec<usize>>,
    /// `(smaller, larger)` covering pairs among included objects
    pub inclusions: Vec<(usize, usize)>,
    /// consecutive members of each class
    pub conjugations: Vec<(usize, usize)>,
    pub classes: Vec<DiagramClass>,
}

impl FusionDiagram {
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.iter().flatten().copied()
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

fn level_of(order: usize, p: u64) -> usize {
    crate::arith::log_exact(order as u64, p).expect("objects are p-groups") as usize
}

fn build(f: &FusionSystem, included: &[usize]) -> FusionDiagram {
    let p = f.prime();
    let top = level_of(f.sylow().order(), p);
    let mut levels = vec![Vec::new(); top + 1];
    let mut keep = vec![false; f.objects().len()];
    for &o in included {
        keep[o] = true;
        levels[level_of(f.object(o).order(), p)].push(o);
    }
    for level in &mut levels {
        level.sort_unstable();
    }

    // covering relation of the inclusion order restricted to `included`
    let mut inclusions = Vec::new();
    for &a in included {
        for &b in included {
            let (pa, pb) = (f.object(a), f.object(b));
            if a == b || pa.order() >= pb.order() || !pa.is_subgroup_of(pb) {
                continue;
            }
            let covered = included.iter().all(|&c| {
                let pc = f.object(c);
                c == a
                    || c == b
                    || !(pa.order() < pc.order()
                        && pc.order() < pb.order()
                        && pa.is_subgroup_of(pc)
                        && pc.is_subgroup_of(pb))
            });
            if covered {
                inclusions.push((a, b));
            }
        }
    }
    inclusions.sort_unstable();

    let mut conjugations = Vec::new();
    let mut classes = Vec::new();
    for (c, class) in f.classes().iter().enumerate() {
        let members: Vec<usize> = class.members.iter().copied().filter(|&o| keep[o]).collect();
        if members.is_empty() {
            continue;
        }
        conjugations.extend(members.windows(2).map(|w| (w[0], w[1])));
        classes.push(DiagramClass {
            class: c,
            order: f.object(class.representative).order(),
            size: class.size(),
            representative: class.representative,
            members,
            automizer: class.automizer_label.clone(),
            essential: class.essential,
            centric: class.centric,
        });
    }
    FusionDiagram {
        prime: p,
        levels,
        inclusions,
        conjugations,
        classes,
    }
}

/// The whole fusion system.
pub fn diagram(f: &FusionSystem) -> FusionDiagram {
    let all: Vec<usize> = (0..f.objects().len()).collect();
    build(f, &all)
}

/// The full subcategory on the essential subgroups and `S`.
pub fn essential_subsystem(f: &FusionSystem) -> FusionDiagram {
    let mut nodes = f.essential_objects();
    nodes.push(f.sylow_object());
    nodes.sort_unstable();
    nodes.dedup();
    build(f, &nodes)
}

/// `<(0 1)(2 3), (0 2)>`, or `1` for the trivial subgroup.
pub fn object_name(f: &FusionSystem, object: usize) -> String {
    let g = f.group();
    let gens = g.generating_set(f.object(object));
    if gens.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = gens.iter().map(|&x| g.element(x).to_string()).collect();
    format!("<{}>", parts.join(", "))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn to_dot(d: &FusionDiagram, f: &FusionSystem) -> String {
    let mut out = String::new();
    let reps: std::collections::BTreeMap<usize, &str> = d
        .classes
        .iter()
        .map(|c| (c.representative, c.automizer.as_str()))
        .collect();
    out.push_str("graph fusion {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=box];\n");
    for (n, level) in d.levels.iter().enumerate() {
        if level.is_empty() {
            continue;
        }
        let ids: Vec<String> = level.iter().map(|o| format!("n{o}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }} // order {}^{n}", ids.join("; "), d.prime);
    }
    for o in d.nodes() {
        let name = escape(&object_name(f, o));
        match reps.get(&o) {
            Some(aut) => {
                let _ = writeln!(out, "  n{o} [label=\"{name}\", xlabel=\"{}\"];", escape(aut));
            }
            None => {
                let _ = writeln!(out, "  n{o} [label=\"{name}\"];");
            }
        }
    }
    for (a, b) in &d.inclusions {
        let _ = writeln!(out, "  n{a} -- n{b};");
    }
    for (a, b) in &d.conjugations {
        let _ = writeln!(out, "  n{a} -- n{b} [style=dashed, constraint=false];");
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonObject {
    index: usize,
    order: usize,
    class: usize,
    generators: Vec<String>,
}

#[derive(Serialize)]
struct JsonDiagram<'a> {
    prime: u64,
    group_order: usize,
    sylow_order: usize,
    objects: Vec<JsonObject>,
    classes: &'a [DiagramClass],
    inclusions: &'a [(usize, usize)],
    conjugations: &'a [(usize, usize)],
}

pub fn to_json(d: &FusionDiagram, f: &FusionSystem) -> serde_json::Value {
    let g: &Group = f.group();
    let objects = d
        .nodes()
        .map(|o| JsonObject {
            index: o,
            order: f.object(o).order(),
            class: f.class_of(o),
            generators: g
                .generating_set(f.object(o))
                .iter()
                .map(|&x| g.element(x).to_string())
                .collect(),
        })
        .collect();
    serde_json::to_value(JsonDiagram {
        prime: d.prime,
        group_order: g.order(),
        sylow_order: f.sylow().order(),
        objects,
        classes: &d.classes,
        inclusions: &d.inclusions,
        conjugations: &d.conjugations,
    })
    .expect("plain data serializes")
}
