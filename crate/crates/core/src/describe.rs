//! Printable isomorphism-type labels for small groups.
//!
//! Abelian groups are named exactly from their torsion profiles. Nonabelian
//! groups are matched by [`Fingerprint`] against a table restricted to orders
//! where the table lists every nonabelian group; anything else is rendered
//! as `order-n`.

use std::sync::OnceLock;

use crate::abelian::torsion_profile;
use crate::arith::prime_divisors;
use crate::catalog::parse_and_build;
use crate::group::Group;

/// Isomorphism invariants cheap enough to compute for every automizer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub order: usize,
    /// elementary divisors of the abelianization, ascending by prime
    pub abelianization: Vec<u64>,
    pub center_order: usize,
    /// `(element order, count)` pairs
    pub order_histogram: Vec<(u32, usize)>,
    pub nilpotent: bool,
}

pub fn elementary_divisors(abelian: &Group) -> Vec<u64> {
    prime_divisors(abelian.order() as u64)
        .into_iter()
        .flat_map(|p| torsion_profile(abelian, p).expect("abelian").tuple())
        .collect()
}

pub fn fingerprint(g: &Group) -> Fingerprint {
    let mut histogram = std::collections::BTreeMap::new();
    for x in 0..g.order() as u32 {
        *histogram.entry(g.element_order(x)).or_insert(0usize) += 1;
    }
    let abelianization = g
        .abelianization()
        .map(|ab| elementary_divisors(&ab))
        .unwrap_or_default();
    Fingerprint {
        order: g.order(),
        abelianization,
        center_order: g.center().order(),
        order_histogram: histogram.into_iter().collect(),
        nilpotent: g.is_nilpotent(),
    }
}

/// Nonabelian orders for which the table below is complete.
const NONABELIAN_TABLE: &[&str] = &[
    "S(3)",
    "D(8)",
    "Dic(8)",
    "D(10)",
    "A(4)",
    "D(12)",
    "Dic(12)",
    "D(14)",
    "D(20)",
    "Dic(20)",
    "AGL(1,5)",
    "D(22)",
];

fn table() -> &'static [(Fingerprint, &'static str)] {
    static TABLE: OnceLock<Vec<(Fingerprint, &'static str)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        NONABELIAN_TABLE
            .iter()
            .map(|src| (fingerprint(&parse_and_build(src, 1000).expect("table groups build")), *src))
            .collect()
    })
}

/// A label such as `1`, `Z(2) x Z(2)`, `S(3)` or `order-24`.
pub fn label(g: &Group) -> String {
    if g.order() == 1 {
        return "1".into();
    }
    if g.is_abelian() {
        return elementary_divisors(g)
            .iter()
            .map(|q| format!("Z({q})"))
            .collect::<Vec<_>>()
            .join(" x ");
    }
    let fp = fingerprint(g);
    if fp.order == 60 && fp.abelianization.is_empty() {
        // the only perfect group of order 60
        return "A(5)".into();
    }
    let matches: Vec<&str> = table()
        .iter()
        .filter(|(f, _)| *f == fp)
        .map(|(_, name)| *name)
        .collect();
    match matches.as_slice() {
        [name] => (*name).to_string(),
        _ => format!("order-{}", g.order()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(src: &str) -> Group {
        parse_and_build(src, 20_000).unwrap()
    }

    #[test]
    fn table_fingerprints_are_distinct() {
        let t = table();
        for (i, (a, _)) in t.iter().enumerate() {
            for (b, _) in &t[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(label(&g("Z(1)")), "1");
        assert_eq!(label(&g("Z(2) x Z(2)")), "Z(2) x Z(2)");
        assert_eq!(label(&g("Z(12)")), "Z(4) x Z(3)");
        assert_eq!(label(&g("S(3)")), "S(3)");
        assert_eq!(label(&g("D(6)")), "S(3)");
        assert_eq!(label(&g("S(3) x Z(2)")), "D(12)");
        assert_eq!(label(&g("perm[(0 1 2 3), (0 2)]")), "D(8)");
        assert_eq!(label(&g("A(5)")), "A(5)");
        assert_eq!(label(&g("S(4)")), "order-24");
    }
}
