//! Primary components and torsion coefficients of finite abelian groups.
//!
//! The multiplicities `n_k` of `Z/p^k` in the p-primary part are recovered
//! from element-order counts alone: with `a_j = log_p |{x : x^{p^j} = 1}|`,
//! `n_j = (a_j − a_{j−1}) − (a_{j+1} − a_j)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::arith::{is_power_of, log_exact};
use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};

/// Multiplicities `k ↦ n_k` of the cyclic factors `Z/p^k` of the p-primary
/// component. Only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionProfile {
    pub p: u64,
    pub multiplicities: BTreeMap<u32, u32>,
}

impl TorsionProfile {
    /// Cyclic orders in ascending order, e.g. `[2, 2, 2, 4]`.
    pub fn tuple(&self) -> Vec<u64> {
        self.multiplicities
            .iter()
            .flat_map(|(&k, &n)| std::iter::repeat_n(self.p.pow(k), n as usize))
            .collect()
    }

    /// Number of cyclic factors, i.e. the F_p-dimension of `A ⊗ Z/p`.
    pub fn rank(&self) -> u32 {
        self.multiplicities.values().sum()
    }

    /// `log_p` of the order of the p-primary component.
    pub fn exponent_sum(&self) -> u32 {
        self.multiplicities.iter().map(|(k, n)| k * n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    /// Pointwise sum, the profile of a direct sum.
    pub fn sum(&self, other: &TorsionProfile) -> TorsionProfile {
        assert_eq!(self.p, other.p);
        let mut multiplicities = self.multiplicities.clone();
        for (&k, &n) in &other.multiplicities {
            *multiplicities.entry(k).or_default() += n;
        }
        TorsionProfile {
            p: self.p,
            multiplicities,
        }
    }
}

impl fmt::Display for TorsionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tuple().iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `{"p": p, "n": {"1": n₁, …}}`
impl Serialize for TorsionProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Counts<'a>(&'a BTreeMap<u32, u32>);
        impl Serialize for Counts<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (k, n) in self.0 {
                    map.serialize_entry(&k.to_string(), n)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("p", &self.p)?;
        map.serialize_entry("n", &Counts(&self.multiplicities))?;
        map.end()
    }
}

fn require_abelian(a: &Group) -> Result<()> {
    if a.is_abelian() {
        Ok(())
    } else {
        Err(Error::NotAbelian)
    }
}

/// The elements of p-power order.
pub fn primary_component(a: &Group, p: u64) -> Result<Subgroup> {
    require_abelian(a)?;
    let members = (0..a.order() as u32)
        .filter(|&x| is_power_of(a.element_order(x) as u64, p))
        .collect();
    a.subgroup_from_members(members)
}

/// `a_0, a_1, …` up to the first index where the sequence stabilizes.
pub fn counting_sequence(a: &Group, p: u64) -> Result<Vec<u32>> {
    require_abelian(a)?;
    let mut exponents: Vec<u32> = (0..a.order() as u32)
        .filter_map(|x| log_exact(a.element_order(x) as u64, p))
        .collect();
    exponents.sort_unstable();
    let top = exponents.last().copied().unwrap_or(0);
    (0..=top + 1)
        .map(|j| {
            let count = exponents.partition_point(|&e| e <= j) as u64;
            log_exact(count, p).ok_or_else(|| {
                Error::CriteriaDisagree(format!("{count} elements of exponent ≤ {j} is not a power of {p}"))
            })
        })
        .collect()
}

pub fn torsion_profile(a: &Group, p: u64) -> Result<TorsionProfile> {
    let seq = counting_sequence(a, p)?;
    let mut multiplicities = BTreeMap::new();
    for j in 1..seq.len() - 1 {
        let step_here = seq[j] - seq[j - 1];
        let step_next = seq[j + 1] - seq[j];
        let n = step_here - step_next;
        if n > 0 {
            multiplicities.insert(j as u32, n);
        }
    }
    Ok(TorsionProfile { p, multiplicities })
}

pub fn abelian_p_equivalent(a: &Group, b: &Group, p: u64) -> Result<bool> {
    Ok(torsion_profile(a, p)? == torsion_profile(b, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_and_build;
    use proptest::prelude::*;

    fn g(src: &str) -> Group {
        parse_and_build(src, 20_000).unwrap()
    }

    /// Independent route: decompose by repeatedly splitting off a cyclic
    /// subgroup of maximal order that meets the rest trivially, found by
    /// exhaustive search over subgroups.
    fn brute_force_profile(a: &Group, p: u64) -> Vec<u64> {
        let primary = primary_component(a, p).unwrap();
        let subs = a.all_subgroups(&primary, 4096).unwrap();
        let mut remaining = primary.clone();
        let mut out = Vec::new();
        while !remaining.is_trivial() {
            // a cyclic factor of maximal order with a complement inside `remaining`
            let x = remaining
                .members()
                .iter()
                .copied()
                .max_by_key(|&x| (a.element_order(x), std::cmp::Reverse(x)))
                .unwrap();
            let c = a.cyclic(x);
            let complement = subs
                .iter()
                .filter(|k| k.is_subgroup_of(&remaining))
                .find(|k| {
                    k.order() * c.order() == remaining.order()
                        && a.intersection(k, &c).unwrap().is_trivial()
                })
                .expect("cyclic subgroups of maximal order are direct factors")
                .clone();
            out.push(c.order() as u64);
            remaining = complement;
        }
        out.sort();
        out
    }

    #[test]
    fn counting_formula_matches_brute_force_decomposition() {
        for src in [
            "Z(2) x Z(2) x Z(2) x Z(12)",
            "Z(4) x Z(8) x Z(2)",
            "Z(9) x Z(3) x Z(3)",
            "Z(12)",
            "Z(16) x Z(4) x Z(4)",
            "Z(27) x Z(9)",
            "Z(1)",
        ] {
            let a = g(src);
            for p in [2, 3, 5] {
                assert_eq!(
                    torsion_profile(&a, p).unwrap().tuple(),
                    brute_force_profile(&a, p),
                    "{src} at {p}"
                );
            }
        }
    }

    #[test]
    fn worked_tuple() {
        let a = g("Z(2) x Z(2) x Z(2) x Z(12)");
        let profile = torsion_profile(&a, 2).unwrap();
        assert_eq!(profile.tuple(), vec![2, 2, 2, 4]);
        assert_eq!(profile.multiplicities, BTreeMap::from([(1, 3), (2, 1)]));
        assert_eq!(profile.to_string(), "(2,2,2,4)");
        assert_eq!(
            serde_json::to_string(&profile).unwrap(),
            r#"{"p":2,"n":{"1":3,"2":1}}"#
        );
    }

    #[test]
    fn profile_examples() {
        assert!(torsion_profile(&g("Z(1)"), 2).unwrap().is_empty());
        let z12 = torsion_profile(&g("Z(12)"), 3).unwrap();
        assert_eq!(z12.multiplicities, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn primary_components() {
        let a = g("Z(2) x Z(3)");
        assert_eq!(primary_component(&a, 2).unwrap().order(), 2);
        assert_eq!(primary_component(&a, 5).unwrap().order(), 1);
        let b = g("Z(4) x Z(2)");
        assert_eq!(primary_component(&b, 2).unwrap(), b.whole());
        assert_eq!(primary_component(&g("S(3)"), 2), Err(Error::NotAbelian));
    }

    #[test]
    fn local_equivalence_examples() {
        let (a, b) = (g("Z(2)"), g("Z(2) x Z(3)"));
        assert!(abelian_p_equivalent(&a, &b, 2).unwrap());
        assert!(!abelian_p_equivalent(&a, &b, 3).unwrap());
        assert!(abelian_p_equivalent(&b, &b, 7).unwrap());
        assert_eq!(abelian_p_equivalent(&a, &g("S(3)"), 2), Err(Error::NotAbelian));
    }

    #[test]
    fn counting_sequence_is_concave_and_stabilizes() {
        let a = g("Z(8) x Z(4) x Z(2) x Z(2)");
        let seq = counting_sequence(&a, 2).unwrap();
        assert_eq!(seq, vec![0, 4, 6, 7, 7]);
        let steps: Vec<u32> = seq.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.windows(2).all(|w| w[0] >= w[1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn profile_of_direct_sum_is_pointwise_sum(
            xs in proptest::collection::vec(1u64..=12, 1..3),
            ys in proptest::collection::vec(1u64..=12, 1..3),
            p in prop_oneof![Just(2u64), Just(3u64)],
        ) {
            let expr = |v: &[u64]| v.iter().map(|n| format!("Z({n})")).collect::<Vec<_>>().join(" x ");
            let a = g(&expr(&xs));
            let b = g(&expr(&ys));
            let ab = g(&format!("{} x {}", expr(&xs), expr(&ys)));
            let lhs = torsion_profile(&ab, p).unwrap();
            let rhs = torsion_profile(&a, p).unwrap().sum(&torsion_profile(&b, p).unwrap());
            prop_assert_eq!(lhs, rhs);
            let seq = counting_sequence(&ab, p).unwrap();
            prop_assert!(seq.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(*seq.last().unwrap(), torsion_profile(&ab, p).unwrap().exponent_sum());
        }
    }
}
