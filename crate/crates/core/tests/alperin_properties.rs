use fusionscope_core::alperin::{admissible_objects, alperin_decompose, verify_factorization};
use fusionscope_core::arith::prime_divisors;
use fusionscope_core::catalog::{catalog_groups, parse_and_build};
use fusionscope_core::FusionSystem;

#[test]
fn every_morphism_into_s_factors_for_catalog_systems() {
    let mut total = 0;
    for (name, grp) in catalog_groups(200) {
        for p in prime_divisors(grp.order() as u64) {
            let f = FusionSystem::new(&grp, p).unwrap();
            if f.sylow().order() > 64 {
                continue;
            }
            let admissible = admissible_objects(&f);
            let s = f.sylow_object();
            for a in 0..f.objects().len() {
                for m in f.hom(a, s) {
                    let fac = alperin_decompose(&f, &m).unwrap_or_else(|e| panic!("{name} at {p}: {e}"));
                    assert!(verify_factorization(&f, &fac), "{name} at {p}");
                    assert!(fac.steps.iter().all(|st| admissible.contains(&st.subgroup)));
                    total += 1;
                }
            }
        }
    }
    assert!(total > 1000, "{total}");
}

#[test]
fn sigma4_every_morphism_factors() {
    let s4 = parse_and_build("S(4)", 1000).unwrap();
    let f = FusionSystem::new(&s4, 2).unwrap();
    let n = f.objects().len();
    let mut count = 0;
    for a in 0..n {
        for b in 0..n {
            for m in f.hom(a, b) {
                let fac = alperin_decompose(&f, &m).unwrap();
                assert!(verify_factorization(&f, &fac));
                // an S-automorphism followed by one essential step suffices here
                assert!(fac.steps.len() <= 2);
                count += 1;
            }
        }
    }
    let expected: usize = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| {
            s4.transporter(f.object(a), f.object(b)).unwrap().len() / s4.centralizer(f.object(a)).unwrap().order()
        })
        .sum();
    assert_eq!(count, expected);
}

#[test]
fn factorizations_are_deterministic() {
    let s4 = parse_and_build("S(4) x Z(3)", 1000).unwrap();
    let f = FusionSystem::new(&s4, 2).unwrap();
    let s = f.sylow_object();
    for a in 0..f.objects().len() {
        for m in f.hom(a, s) {
            assert_eq!(alperin_decompose(&f, &m).unwrap(), alperin_decompose(&f, &m).unwrap());
        }
    }
}
