use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::Zpn;
use crate::drw::Weight;
use crate::prism::PrismModel;

#[test]
fn one_variable_backend() {
    let b = crystalline_backend(2, 1, 2, 8).unwrap();
    assert!(b.complex.dd_zero());
    for e in &b.entries {
        let m = e.weight[0];
        let h0 = &e.cohomology[0].invariants;
        let h1 = &e.cohomology[1].invariants;
        if m == 0 {
            assert_eq!((h0.as_slice(), h1.as_slice()), (&[2u32][..], &[][..]));
        } else {
            let v = m.trailing_zeros().min(2);
            let expect: Vec<u32> = if v == 0 { vec![] } else { vec![v] };
            assert_eq!(h1, &expect, "weight {m}");
            assert_eq!(h0, &expect, "weight {m}");
        }
    }
    assert!(b.entries.iter().all(|e| e.cohomology.len() == 2));
}

#[test]
fn two_variable_backend_squares_to_zero() {
    let b = crystalline_backend(3, 2, 2, 5).unwrap();
    assert!(b.complex.dd_zero());
    // weight (3, 3): T1^3 T2^3 and its derivatives
    let e = b.entries.iter().find(|e| e.weight == [3, 3]).unwrap();
    assert_eq!(e.cohomology[2].invariants, vec![1]);
}

#[test]
fn crystalline_summands_and_twists() {
    let model = PrismModel::crystalline(2).unwrap();
    let t = target_decomposition(&model, 2, 1, 1, 2).unwrap();
    assert_eq!(t.torsion_at(&Weight::new(2, vec![1], 1)), vec![1]);
    assert_eq!(t.torsion_at(&Weight::new(2, vec![2], 0)), vec![2]);
    assert!(t.summands.iter().all(|s| s.generator == if s.level == 2 { "4" } else { "2" }));
    let map = comparison_map_build(&model, 2, 1, 1, 2).unwrap();
    let fp = model.ring_mod_d().unwrap();
    // V(x) ↦ 2 x̃ in Z/4
    let img = map.apply(1, &crate::WittVector::from_integer(&fp, 1, 1).unwrap()).unwrap();
    assert_eq!(img.value.as_integer().unwrap(), 2.into());
    let img = map.apply(0, &crate::WittVector::from_integer(&fp, 2, 3).unwrap()).unwrap();
    assert_eq!(img.value.as_integer().unwrap(), 3.into());
    let checks = map.check(0, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
}

#[test]
fn q_de_rham_map_is_injective_on_samples() {
    let model = PrismModel::q_de_rham(2).unwrap();
    let map = comparison_map_build(&model, 2, 1, 0, 2).unwrap();
    let checks = map.check(6, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    assert!(checks.iter().all(|c| c.pass && c.onto_torsion.is_none()), "{checks:?}");
    assert!(target_decomposition(&PrismModel::charp_perfect(2, 2).unwrap(), 2, 1, 0, 2).is_err());
}

#[test]
fn crystalline_comparison_small() {
    for (p, vars, n, cap) in [(2u64, 1usize, 1u32, 4i64), (2, 1, 2, 4), (3, 1, 2, 2), (2, 2, 2, 2)] {
        let rep = compare_crystalline(p, vars, n, cap).unwrap();
        let bad: Vec<_> = rep.entries.iter().filter(|e| !e.iso).collect();
        assert!(rep.pass, "{bad:?} {:?}", rep.acyclic.iter().filter(|a| !a.acyclic).collect::<Vec<_>>());
        assert!(rep.entries.iter().any(|e| e.rhs_rank > 0 && e.degree == 1));
    }
}

#[test]
fn base_change_examples() {
    // free cohomology over Z/4 reduces to Z/2
    let zr = Zpn::new(2, 2).unwrap();
    let c = base_change::torsion_complex(zr, 0).unwrap();
    let r = base_change_check(&c, 1).unwrap();
    assert!(r.hypothesis && r.conclusion);
    let bad = base_change_check(&base_change::torsion_complex(zr, 1).unwrap(), 1).unwrap();
    assert!(bad.not_applicable && !bad.conclusion);
    assert_eq!(bad.degrees[0].tor_length, 1);
    let suite = base_change_suite(20, 9).unwrap();
    assert!(suite.pass, "{:?}", suite.reports.iter().filter(|r| !r.conclusion).collect::<Vec<_>>());
}
