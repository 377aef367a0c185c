use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ops::oracle;
use super::weight::{partitions_of_degree, vp};
use super::*;

fn w(p: u64, nums: &[i64], den: u32) -> Weight {
    Weight::new(p, nums.to_vec(), den)
}

fn labels(ps: &[WeightPartition]) -> Vec<String> {
    ps.iter().map(|p| p.label()).collect()
}

fn random_element(space: DrwSpace, r: u32, i: usize, cap: i64, terms: usize, rng: &mut ChaCha8Rng) -> DrwElement {
    axioms::random_element(space, r, i, cap, terms, rng).unwrap()
}

#[test]
fn weight_enumeration_examples() {
    let ws = enumerate_weights(2, 1, 1, 1, Base::Polynomial).unwrap();
    assert_eq!(ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["(0)", "(1/2)", "(1)"]);
    let ws = enumerate_weights(2, 1, 2, 1, Base::Polynomial).unwrap();
    assert_eq!(ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["(0)", "(1/4)", "(1/2)", "(3/4)", "(1)"]);
    assert_eq!(enumerate_weights(2, 2, 1, 2, Base::Polynomial).unwrap().len(), 25);
    let a = w(2, &[3, 2], 2);
    assert_eq!((a.u(), a.nu(), a.nu_at(1)), (2, Some(-2), Some(-1)));
    assert_eq!(a.scale(1).to_string(), "(3/2, 1)");
}

#[test]
fn partition_examples() {
    let a3 = w(2, &[3], 0);
    assert_eq!(labels(&partitions_pa(&a3, Base::Polynomial)), ["({1})", "(∅, {1})"]);
    let a0 = w(2, &[0], 0);
    assert_eq!(labels(&partitions_pa(&a0, Base::Polynomial)), ["({1})"]);
    assert_eq!(labels(&partitions_pa(&a0, Base::Laurent)), ["({1})", "(∅, {1})"]);
    let mixed = w(2, &[1, 2], 1);
    let with_empty_i0: Vec<_> = partitions_pa(&mixed, Base::Polynomial).into_iter().filter(|p| p.i0().is_empty()).collect();
    assert!(with_empty_i0.iter().all(|p| p.blocks[1][0] == 0));
    // equal valuations may share a boundary
    let ones = w(2, &[1, 1], 0);
    let counts: Vec<usize> = (0..3).map(|i| partitions_of_degree(&ones, Base::Polynomial, i).len()).collect();
    assert_eq!(counts, [1, 2, 1]);
    let p = &partitions_pa(&w(2, &[1, 2], 1), Base::Polynomial)[3];
    assert_eq!((p.rho1(&mixed), p.rho2(&mixed)), (1, 2));
}

#[test]
fn basis_matches_integral_forms_quotient() {
    for (p, k, r, cap) in [(2, 1, 3, 3), (3, 1, 2, 2), (2, 2, 2, 2)] {
        for a in enumerate_weights(p, k, r, cap, Base::Polynomial).unwrap() {
            for i in 0..=k {
                let c = basis_iso_check(&a, Base::Polynomial, i, r).unwrap();
                assert!(c.pass, "{c:?}");
            }
        }
    }
    for a in enumerate_weights(2, 1, 2, 1, Base::Laurent).unwrap() {
        for i in 0..=1 {
            let c = basis_iso_check(&a, Base::Laurent, i, 2).unwrap();
            assert!(c.pass, "{c:?}");
        }
    }
}

#[test]
fn one_variable_example() {
    // W_n(F_p[T]): Z/p^n at integral weights, Z/p^{n-u} elsewhere; nothing above degree 1
    let space = DrwSpace::polynomial(2, 1).unwrap();
    for e in lz_basis(&space, 3, 0, 2).unwrap() {
        assert_eq!(e.coeff_len, 3 - e.weight.u());
    }
    assert!(lz_basis(&space, 3, 2, 2).unwrap().is_empty());
    let (e0, e1) = deligne::one_variable_generators(&w(2, &[3], 2)).unwrap();
    assert_eq!((e0, e1), (vec![4], vec![1]));
    let (e0, e1) = deligne::one_variable_generators(&w(2, &[0], 0)).unwrap();
    assert_eq!((e0, e1), (vec![1], vec![]));
    for (p, n) in [(2, 2), (2, 3), (3, 2)] {
        let rep = one_variable_decomposition(p, n, 3).unwrap();
        assert!(rep.pass, "{:?}", rep.pieces.iter().find(|x| !x.pass));
    }
}

#[test]
fn normalizer_examples() {
    let space = DrwSpace::polynomial(2, 1).unwrap();
    let dvt = drw_normalize(&FreeWittWord::teich(&[1]).v().d(), &space, 2).unwrap();
    assert_eq!(dvt.to_string(), "1·e(1/2)(∅, {1})");
    let fdv = drw_normalize(&parse_word("F d V [T1]", 1).unwrap(), &space, 2).unwrap();
    let dt = drw_normalize(&parse_word("d[T1]", 1).unwrap(), &space, 2).unwrap();
    assert_eq!(fdv, dt);
    assert_eq!(dt.to_string(), "1·e(1)(∅, {1})");
    // d V[x^p] = V[x]^{p-1} d V[x] for p = 2
    let lhs = drw_normalize(&parse_word("d V [T1^2]", 1).unwrap(), &space, 3).unwrap();
    let rhs = drw_normalize(&parse_word("V[T1] * d V [T1]", 1).unwrap(), &space, 3).unwrap();
    assert_eq!(lhs, rhs);
    assert!(!lhs.is_zero());
    // for p = 3 the two sides differ by p^{p-2}
    let s3 = DrwSpace::polynomial(3, 1).unwrap();
    let lhs = drw_normalize(&parse_word("3 * d V [T1^3]", 1).unwrap(), &s3, 3).unwrap();
    let rhs = drw_normalize(&parse_word("V[T1] V[T1] d V [T1]", 1).unwrap(), &s3, 3).unwrap();
    assert_eq!(lhs, rhs);
    let bare = drw_normalize(&parse_word("d V [T1^3]", 1).unwrap(), &s3, 3).unwrap();
    assert_ne!(bare, rhs);
}

#[test]
fn step_cap_is_reported() {
    let space = DrwSpace::polynomial(2, 2).unwrap();
    let word = parse_word("F d V [T1 T2] * d V^2 [T2^3]", 2).unwrap();
    let mut rw = Rewriter::new(3);
    assert!(matches!(word::drw_normalize_with(&word, &space, 3, &mut rw), Err(crate::Error::StepCap(3))));
}

#[test]
fn normalizer_agrees_with_integral_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, k, cap) in [(2u64, 1usize, 3i64), (2, 2, 2), (3, 1, 2)] {
        let space = DrwSpace::polynomial(p, k).unwrap();
        for _ in 0..12 {
            let r = rng.gen_range(2..=3);
            let i = rng.gen_range(0..=k.min(1));
            let x = random_element(space, r, i, cap, 3, &mut rng);
            let y = random_element(space, r, rng.gen_range(0..=k - i), cap, 2, &mut rng);
            for op in [DrwOp::D, DrwOp::F, DrwOp::V, DrwOp::R] {
                assert_eq!(drw_ops(op, &x).unwrap(), oracle::apply(op, &x).unwrap(), "{op:?} on {x}");
            }
            assert_eq!(x.mul(&y).unwrap(), oracle::mul(&x, &y).unwrap(), "{x} * {y}");
        }
    }
}

#[test]
fn degree_zero_is_the_witt_ring() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let space = DrwSpace::polynomial(2, 2).unwrap();
    for _ in 0..10 {
        let x = random_element(space, 3, 0, 2, 3, &mut rng);
        let y = random_element(space, 3, 0, 2, 3, &mut rng);
        let (wx, wy) = (to_witt(&x).unwrap(), to_witt(&y).unwrap());
        assert_eq!(to_witt(&x.mul(&y).unwrap()).unwrap(), wx.mul(&wy).unwrap());
        assert_eq!(to_witt(&x.add(&y).unwrap()).unwrap(), wx.add(&wy).unwrap());
        assert_eq!(to_witt(&x.frobenius().unwrap()).unwrap(), wx.frobenius().unwrap());
        assert_eq!(to_witt(&x.restriction().unwrap()).unwrap(), wx.restriction().unwrap());
        let vx = x.restriction().unwrap().verschiebung().unwrap();
        assert_eq!(to_witt(&vx).unwrap(), wx.restriction().unwrap().verschiebung());
    }
}

#[test]
fn cycles_and_boundaries_one_variable() {
    let space = DrwSpace::polynomial(2, 1).unwrap();
    let cb = cycles_boundaries(&space, 3, 8).unwrap();
    assert!(cb.iter().all(|c| c.cartier_consistent));
    // in degree 1, B_n at weight c is nonzero exactly when c is not divisible by p^n
    for c in cb.iter().filter(|c| c.degree == 1) {
        let v = vp(c.weight.numerators()[0], 2);
        for n in 1..=3u32 {
            assert_eq!(c.boundaries[n as usize - 1] == 1, c.weight.numerators()[0] != 0 && v < n, "{c:?}");
        }
    }
    let total = |deg: usize, f: &dyn Fn(&cartier::CyclesBoundaries) -> u32| cb.iter().filter(|c| c.degree == deg).map(f).sum::<u32>();
    let b: Vec<u32> = (0..3).map(|n| total(1, &|c| c.boundaries[n])).collect();
    let z: Vec<u32> = (0..3).map(|n| total(0, &|c| c.cycles[n])).collect();
    assert!(b.windows(2).all(|x| x[0] < x[1]), "{b:?}");
    assert!(z.windows(2).all(|x| x[0] > x[1]), "{z:?}");
}

#[test]
fn cartier_classical_and_higher() {
    for (p, k, n, cap) in [(2u64, 1usize, 1u32, 6i64), (3, 1, 1, 4), (2, 2, 1, 3), (2, 1, 2, 4)] {
        let space = DrwSpace::polynomial(p, k).unwrap();
        let rep = higher_cartier_check(&space, n, cap).unwrap();
        assert!(rep.pass, "{:?}", rep.weights.iter().filter(|w| !w.pass).collect::<Vec<_>>());
        assert!(rep.weights.iter().any(|w| w.cohomology_length > 0));
    }
}

#[test]
fn filtration_kernels_and_graded_pieces() {
    let space = DrwSpace::polynomial(2, 1).unwrap();
    let rep = filtration_check(&space, 2, 4).unwrap();
    assert!(rep.pass, "{:?} {:?}", rep.kernels.iter().filter(|w| !w.equal).collect::<Vec<_>>(), rep.graded.iter().filter(|g| !g.equal).collect::<Vec<_>>());
    assert!(rep.kernels.iter().any(|w| w.kernel_length > 0));
    let rep = filtration_check(&DrwSpace::polynomial(3, 2).unwrap(), 2, 2).unwrap();
    assert!(rep.pass);
}

#[test]
fn axiom_suite_small() {
    for (p, k) in [(2u64, 2usize), (3, 1)] {
        let rep = axiom_suite(&DrwSpace::polynomial(p, k).unwrap(), 3, 1, 60, 11, 5).unwrap();
        let bad: Vec<_> = rep.axioms.iter().filter(|a| a.failures > 0 || a.checked == 0).collect();
        assert!(rep.pass, "{bad:?}");
    }
}
