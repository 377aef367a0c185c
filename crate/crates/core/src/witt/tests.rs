use super::*;
use proptest::prelude::*;

fn zz(p: u64) -> Ring {
    RingDescriptor::integers(p).compile().unwrap()
}

fn zmod(p: u64, m: i64) -> Ring {
    RingDescriptor::integers_mod(p, m).compile().unwrap()
}

fn ints(ring: &Ring, v: &[i64]) -> WittVector {
    WittVector::from_ints(ring, v).unwrap()
}

// lift to W(Z), operate on ghost components, invert, reduce
fn ghost_oracle(x: &WittVector, y: &WittVector, mul: bool) -> WittVector {
    let z = zz(x.p);
    let lift = |w: &WittVector| w.map_coords(|c| Ok(RingElement::constant(&z, c.as_integer().unwrap()))).unwrap();
    let (gx, gy) = (lift(x).ghost(), lift(y).ghost());
    let g: Vec<RingElement> = gx.iter().zip(&gy).map(|(a, b)| if mul { a * b } else { a + b }).collect();
    witt_from_ghost(x.p, &g).unwrap().map_coords(|c| c.coerce(x.ring())).unwrap()
}

fn all_vectors(ring: &Ring, m: i64, n: usize) -> Vec<WittVector> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i64>| (0..m).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out.iter().map(|v| ints(ring, v)).collect()
}

#[test]
fn ghost_of_verschiebung_one() {
    let z = zz(3);
    let v1 = WittVector::one(&z, 2).verschiebung();
    let g: Vec<BigInt> = v1.ghost().iter().map(|c| c.as_integer().unwrap()).collect();
    assert_eq!(g, vec![0.into(), 3.into(), 3.into()]);
    let v2 = WittVector::one(&z, 1).verschiebung().verschiebung().verschiebung();
    let g: Vec<BigInt> = v2.ghost().iter().map(|c| c.as_integer().unwrap()).collect();
    assert_eq!(g, vec![0.into(), 0.into(), 0.into(), 27.into()]);
    assert_eq!(witt_from_ghost(3, &v1.ghost()).unwrap(), v1);
}

#[test]
fn ghost_of_teichmuller() {
    let r = RingDescriptor::poly(RingDescriptor::integers(2), &["x"]).compile().unwrap();
    let x = RingElement::var(&r, "x").unwrap();
    let t = WittVector::teichmuller(&x, 3);
    assert_eq!(t.ghost(), vec![x.clone(), x.pow(2), x.pow(4)]);
    assert_eq!(witt_from_ghost(2, &t.ghost()).unwrap(), t);
}

#[test]
fn teichmuller_is_multiplicative() {
    let r = RingDescriptor::poly(RingDescriptor::prime_field(3), &["a", "b"]).compile().unwrap();
    let a = RingElement::var(&r, "a").unwrap();
    let b = RingElement::var(&r, "b").unwrap();
    let lhs = WittVector::teichmuller(&a, 2).mul(&WittVector::teichmuller(&b, 2)).unwrap();
    assert_eq!(lhs, WittVector::teichmuller(&(&a * &b), 2));
    let zero = WittVector::zero(&r, 2);
    assert_eq!(lhs.add(&zero).unwrap(), lhs);
}

#[test]
fn w3_f2_products_match_ghost_oracle() {
    let f2 = zmod(2, 2);
    let all = all_vectors(&f2, 2, 3);
    for x in &all {
        for y in &all {
            assert_eq!(x.mul(y).unwrap(), ghost_oracle(x, y, true));
            assert_eq!(x.add(y).unwrap(), ghost_oracle(x, y, false));
        }
    }
}

#[test]
fn w2_fp_is_z_mod_p_squared() {
    // W_2(F_p) is cyclic of order p^2 generated by 1
    for p in [2u64, 3] {
        let fp = zmod(p, p as i64);
        let one = WittVector::one(&fp, 2);
        let mut acc = WittVector::zero(&fp, 2);
        for k in 1..=(p * p) {
            acc = acc.add(&one).unwrap();
            assert_eq!(acc.is_zero(), k == p * p);
        }
    }
}

#[test]
fn frobenius_on_length_two() {
    let r = RingDescriptor::poly(RingDescriptor::integers(3), &["a", "b"]).compile().unwrap();
    let a = RingElement::var(&r, "a").unwrap();
    let b = RingElement::var(&r, "b").unwrap();
    let f = WittVector::new(3, vec![a.clone(), b.clone()]).unwrap().frobenius().unwrap();
    assert_eq!(f.coords()[0], &a.pow(3) + &b.scale_int(&3.into()));
}

#[test]
fn integer_images_and_negation() {
    let z8 = zmod(2, 8);
    let m = WittVector::from_integer(&z8, 3, 5).unwrap();
    let minus = WittVector::from_integer(&z8, 3, -5).unwrap();
    assert!(m.add(&minus).unwrap().is_zero());
    assert_eq!(m.neg().unwrap(), minus);
}

#[test]
fn short_vectors_refuse_f_and_r() {
    let z = zz(2);
    let x = WittVector::one(&z, 1);
    assert!(x.frobenius().is_err());
    assert!(x.restriction().is_err());
}

#[test]
fn json_roundtrip() {
    let z8 = zmod(2, 8);
    let x = ints(&z8, &[3, 5, 7]);
    assert_eq!(WittVector::from_json(&x.to_json()).unwrap(), x);
}

#[test]
fn ring_axioms_exhaustive_small() {
    for (p, n) in [(2u64, 2usize), (3, 2), (2, 3)] {
        let fp = zmod(p, p as i64);
        let all = all_vectors(&fp, p as i64, n);
        let prods: Vec<Vec<WittVector>> = all.iter().map(|x| all.iter().map(|y| x.mul(y).unwrap()).collect()).collect();
        let sums: Vec<Vec<WittVector>> = all.iter().map(|x| all.iter().map(|y| x.add(y).unwrap()).collect()).collect();
        let idx = |w: &WittVector| all.iter().position(|v| v == w).unwrap();
        for i in 0..all.len() {
            for j in 0..all.len() {
                assert_eq!(prods[i][j], prods[j][i]);
                assert_eq!(sums[i][j], sums[j][i]);
                for k in 0..all.len() {
                    assert_eq!(prods[idx(&prods[i][j])][k], prods[i][idx(&prods[j][k])]);
                    assert_eq!(sums[idx(&sums[i][j])][k], sums[i][idx(&sums[j][k])]);
                    assert_eq!(prods[i][idx(&sums[j][k])], sums[idx(&prods[i][j])][idx(&prods[i][k])]);
                }
            }
        }
    }
}

fn arb_z8(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..8, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fv_is_p_and_vf_is_v1(a in arb_z8(3)) {
        let z8 = zmod(2, 8);
        let x = ints(&z8, &a);
        prop_assert_eq!(x.verschiebung().frobenius().unwrap(), x.scale_int(2).unwrap());
        let v1 = WittVector::one(&z8, 2).verschiebung();
        let vf = x.frobenius().unwrap().verschiebung();
        prop_assert_eq!(vf, v1.mul(&x).unwrap());
    }

    #[test]
    fn projection_formula_and_frobenius_hom(a in arb_z8(3), b in arb_z8(3), c in arb_z8(2)) {
        let z8 = zmod(2, 8);
        let x = ints(&z8, &a[..2]);
        let x3 = ints(&z8, &a);
        let y3 = ints(&z8, &b);
        let y = ints(&z8, &c);
        // V(F(x3) y) = x3 V(y)
        let lhs = x3.frobenius().unwrap().mul(&y).unwrap().verschiebung();
        prop_assert_eq!(lhs, x3.mul(&y.verschiebung()).unwrap());
        let f = |w: &WittVector| w.frobenius().unwrap();
        prop_assert_eq!(f(&x3.mul(&y3).unwrap()), f(&x3).mul(&f(&y3)).unwrap());
        prop_assert_eq!(f(&x3.add(&y3).unwrap()), f(&x3).add(&f(&y3)).unwrap());
        // R commutes with F and V
        prop_assert_eq!(f(&x3).restriction().unwrap(), f(&x3.restriction().unwrap()));
        prop_assert_eq!(x.verschiebung().restriction().unwrap(), x.restriction().unwrap().verschiebung());
    }

    #[test]
    fn ghost_is_a_ring_map_over_z(a in prop::collection::vec(-20i64..20, 3), b in prop::collection::vec(-20i64..20, 3)) {
        let z = zz(2);
        let (x, y) = (ints(&z, &a), ints(&z, &b));
        let gx = x.ghost();
        let gy = y.ghost();
        let gp: Vec<RingElement> = gx.iter().zip(&gy).map(|(s, t)| s * t).collect();
        prop_assert_eq!(x.mul(&y).unwrap().ghost(), gp);
        prop_assert_eq!(witt_from_ghost(2, &x.ghost()).unwrap(), x);
    }
}
