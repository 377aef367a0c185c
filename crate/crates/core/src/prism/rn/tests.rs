use super::*;
use crate::prism::checks::*;
use crate::prism::PrismModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cris_witt(p: u64, v: &[i64]) -> (PrismModel, WittVector) {
    let m = PrismModel::crystalline(p).unwrap();
    let w = WittVector::from_ints(&m.ring_mod_d().unwrap(), v).unwrap();
    (m, w)
}

#[test]
fn crystalline_example_value() {
    let (m, x) = cris_witt(2, &[1, 1]);
    let r = m.universal_map_rn(&x, Precision::for_level(2, 2)).unwrap();
    assert_eq!(r.value.as_integer().unwrap(), BigInt::from(3));
    assert_eq!(r.precision, 2);
}

#[test]
fn crystalline_rn_is_bijective_small() {
    for (p, n) in [(2u64, 2usize), (2, 3), (3, 2)] {
        let m = PrismModel::crystalline(p).unwrap();
        let fp = m.ring_mod_d().unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let total = p.pow(n as u32);
        for k in 0..total {
            let digits: Vec<i64> = (0..n).map(|i| ((k / p.pow(i as u32)) % p) as i64).collect();
            let x = WittVector::from_ints(&fp, &digits).unwrap();
            let v = m.rn_closed_form(&x).unwrap().value.as_integer().unwrap();
            seen.insert(v);
        }
        assert_eq!(seen.len() as u64, total);
    }
}

#[test]
fn crystalline_embedding_matches_closed_form() {
    // the last component of the embedding is g_0 = x_0 mod p, the first is g_{n-1} mod p
    let (m, x) = cris_witt(3, &[2, 1]);
    let emb = m.rn_product_embedding(&x).unwrap();
    let r = m.rn_closed_form(&x).unwrap().value.as_integer().unwrap();
    assert_eq!(emb[0].as_integer().unwrap(), num_integer::Integer::mod_floor(&r, &BigInt::from(3)));
    assert_eq!(emb[1].as_integer().unwrap(), BigInt::from(2));
}

#[test]
fn q_de_rham_embedding_of_teichmuller_q() {
    // V^j[q] in W_2(Z[q]/[2]_q): component i is p^j q^{p^{n-1-j}} for i <= n-1-j, else 0
    let m = PrismModel::q_de_rham(2).unwrap();
    let rd = m.ring_mod_d().unwrap();
    let q = RingElement::var(&rd, "q").unwrap();
    let t = WittVector::teichmuller(&q, 2);
    let emb = m.rn_product_embedding(&t).unwrap();
    let qa = RingElement::var(m.ring(), "q").unwrap();
    for (i, c) in emb.iter().enumerate() {
        assert_eq!(c, &qa.pow(2).coerce(c.ring()).unwrap(), "component {i}");
    }
    let v = WittVector::teichmuller(&q, 1).verschiebung();
    let emb = m.rn_product_embedding(&v).unwrap();
    assert_eq!(emb[0], qa.scale_int(&BigInt::from(2)).coerce(emb[0].ring()).unwrap());
    assert!(emb[1].is_zero());
}

#[test]
fn q_de_rham_rn_of_one_and_v_one() {
    let m = PrismModel::q_de_rham(2).unwrap();
    let rd = m.ring_mod_d().unwrap();
    let one = WittVector::one(&rd, 2);
    let r = m.universal_map_rn(&one, Precision::for_level(2, 2)).unwrap();
    assert!(r.value.is_one());
    assert!(r.precision >= 2);
    // V(1) maps to [2]_q * u; at q = 1 this is 2
    let v = WittVector::one(&rd, 1).verschiebung();
    let r = m.universal_map_rn(&v, Precision::for_level(2, 2)).unwrap();
    let at1 = r.value.lift_into(m.ring()).unwrap().eval_var_at_one("q").unwrap().as_integer().unwrap();
    assert_eq!(num_integer::Integer::mod_floor(&at1, &BigInt::from(4)), BigInt::from(2));
}

#[test]
fn q_de_rham_rn_is_additive_and_multiplicative_on_samples() {
    let m = PrismModel::q_de_rham(2).unwrap();
    let prec = Precision::for_level(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let x = m.random_witt(2, &mut rng).unwrap();
        let y = m.random_witt(2, &mut rng).unwrap();
        let (rx, ry) = (m.universal_map_rn(&x, prec).unwrap(), m.universal_map_rn(&y, prec).unwrap());
        let rs = m.universal_map_rn(&x.add(&y).unwrap(), prec).unwrap();
        let rp = m.universal_map_rn(&x.mul(&y).unwrap(), prec).unwrap();
        let pr = rx.precision.min(ry.precision);
        let ring = project(&m.d_n(2).unwrap(), pr).unwrap();
        let sum = rx.value.lift_into(&ring).unwrap().try_add(&ry.value.lift_into(&ring).unwrap()).unwrap();
        let prod = rx.value.lift_into(&ring).unwrap().try_mul(&ry.value.lift_into(&ring).unwrap()).unwrap();
        assert_eq!(rs.value.lift_into(&ring).unwrap(), sum);
        assert_eq!(rp.value.lift_into(&ring).unwrap(), prod);
    }
}

#[test]
fn charp_route_agrees_with_closed_form() {
    let m = PrismModel::charp_perfect(2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for _ in 0..10 {
            let x = m.random_witt(n, &mut rng).unwrap();
            let a = m.universal_map_rn(&x, Precision::for_level(2, n as u32)).unwrap();
            let b = m.rn_closed_form(&x).unwrap();
            assert!(agree_mod(&a, &b).unwrap());
            assert_eq!(a.route, "perfect-inverse");
        }
    }
}

#[test]
fn lambda_square_unit_is_one_for_crystalline_and_q_de_rham() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for preset in [Preset::Crystalline, Preset::QDeRham] {
        let m = PrismModel::from_preset(preset, 2).unwrap();
        for r in 1..=2 {
            let rep = m.lambda_square_check(r, 12, &mut rng).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert_eq!(rep.unit, "1");
        }
    }
}

#[test]
fn specialization_to_crystalline() {
    let m = PrismModel::q_de_rham(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    assert_eq!(m.specialization_square(2, 10, &mut rng).unwrap(), 10);
}

#[test]
fn universal_preset_has_no_rn_strategy() {
    let m = PrismModel::universal(2, 1, 0).unwrap();
    let x = WittVector::one(&m.ring_mod_d().unwrap(), 1);
    assert!(matches!(m.universal_map_rn(&x, Precision::for_level(2, 1)), Err(Error::Unsupported(_))));
}

#[test]
fn property_checks() {
    for (p, n) in [(2u64, 1usize), (2, 3), (3, 2)] {
        for j in 0..n {
            let c = embedding_formula_check(p, n, j).unwrap();
            assert!(c.pass, "{c:?}");
        }
        assert!(crystalline_bijection_check(p, n).unwrap().pass);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cris = PrismModel::crystalline(3).unwrap();
    let h = rn_hom_check(&cris, 2, None, &mut rng).unwrap();
    assert!(h.pass && h.pairs == 81);
    let q = PrismModel::q_de_rham(2).unwrap();
    assert!(rn_hom_check(&q, 2, Some(5), &mut rng).unwrap().pass);
}
