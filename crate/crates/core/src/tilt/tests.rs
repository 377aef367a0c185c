use super::limit::cyclotomic_residue_sequence;
use super::perfectoid::PerfectoidSource;
use super::*;

fn half_powers(m: &TiltModel, k: i64, den: u32) -> AinfElem {
    m.monomial(Exp::new(k, den, m.p), 1).unwrap()
}

#[test]
fn theta_on_teichmuller_charp() {
    let m = TiltModel::charp(2, 3, 4).unwrap();
    let x = half_powers(&m, 3, 1);
    let t = match &x {
        AinfElem::Witt(w) => w.coords()[0].clone(),
        _ => unreachable!(),
    };
    for r in 1..=3 {
        assert_eq!(m.theta(&x, r).unwrap(), WittVector::teichmuller(&t, r));
        let root = t.scale_exponents(-(r as i32)).unwrap();
        assert_eq!(m.theta_tilde(&x, r).unwrap(), WittVector::teichmuller(&root, r));
    }
}

#[test]
fn theta_on_teichmuller_cyclo() {
    // θ_r(q^{1/2}) = [ζ_2] = [-1]
    let m = TiltModel::cyclo(2, 1, 2).unwrap();
    let x = half_powers(&m, 1, 1);
    let minus_one = RingElement::from_int(m.target(), -1);
    for r in 1..=3 {
        assert_eq!(m.theta(&x, r).unwrap(), WittVector::teichmuller(&minus_one, r));
    }
}

#[test]
fn theta_one_of_a_sum_charp() {
    let m = TiltModel::charp(2, 3, 3).unwrap();
    let (x, y) = (half_powers(&m, 1, 3), half_powers(&m, 5, 2));
    let s = m.add(&x, &y).unwrap();
    let sum = m.theta(&x, 1).unwrap().coords()[0].try_add(&m.theta(&y, 1).unwrap().coords()[0]).unwrap();
    assert_eq!(m.theta(&s, 1).unwrap().coords()[0], sum);
}

#[test]
fn theta_is_multiplicative_and_factors_through_frobenius() {
    for m in [TiltModel::charp(2, 2, 3).unwrap(), TiltModel::cyclo(2, 1, 2).unwrap()] {
        let sample = m.generating_sample(1, 6, 9).unwrap();
        for (i, x) in sample.iter().enumerate().take(8) {
            let y = &sample[sample.len() - 1 - i];
            let xy = m.mul(x, y).unwrap();
            for r in 1..=2 {
                let lhs = m.theta(&xy, r).unwrap();
                assert_eq!(lhs, m.theta(x, r).unwrap().mul(&m.theta(y, r).unwrap()).unwrap());
                let sum = m.theta(&m.add(x, y).unwrap(), r).unwrap();
                assert_eq!(sum, m.theta(x, r).unwrap().add(&m.theta(y, r).unwrap()).unwrap());
                assert_eq!(m.theta(x, r).unwrap(), m.theta_tilde(&m.phi_pow(x, r as i32).unwrap(), r).unwrap());
            }
        }
    }
}

#[test]
fn ghost_of_theta_is_theta_of_frobenius_powers() {
    let m = TiltModel::cyclo(3, 1, 1).unwrap();
    let f = match m.add(&half_powers(&m, 2, 1), &m.from_int(5).unwrap()).unwrap() {
        AinfElem::Poly(f) => f,
        _ => unreachable!(),
    };
    let g = m.theta(&AinfElem::Poly(f.clone()), 2).unwrap().ghost();
    for (i, gi) in g.iter().enumerate() {
        assert_eq!(gi, &m.theta_of_frobenius(&f, i as u32).unwrap());
    }
}

#[test]
fn six_squares_charp_and_identity() {
    let m = TiltModel::charp(2, 2, 3).unwrap();
    let rep = commut_diagrams_check(&m, 2, &[m.one()], 4).unwrap();
    assert!(rep.diagrams.iter().all(|d| d.status == DiagramStatus::Pass));
    let sample = m.generating_sample(2, 10, 1).unwrap();
    let rep = commut_diagrams_check(&m, 2, &sample, 4).unwrap();
    assert!(rep.pass && rep.diagrams.iter().all(|d| d.status == DiagramStatus::Pass), "{rep:?}");
}

#[test]
fn six_squares_cyclo() {
    let m = TiltModel::cyclo(2, 1, 2).unwrap();
    let sample = m.generating_sample(1, 4, 2).unwrap();
    for r in 1..=2 {
        let rep = commut_diagrams_check(&m, r, &sample, 3).unwrap();
        assert!(rep.diagrams.iter().all(|d| d.status == DiagramStatus::Pass), "{rep:?}");
    }
}

#[test]
fn xi_generates_kernels() {
    let m = TiltModel::charp(2, 2, 4).unwrap();
    for r in 1..=3 {
        let rep = xi_family(&m, r, 4, 2).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
    let c = TiltModel::cyclo(2, 0, 2).unwrap();
    for r in 1..=2 {
        let rep = xi_family(&c, r, 3, 0).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.kernel_length, rep.ideal_length);
    }
}

#[test]
fn a_non_generator_is_detected() {
    // p ξ lies in the kernel but does not generate it
    let c = TiltModel::cyclo(2, 0, 2).unwrap();
    let xi = match c.xi().unwrap() {
        AinfElem::Poly(f) => f,
        _ => unreachable!(),
    };
    let cert = c.theta_kernel_vs_ideal(&xi.scale_int(&BigInt::from(2)), 1, 1, 4, 3).unwrap();
    assert!(cert.generator_in_kernel);
    assert!(!cert.equal);
}

#[test]
fn perfectoid_conditions() {
    let m = TiltModel::charp(2, 2, 3).unwrap();
    let rep = perfectoid_checks(PerfectoidSource::Tilt(&m), 10, 3, 1).unwrap();
    assert!(rep.conditions.iter().all(|c| c.verified), "{rep:?}");
    let ctl = perfectoid_checks(PerfectoidSource::PolynomialControl { p: 2 }, 10, 3, 1).unwrap();
    assert!(ctl.conditions.iter().all(|c| !c.verified));
    let cy = TiltModel::cyclo(2, 1, 2).unwrap();
    let rep = perfectoid_checks(PerfectoidSource::Tilt(&cy), 50, 2, 4).unwrap();
    assert!(rep.conditions.iter().all(|c| c.verified), "{rep:?}");
}

#[test]
fn limit_lift_examples() {
    let c = TiltModel::cyclo(2, 0, 3).unwrap();
    let res = c.residue_ring().unwrap();
    let ones = vec![RingElement::one(&res); 5];
    let lifted = tilt_limit_lift(&c, &ones, 2, 3, None).unwrap();
    assert!(lifted.slots.iter().all(|s| s.is_one()));

    let seq = cyclotomic_residue_sequence(&c, 4).unwrap();
    let a = tilt_limit_lift(&c, &seq, 2, 3, None).unwrap();
    assert_eq!(a.depth(), 1);
    assert!(a.is_compatible());
    for seed in 0..5 {
        assert_eq!(tilt_limit_lift(&c, &seq, 2, 3, Some(seed)).unwrap(), a);
    }
    assert!(matches!(tilt_limit_lift(&c, &seq, 1, 3, None), Err(Error::Depth(_))));

    let m = TiltModel::charp(2, 3, 2).unwrap();
    let t = RingElement::var(m.target(), "t").unwrap();
    let roots: Vec<RingElement> = (0..4).map(|k| t.scale_exponents(-k).unwrap()).collect();
    assert_eq!(tilt_limit_lift(&m, &roots, 1, 1, None).unwrap().slots, roots[..3].to_vec());
}

#[test]
fn wrong_twist_breaks_the_v_square() {
    let m = TiltModel::charp(2, 2, 3).unwrap();
    let x = half_powers(&m, 3, 2);
    let r = 2;
    let rhs = m.theta(&x, r).unwrap().verschiebung();
    let untwisted = m.theta(&m.phi_inv(&x).unwrap(), r + 1).unwrap();
    assert_ne!(untwisted, rhs);
    let lambda = m.solve_lambda(r, 1).unwrap();
    let twisted = m.theta(&m.mul(&lambda, &m.phi_inv(&x).unwrap()).unwrap(), r + 1).unwrap();
    assert_eq!(twisted, rhs);
}
