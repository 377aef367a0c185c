//! δ-structures from Frobenius lifts on p-torsion-free carriers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use serde::Serialize;

use crate::algebra::{Exp, Ring, RingDescriptor, RingElement};
use crate::error::{Error, Result};

/// How the Frobenius lift acts on the generators.
#[derive(Clone, Debug)]
pub enum FrobeniusLift {
    Identity,
    /// Images of the variables, in carrier order.
    Substitution(Vec<RingElement>),
    /// Every exponent multiplied by p (monomial Frobenius on fractional-exponent carriers).
    MonomialPower,
}

/// Criterion deciding units in the completion modelled by the carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum UnitCriterion {
    /// p-adically complete with residue ring F_p: x is a unit iff x mod p is a nonzero constant.
    ConstantModP,
    /// (p, q-1)-adically complete: x is a unit iff x(q=1) is prime to p.
    AtOneModP { var: String },
    /// (p, d)-complete universal ring with δ(d) inverted: unit iff x mod (p, d) is c·δ(d)^k.
    UniversalMonomial { d: String, delta_d: String },
}

#[derive(Clone, Debug)]
pub struct DeltaRing {
    pub ring: Ring,
    pub p: u64,
    pub lift: FrobeniusLift,
    pub units: UnitCriterion,
}

#[derive(Clone, Debug)]
pub struct DistinguishedCert {
    pub distinguished: bool,
    pub delta: RingElement,
    /// An inverse in a truncated completion, when one is computed.
    pub inverse: Option<RingElement>,
    pub note: String,
}

impl DeltaRing {
    /// Build the δ-structure of a Frobenius lift, checking φ(x) ≡ x^p mod p on generators.
    pub fn from_lift(ring: &Ring, lift: FrobeniusLift, units: UnitCriterion) -> Result<Self> {
        if !ring.is_p_torsion_free() {
            return Err(Error::Unsupported(format!("{} has p-torsion; δ is not determined by φ", ring.desc)));
        }
        let dr = DeltaRing { ring: ring.clone(), p: ring.p, lift, units };
        if let FrobeniusLift::Substitution(images) = &dr.lift {
            if images.len() != ring.nvars() {
                return Err(Error::LengthMismatch("one Frobenius image per variable".into()));
            }
        }
        for v in &ring.vars {
            let x = RingElement::var(ring, &v.name)?;
            let diff = dr.phi(&x)?.try_sub(&x.pow(dr.p))?;
            if diff.exact_div_p(1).is_err() {
                return Err(Error::NotFrobeniusLift(format!("φ({}) is not congruent to {}^{} mod p", v.name, v.name, dr.p)));
            }
        }
        Ok(dr)
    }

    pub fn phi(&self, x: &RingElement) -> Result<RingElement> {
        match &self.lift {
            FrobeniusLift::Identity => Ok(x.clone()),
            FrobeniusLift::Substitution(images) => x.substitute(&self.ring, images),
            FrobeniusLift::MonomialPower => x.scale_exponents(1),
        }
    }

    pub fn phi_iter(&self, x: &RingElement, k: usize) -> Result<RingElement> {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.phi(&y)?;
        }
        Ok(y)
    }

    /// δ(x) = (φ(x) - x^p) / p.
    pub fn delta(&self, x: &RingElement) -> Result<RingElement> {
        self.phi(x)?.try_sub(&x.pow(self.p))?.exact_div_p(1)
    }

    pub fn is_unit(&self, x: &RingElement) -> bool {
        let p = BigInt::from(self.p);
        let prime_to_p = |c: &BigInt| !(c % &p).is_zero();
        match &self.units {
            UnitCriterion::ConstantModP => {
                let nonconst_ok = x.terms().iter().all(|(e, c)| e.iter().all(|v| v.num == 0) || (c % &p).is_zero());
                let c0 = x.constant_term();
                x.denominator().is_one() && nonconst_ok && prime_to_p(&c0)
            }
            UnitCriterion::AtOneModP { var } => match x.eval_var_at_one(var) {
                Ok(v) => v.num_terms() <= 1 && prime_to_p(&v.constant_term()),
                Err(_) => false,
            },
            UnitCriterion::UniversalMonomial { d, delta_d } => {
                let (Some(di), Some(ui)) = (self.ring.var_index(d), self.ring.var_index(delta_d)) else { return false };
                let mut survivors = Vec::new();
                for (e, c) in x.raw_terms() {
                    if (c % &p).is_zero() || e[di] > 0 {
                        continue;
                    }
                    survivors.push(e.clone());
                }
                survivors.len() == 1 && survivors[0].iter().enumerate().all(|(i, v)| i == ui || *v == 0)
            }
        }
    }

    /// Decide whether δ(d) is a unit, with an inverse certificate where computable.
    pub fn is_distinguished(&self, d: &RingElement, precision: u32) -> Result<DistinguishedCert> {
        let delta = self.delta(d)?;
        let distinguished = self.is_unit(&delta);
        let (inverse, note) = if !distinguished {
            (None, "δ(d) is not a unit".to_string())
        } else {
            match &self.units {
                UnitCriterion::ConstantModP => {
                    let m = BigInt::from(self.p).pow(precision);
                    let r = RingDescriptor::integers_mod(self.p, m).compile()?;
                    let inv = RingElement::constant(&r, delta.constant_term()).try_inverse()?;
                    (Some(inv), format!("inverse of the constant term mod p^{precision}"))
                }
                UnitCriterion::AtOneModP { var } => {
                    let inv = series_inverse_at_one(&delta, var, precision)?;
                    (Some(inv), format!("inverse in Z/p^{precision}[[s]]/s^{precision}, s = {var} - 1"))
                }
                UnitCriterion::UniversalMonomial { delta_d, .. } => (None, format!("{delta_d} is inverted in the universal ring")),
            }
        };
        Ok(DistinguishedCert { distinguished, delta, inverse, note })
    }
}

/// Inverse of x in Z/p^N[[s]] truncated at s^N, where s = var - 1.
pub fn series_inverse_at_one(x: &RingElement, var: &str, precision: u32) -> Result<RingElement> {
    expand_at_one(x, var, precision)?.try_inverse()
}

/// Re-expand x in s = var - 1 over Z/p^N[[s]] truncated at s^N.
pub fn expand_at_one(x: &RingElement, var: &str, precision: u32) -> Result<RingElement> {
    let p = x.p();
    let m = BigInt::from(p).pow(precision);
    let s_ring = RingDescriptor::series(RingDescriptor::integers_mod(p, m), "s", precision as u64).compile()?;
    let images: Vec<RingElement> = x
        .ring()
        .vars
        .iter()
        .map(|v| {
            if v.name == var {
                Ok(&RingElement::var(&s_ring, "s")? + &RingElement::one(&s_ring))
            } else {
                Err(Error::Unsupported(format!("extra variable {} in a q-series unit test", v.name)))
            }
        })
        .collect::<Result<_>>()?;
    x.substitute(&s_ring, &images)
}

/// [m]_q = 1 + q + ... + q^{m-1} in a carrier with variable `var`.
pub fn q_integer(ring: &Ring, var: &str, m: u64) -> Result<RingElement> {
    let mut acc = RingElement::zero(ring);
    for i in 0..m {
        acc = acc.try_add(&RingElement::monomial(ring, &[(var, Exp::int(i as i64))], BigInt::one())?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zq(p: u64) -> (Ring, DeltaRing) {
        let r = RingDescriptor::poly(RingDescriptor::integers(p), &["q"]).compile().unwrap();
        let q = RingElement::var(&r, "q").unwrap();
        let dr = DeltaRing::from_lift(&r, FrobeniusLift::Substitution(vec![q.pow(p)]), UnitCriterion::AtOneModP { var: "q".into() }).unwrap();
        (r, dr)
    }

    #[test]
    fn delta_on_integers_with_identity() {
        let z = RingDescriptor::integers(2).compile().unwrap();
        let dr = DeltaRing::from_lift(&z, FrobeniusLift::Identity, UnitCriterion::ConstantModP).unwrap();
        let two = RingElement::from_int(&z, 2);
        assert_eq!(dr.delta(&two).unwrap(), RingElement::from_int(&z, -1));
        let five = RingElement::from_int(&z, 5);
        assert_eq!(dr.delta(&five).unwrap(), RingElement::from_int(&z, (5 - 25) / 2));
        let cert = dr.is_distinguished(&two, 4).unwrap();
        assert!(cert.distinguished);
        let inv = cert.inverse.unwrap();
        let back = RingElement::constant(inv.ring(), cert.delta.constant_term());
        assert!((&inv * &back).is_one());
    }

    #[test]
    fn q_de_rham_distinguished_elements() {
        for p in [2u64, 3] {
            let (r, dr) = zq(p);
            let q = RingElement::var(&r, "q").unwrap();
            assert!(dr.delta(&q).unwrap().is_zero());
            let d = q_integer(&r, "q", p).unwrap();
            let cert = dr.is_distinguished(&d, 6).unwrap();
            assert!(cert.distinguished);
            let inv = cert.inverse.unwrap();
            assert!((&inv * &expand_at_one(&cert.delta, "q", 6).unwrap()).is_one());
            let qm1 = &q - &RingElement::one(&r);
            assert!(!dr.is_distinguished(&qm1, 6).unwrap().distinguished);
            // φ(d) is distinguished as well
            assert!(dr.is_distinguished(&dr.phi(&d).unwrap(), 6).unwrap().distinguished);
        }
    }

    #[test]
    fn non_lift_is_rejected() {
        let r = RingDescriptor::poly(RingDescriptor::integers(3), &["q"]).compile().unwrap();
        let q = RingElement::var(&r, "q").unwrap();
        let bad = DeltaRing::from_lift(&r, FrobeniusLift::Substitution(vec![q.pow(2)]), UnitCriterion::ConstantModP);
        assert!(matches!(bad, Err(Error::NotFrobeniusLift(_))));
        let f3 = RingDescriptor::prime_field(3).compile().unwrap();
        assert!(DeltaRing::from_lift(&f3, FrobeniusLift::Identity, UnitCriterion::ConstantModP).is_err());
    }

    fn poly(r: &Ring, c: &[i64]) -> RingElement {
        let mut acc = RingElement::zero(r);
        for (i, x) in c.iter().enumerate() {
            acc = &acc + &RingElement::monomial(r, &[("q", Exp::int(i as i64))], BigInt::from(*x)).unwrap();
        }
        acc
    }

    proptest! {
        #[test]
        fn delta_axioms(a in prop::collection::vec(-5i64..5, 0..4), b in prop::collection::vec(-5i64..5, 0..4), p in prop::sample::select(vec![2u64, 3])) {
            let (r, dr) = zq(p);
            let (x, y) = (poly(&r, &a), poly(&r, &b));
            let dx = dr.delta(&x).unwrap();
            let dy = dr.delta(&y).unwrap();
            let pp = BigInt::from(p);
            // δ(xy) = x^p δ(y) + y^p δ(x) + p δ(x) δ(y)
            let rhs = &(&(&x.pow(p) * &dy) + &(&y.pow(p) * &dx)) + &(&dx * &dy).scale_int(&pp);
            prop_assert_eq!(dr.delta(&(&x * &y)).unwrap(), rhs);
            // δ(x + y) = δ(x) + δ(y) - sum_{0<i<p} binom(p,i)/p x^i y^{p-i}
            let mut cross = RingElement::zero(&r);
            let mut binom = BigInt::one();
            for i in 1..p {
                binom = binom * BigInt::from(p - i + 1) / BigInt::from(i);
                cross = &cross + &(&x.pow(i) * &y.pow(p - i)).scale_int(&(&binom / &pp));
            }
            prop_assert_eq!(dr.delta(&(&x + &y)).unwrap(), &(&dx + &dy) - &cross);
            prop_assert_eq!(dr.phi(&dx).unwrap(), dr.delta(&dr.phi(&x).unwrap()).unwrap());
            prop_assert_eq!(dr.phi(&x).unwrap(), &x.pow(p) + &dx.scale_int(&pp));
        }
    }
}
