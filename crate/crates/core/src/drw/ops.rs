//! d, F, V, R and products on basis coordinates, plus the same maps computed independently in the
//! integral-forms model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::basis::{BasisKey, DrwElement};
use super::deligne::deligne_quotient;
use super::forms::{d_matrix_scaled, dlog_basis, from_coords, lz_form, to_coords, wedge, FormVec};
use super::normal::{Rewriter, VdvForm};
use super::weight::{Base, Weight};
use crate::algebra::{Exp, RingDescriptor, RingElement};
use crate::error::{Error, Result};
use crate::witt::WittVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrwOp {
    #[serde(rename = "d")]
    D,
    F,
    V,
    R,
}

impl DrwOp {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "d" => Ok(DrwOp::D),
            "F" | "f" => Ok(DrwOp::F),
            "V" | "v" => Ok(DrwOp::V),
            "R" | "r" => Ok(DrwOp::R),
            _ => Err(Error::Parse(format!("unknown operator {s:?}"))),
        }
    }
}

impl DrwElement {
    pub fn apply(&self, op: DrwOp, rw: &mut Rewriter) -> Result<DrwElement> {
        let x = VdvForm::from_element(self)?;
        let y = match op {
            DrwOp::D => x.d(rw)?,
            DrwOp::F => x.frobenius(rw)?,
            DrwOp::V => x.verschiebung(rw)?,
            DrwOp::R => x.restriction(rw)?,
        };
        y.to_element(rw)
    }

    pub fn d(&self) -> Result<DrwElement> {
        self.apply(DrwOp::D, &mut Rewriter::from_env())
    }

    pub fn frobenius(&self) -> Result<DrwElement> {
        self.apply(DrwOp::F, &mut Rewriter::from_env())
    }

    pub fn verschiebung(&self) -> Result<DrwElement> {
        self.apply(DrwOp::V, &mut Rewriter::from_env())
    }

    pub fn restriction(&self) -> Result<DrwElement> {
        self.apply(DrwOp::R, &mut Rewriter::from_env())
    }

    pub fn mul(&self, other: &DrwElement) -> Result<DrwElement> {
        self.mul_with(other, &mut Rewriter::from_env())
    }

    pub fn mul_with(&self, other: &DrwElement, rw: &mut Rewriter) -> Result<DrwElement> {
        VdvForm::from_element(self)?.mul(&VdvForm::from_element(other)?, rw)?.to_element(rw)
    }

    /// The image of an integer in W_r(F_p) ⊂ W_rΩ^0.
    pub fn scalar(space: super::basis::DrwSpace, level: u32, c: i128) -> Result<DrwElement> {
        let w = Weight::zero(space.p, space.k);
        let part = super::weight::partitions_of_degree(&w, space.base, 0)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Invalid("no degree-0 partition at weight 0".into()))?;
        let mut x = DrwElement::zero(space, level, 0);
        x.add_term(BasisKey::new(w, part), c)?;
        Ok(x)
    }
}

pub fn drw_ops(op: DrwOp, x: &DrwElement) -> Result<DrwElement> {
    x.apply(op, &mut Rewriter::from_env())
}

/// The degree-0 part as a Witt vector over F_p[T_1..T_k]: e(c, a, P) ↦ V^u(c [T^{p^u a}]).
pub fn to_witt(x: &DrwElement) -> Result<WittVector> {
    if x.degree != 0 || x.space.base != Base::Polynomial {
        return Err(Error::Invalid("only degree-0 polynomial elements are Witt vectors".into()));
    }
    let names: Vec<String> = (1..=x.space.k).map(|i| format!("T{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let ring = RingDescriptor::poly(RingDescriptor::prime_field(x.space.p), &refs).compile()?;
    let r = x.level as usize;
    let mut acc = WittVector::zero(&ring, r);
    for (key, c) in &x.terms {
        let u = key.weight.u() as usize;
        let b = key.weight.integral_lift();
        let exps: Vec<(&str, Exp)> = refs.iter().zip(&b).map(|(n, e)| (*n, Exp::int(*e))).collect();
        let mono = RingElement::monomial(&ring, &exps, 1.into())?;
        let c = i64::try_from(*c).map_err(|_| Error::ResourceCap("coefficient exceeds 64 bits".into()))?;
        let mut w = WittVector::from_integer(&ring, r - u, c)?.mul(&WittVector::teichmuller(&mono, r - u))?;
        for _ in 0..u {
            w = w.verschiebung();
        }
        acc = acc.add(&w)?;
    }
    Ok(acc)
}

/// An element as forms c T^a dlog T_J in E, weight by weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EForm {
    pub level: u32,
    pub degree: usize,
    pub parts: BTreeMap<Weight, FormVec>,
}

fn accumulate(parts: &mut BTreeMap<Weight, FormVec>, w: Weight, x: &FormVec) {
    let slot = parts.entry(w).or_default();
    for (m, c) in x {
        *slot.entry(*m).or_insert(0) += c;
    }
    slot.retain(|_, c| *c != 0);
}

/// Routines that compute through E/(V^rE + dV^rE) instead of the procomplex identities.
pub mod oracle {
    use super::*;

    pub fn to_eform(x: &DrwElement) -> Result<EForm> {
        let mut parts = BTreeMap::new();
        for (key, c) in &x.terms {
            let f: FormVec = lz_form(&key.weight, &key.partition)?.iter().map(|(m, v)| (*m, v * *c as i128)).collect();
            accumulate(&mut parts, key.weight.clone(), &f);
        }
        Ok(EForm { level: x.level, degree: x.degree, parts })
    }

    pub fn from_eform(space: &super::super::basis::DrwSpace, e: &EForm) -> Result<DrwElement> {
        let mut out = DrwElement::zero(*space, e.level, e.degree);
        for (w, f) in &e.parts {
            if w.u() >= e.level || f.is_empty() {
                continue;
            }
            let q = deligne_quotient(w, space.base, e.degree, e.level)?;
            for (part, c) in q.coordinates(space.base, f)? {
                out.add_term(BasisKey::new(w.clone(), part), c as i128)?;
            }
        }
        Ok(out)
    }

    fn d_form(w: &Weight, base: Base, i: usize, f: &FormVec) -> Result<FormVec> {
        let src = dlog_basis(w, base, i);
        let dst = dlog_basis(w, base, i + 1);
        let d = d_matrix_scaled(w, base, i);
        let c = to_coords(f, &src)?;
        let q = (w.p() as i128).pow(w.u());
        let out: Vec<i128> = d
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(&c).map(|(a, b)| a * b).sum();
                if s % q != 0 {
                    return Err(Error::Invalid(format!("d leaves E at {w}")));
                }
                Ok(s / q)
            })
            .collect::<Result<_>>()?;
        Ok(from_coords(&out, &dst))
    }

    /// d, F = p^{-i} φ and V = p F^{-1} on forms, where φ(T) = T^p.
    pub fn apply(op: DrwOp, x: &DrwElement) -> Result<DrwElement> {
        let e = to_eform(x)?;
        let p = x.space.p as i128;
        let (level, degree) = match op {
            DrwOp::D => (e.level, e.degree + 1),
            DrwOp::F | DrwOp::R if e.level < 2 => return Err(Error::Depth("level below 2".into())),
            DrwOp::F | DrwOp::R => (e.level - 1, e.degree),
            DrwOp::V => (e.level + 1, e.degree),
        };
        let mut parts = BTreeMap::new();
        for (w, f) in &e.parts {
            match op {
                DrwOp::D => accumulate(&mut parts, w.clone(), &d_form(w, x.space.base, e.degree, f)?),
                DrwOp::F => accumulate(&mut parts, w.scale(1), f),
                DrwOp::V => accumulate(&mut parts, w.scale(-1), &f.iter().map(|(m, c)| (*m, c * p)).collect()),
                DrwOp::R => accumulate(&mut parts, w.clone(), f),
            }
        }
        from_eform(&x.space, &EForm { level, degree, parts })
    }

    pub fn mul(x: &DrwElement, y: &DrwElement) -> Result<DrwElement> {
        let (ex, ey) = (to_eform(x)?, to_eform(y)?);
        let mut parts = BTreeMap::new();
        for (a, f) in &ex.parts {
            for (b, g) in &ey.parts {
                accumulate(&mut parts, a.add(b), &wedge(f, g));
            }
        }
        from_eform(&x.space, &EForm { level: x.level, degree: x.degree + y.degree, parts })
    }
}
