//! ξ_r = ξ φ^{-1}(ξ) ... φ^{-(r-1)}(ξ) and ξ̃_r = φ^r(ξ_r) as generators of ker θ_r and ker θ̃_r.

use serde::Serialize;

use super::cyclo::cyclo_xi;
use super::{AinfElem, TiltKind, TiltModel};
use crate::algebra::{RingDescriptor, RingElement, Submodule, Zpn};
use crate::error::{Error, Result};
use crate::witt::WittVector;

#[derive(Clone, Debug, Serialize)]
pub struct XiReport {
    pub model: TiltKind,
    pub p: u64,
    pub r: usize,
    pub precision: u32,
    pub xi: String,
    pub xi_r: String,
    pub xi_tilde_r: String,
    /// The first Witt coordinate of ξ is a unit of A♭.
    pub xi1_unit: bool,
    pub xi_r_in_kernel: bool,
    pub xi_tilde_r_in_kernel: bool,
    /// Lengths of ker θ_r and of (ξ_r), summed over the weights checked.
    pub kernel_length: u32,
    pub ideal_length: u32,
    pub generates: bool,
    /// Working precision at which the cyclotomic kernel matched (ξ_r).
    pub stabilized_at: Option<u32>,
    pub pass: bool,
}

impl TiltModel {
    /// The chosen generator ξ of ker θ: p in the char-p model, 1 + q^{1/p} + ... in the cyclotomic one.
    pub fn xi(&self) -> Result<AinfElem> {
        match self.kind {
            TiltKind::Charp => self.from_int(self.p as i64),
            TiltKind::Cyclo => Ok(AinfElem::Poly(cyclo_xi(self)?)),
        }
    }

    /// (ξ_r, ξ̃_r).
    pub fn xi_pair(&self, r: usize) -> Result<(AinfElem, AinfElem)> {
        let xi = self.xi()?;
        let mut acc = xi.clone();
        for k in 1..r {
            acc = self.mul(&acc, &self.phi_pow(&xi, -(k as i32))?)?;
        }
        let tilde = self.phi_pow(&acc, r as i32)?;
        Ok((acc, tilde))
    }

    /// The coordinate ξ_1 of ξ is a unit of A♭.
    fn xi1_unit(&self) -> Result<bool> {
        match self.kind {
            TiltKind::Charp => match self.xi()? {
                AinfElem::Witt(w) => Ok(w.len() > 1 && w.coords()[1].constant_term() % self.p != 0.into()),
                AinfElem::Poly(_) => unreachable!("char-p elements are Witt vectors"),
            },
            TiltKind::Cyclo => {
                // ξ = sum_i [ε^{i/p}] in W_2(F_p[ε^{1/p^cap}]); units of A♭ are the elements
                // with nonzero value at ε = 1
                let fe = RingDescriptor::padic_poly(RingDescriptor::prime_field(self.p), &["e"], self.cap).compile()?;
                let mut acc = WittVector::zero(&fe, 2);
                for i in 0..self.p {
                    let m = RingElement::monomial(&fe, &[("e", crate::algebra::Exp::new(i as i64, 1, self.p))], 1.into())?;
                    acc = acc.add(&WittVector::teichmuller(&m, 2))?;
                }
                Ok(!acc.coords()[1].eval_var_at_one("e")?.is_zero())
            }
        }
    }
}

/// Verify that ξ_r lies in ker θ_r and generates it in the truncated model at precision p^n.
/// In the char-p model the check runs weight by weight over exponents a <= deg_cap.
pub fn xi_family(model: &TiltModel, r: usize, n: u32, deg_cap: i64) -> Result<XiReport> {
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    let (xi_r, xi_tilde_r) = model.xi_pair(r)?;
    let zero = WittVector::zero(model.target(), r);
    let prec = match model.kind {
        TiltKind::Charp => None,
        TiltKind::Cyclo => Some(n),
    };
    let xi_r_in_kernel = model.witt_eq(&model.theta(&xi_r, r)?, &zero, prec)?;
    let xi_tilde_r_in_kernel = model.witt_eq(&model.theta_tilde(&xi_tilde_r, r)?, &zero, prec)?;
    let (kernel_length, ideal_length, generates, stabilized_at) = match (&xi_r, model.kind) {
        (AinfElem::Witt(w), TiltKind::Charp) => charp_weights(model, w, r, n, deg_cap)?,
        (AinfElem::Poly(g), TiltKind::Cyclo) => {
            let dim = 2 * model.p.pow(r as u32) as usize;
            let cert = model.theta_kernel_vs_ideal(g, r, r as u32, dim, n)?;
            (cert.kernel_length, cert.ideal_length, cert.equal, cert.stabilized_at)
        }
        _ => return Err(Error::DescriptorMismatch("representation does not match the model".into())),
    };
    let xi1_unit = model.xi1_unit()?;
    Ok(XiReport {
        model: model.kind,
        p: model.p,
        r,
        precision: n,
        xi: model.xi()?.to_string(),
        xi_r: xi_r.to_string(),
        xi_tilde_r: xi_tilde_r.to_string(),
        xi1_unit,
        xi_r_in_kernel,
        xi_tilde_r_in_kernel,
        kernel_length,
        ideal_length,
        generates,
        stabilized_at,
        pass: xi1_unit && xi_r_in_kernel && xi_tilde_r_in_kernel && generates,
    })
}

/// The weight-a part of W(A♭) is Z_p [t^a]; compare {c : θ_r(c [t^a]) = 0} with (ξ_r) in Z/p^n.
fn charp_weights(model: &TiltModel, xi_r: &WittVector, r: usize, n: u32, deg_cap: i64) -> Result<(u32, u32, bool, Option<u32>)> {
    if (model.len as u32) < n {
        return Err(Error::Depth(format!("Witt length {} below precision {n}", model.len)));
    }
    let zn = Zpn::new(model.p, n)?;
    // ξ_r lies in W(F_p) = Z_p, whose valuation is the number of leading zero coordinates
    if xi_r.coords().iter().any(|c| c.num_terms() > 1 || c.raw_terms().keys().any(|k| k.iter().any(|e| *e != 0))) {
        return Err(Error::Unsupported("ξ_r is not a constant".into()));
    }
    let v = xi_r.coords().iter().position(|c| !c.is_zero()).unwrap_or(xi_r.len()) as u32;
    let ideal = Submodule::new(zn, 1, &[vec![zn.pow_p(v.min(n))]]);
    let (mut klen, mut ilen, mut all) = (0, 0, true);
    for a in model.exponents(deg_cap) {
        let ta = match model.monomial(a, 1)? {
            AinfElem::Witt(w) => w,
            AinfElem::Poly(_) => unreachable!("char-p elements are Witt vectors"),
        };
        // smallest j with θ_r(p^j [t^a]) = 0
        let mut j = n;
        for k in 0..n {
            let x = ta.scale_int((model.p as i64).pow(k))?;
            if x.truncate(r)?.is_zero() {
                j = k;
                break;
            }
        }
        let kernel = Submodule::new(zn, 1, &[vec![zn.pow_p(j)]]);
        // the ideal generated by ξ_r [t^a] inside Z/p^n [t^a]
        let prod = xi_r.mul(&ta)?;
        let scaled = ta.scale_int((model.p as i64).pow(v.min(n)))?;
        all &= prod.truncate(n as usize)? == scaled.truncate(n as usize)?;
        all &= kernel.contains_module(&ideal) && ideal.contains_module(&kernel);
        klen += kernel.length();
        ilen += ideal.length();
    }
    Ok((klen, ilen, all, None))
}
