//! Finite-depth tilts, the Fontaine maps θ_r and θ̃_r, and the generators ξ_r.
//!
//! Two models are supported. In the perfect char-p model A = F_p[t^{1/p^∞}] the tilt is A
//! itself and W(A♭) is represented by Witt vectors of a fixed length over F_p[t^{1/p^C}].
//! In the cyclotomic model A = Z_p[ζ_{p^∞}] only the subring Z[q^{1/p^C}] of W(A♭) is
//! represented, with q = [ε]; θ is evaluated through ghost components in Z[ζ_{p^C}].

pub mod commut;
pub mod cyclo;
pub mod limit;
pub mod perfectoid;
pub mod xi;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::{Exp, Ring, RingDescriptor, RingElement};
use crate::error::{Error, Result};
use crate::witt::{witt_from_ghost, WittVector};

pub use commut::{commut_diagrams_check, CommutReport, DiagramStatus};
pub use limit::{tilt_limit_lift, TiltElement};
pub use perfectoid::{perfectoid_checks, PerfectoidReport};
pub use xi::{xi_family, XiReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiltKind {
    Charp,
    Cyclo,
}

impl TiltKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "charp" | "charp-perfect" => Ok(TiltKind::Charp),
            "cyclo" | "cyclotomic" => Ok(TiltKind::Cyclo),
            _ => Err(Error::Parse(format!("unknown tilt model {s}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TiltModel {
    pub kind: TiltKind,
    pub p: u64,
    /// Sampled elements have exponents in p^{-depth} Z.
    pub depth: u32,
    /// Exponent cap of the carrier; p-power roots are available down to p^{-cap}.
    pub cap: u32,
    /// Witt length of the representatives of W(A♭) in the char-p model.
    pub len: usize,
    ainf: Ring,
    target: Ring,
}

/// An element of W(A♭) in one of the two representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AinfElem {
    Witt(WittVector),
    Poly(RingElement),
}

impl fmt::Display for AinfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AinfElem::Witt(w) => write!(f, "{w}"),
            AinfElem::Poly(x) => write!(f, "{x}"),
        }
    }
}

/// Φ_{p^s}(X) = sum_{i<p} X^{i p^{s-1}}, or X - 1 for s = 0.
pub fn cyclotomic_prime_power(ring: &Ring, var: &str, p: u64, s: u32) -> Result<RingElement> {
    let x = RingElement::var(ring, var)?;
    if s == 0 {
        return x.try_sub(&RingElement::one(ring));
    }
    let step = p.pow(s - 1);
    let mut acc = RingElement::zero(ring);
    for i in 0..p {
        acc = acc.try_add(&x.pow(i * step))?;
    }
    Ok(acc)
}

fn depth_err(e: Error) -> Error {
    match e {
        Error::ExponentRange(m) => Error::Depth(m),
        other => other,
    }
}

impl TiltModel {
    /// A = F_p[t^{1/p^∞}] seen at depth m; Witt length `len` for W(A♭).
    pub fn charp(p: u64, depth: u32, len: usize) -> Result<Self> {
        let cap = depth + len as u32 + 1;
        let ring = RingDescriptor::padic_poly(RingDescriptor::prime_field(p), &["t"], cap).compile()?;
        Ok(TiltModel { kind: TiltKind::Charp, p, depth, cap, len, ainf: ring.clone(), target: ring })
    }

    /// A = Z_p[ζ_{p^∞}]: W(A♭) ⊇ Z[q^{1/p^cap}], A ⊇ Z[ζ_{p^cap}], θ(q^{1/p^k}) = ζ_{p^k}.
    pub fn cyclo(p: u64, depth: u32, r_max: usize) -> Result<Self> {
        let cap = depth + r_max as u32 + 1;
        let ainf = RingDescriptor::padic_poly(RingDescriptor::integers(p), &["q"], cap).compile()?;
        let zx = RingDescriptor::poly(RingDescriptor::integers(p), &["X"]).compile()?;
        let phi = cyclotomic_prime_power(&zx, "X", p, cap)?;
        let target = crate::algebra::quotient_ring(&phi)?;
        Ok(TiltModel { kind: TiltKind::Cyclo, p, depth, cap, len: r_max + 1, ainf, target })
    }

    pub fn new(kind: TiltKind, p: u64, depth: u32, r_max: usize) -> Result<Self> {
        match kind {
            TiltKind::Charp => Self::charp(p, depth, r_max + 1),
            TiltKind::Cyclo => Self::cyclo(p, depth, r_max),
        }
    }

    /// Carrier of A♭ (char p) or of the polynomial subring of W(A♭) (cyclotomic).
    pub fn ainf_ring(&self) -> &Ring {
        &self.ainf
    }

    /// Carrier of A in which θ takes values.
    pub fn target(&self) -> &Ring {
        &self.target
    }

    /// The Teichmüller lift [t^a] (char p) or q^a = [ε^a] (cyclotomic), scaled by c.
    pub fn monomial(&self, a: Exp, c: i64) -> Result<AinfElem> {
        let var = match self.kind {
            TiltKind::Charp => "t",
            TiltKind::Cyclo => "q",
        };
        let x = RingElement::monomial(&self.ainf, &[(var, a)], BigInt::from(c)).map_err(depth_err)?;
        Ok(match self.kind {
            TiltKind::Charp => AinfElem::Witt(WittVector::teichmuller(&x, self.len)),
            TiltKind::Cyclo => AinfElem::Poly(x),
        })
    }

    pub fn from_int(&self, c: i64) -> Result<AinfElem> {
        Ok(match self.kind {
            TiltKind::Charp => AinfElem::Witt(WittVector::from_integer(&self.ainf, self.len, c)?),
            TiltKind::Cyclo => AinfElem::Poly(RingElement::from_int(&self.ainf, c)),
        })
    }

    pub fn one(&self) -> AinfElem {
        match self.kind {
            TiltKind::Charp => AinfElem::Witt(WittVector::one(&self.ainf, self.len)),
            TiltKind::Cyclo => AinfElem::Poly(RingElement::one(&self.ainf)),
        }
    }

    pub fn add(&self, x: &AinfElem, y: &AinfElem) -> Result<AinfElem> {
        match (x, y) {
            (AinfElem::Witt(a), AinfElem::Witt(b)) => Ok(AinfElem::Witt(a.add(b)?)),
            (AinfElem::Poly(a), AinfElem::Poly(b)) => Ok(AinfElem::Poly(a.try_add(b)?)),
            _ => Err(Error::DescriptorMismatch("mixed tilt representations".into())),
        }
    }

    pub fn mul(&self, x: &AinfElem, y: &AinfElem) -> Result<AinfElem> {
        match (x, y) {
            (AinfElem::Witt(a), AinfElem::Witt(b)) => Ok(AinfElem::Witt(a.mul(b)?)),
            (AinfElem::Poly(a), AinfElem::Poly(b)) => Ok(AinfElem::Poly(a.try_mul(b)?)),
            _ => Err(Error::DescriptorMismatch("mixed tilt representations".into())),
        }
    }

    /// φ^k for k of either sign; negative k takes p-power roots and may exhaust the depth.
    pub fn phi_pow(&self, x: &AinfElem, k: i32) -> Result<AinfElem> {
        match x {
            AinfElem::Witt(w) => {
                // the Witt Frobenius of a perfect F_p-algebra acts coordinatewise
                Ok(AinfElem::Witt(w.map_coords(|c| c.scale_exponents(k).map_err(depth_err))?))
            }
            AinfElem::Poly(f) => Ok(AinfElem::Poly(f.scale_exponents(k).map_err(depth_err)?)),
        }
    }

    pub fn phi(&self, x: &AinfElem) -> Result<AinfElem> {
        self.phi_pow(x, 1)
    }

    pub fn phi_inv(&self, x: &AinfElem) -> Result<AinfElem> {
        self.phi_pow(x, -1)
    }

    /// θ(φ^i x) in A, for the cyclotomic model.
    pub fn theta_of_frobenius(&self, f: &RingElement, i: u32) -> Result<RingElement> {
        // stored exponent e of q means q^{e/p^cap}, sent to X^e with X = ζ_{p^cap}
        let order = self.p.pow(self.cap) as i64;
        let pi = self.p.pow(i) as i64;
        let mut terms = std::collections::BTreeMap::new();
        for (k, c) in f.raw_terms() {
            let e = (k[0] % order) * (pi % order) % order;
            *terms.entry(vec![e]).or_insert_with(|| BigInt::from(0)) += c;
        }
        RingElement::from_terms(&self.target, terms)?.divide_by_integer(f.denominator())
    }

    /// θ_r : W(A♭) -> W_r(A).
    pub fn theta(&self, x: &AinfElem, r: usize) -> Result<WittVector> {
        if r == 0 {
            return Err(Error::Invalid("θ_r needs r >= 1".into()));
        }
        match x {
            AinfElem::Witt(w) => {
                if w.len() < r {
                    return Err(Error::Depth(format!("Witt length {} below {r}", w.len())));
                }
                w.truncate(r)
            }
            AinfElem::Poly(f) => {
                let ghosts = (0..r as u32).map(|i| self.theta_of_frobenius(f, i)).collect::<Result<Vec<_>>>()?;
                witt_from_ghost(self.p, &ghosts)
            }
        }
    }

    /// θ̃_r = θ_r ∘ φ^{-r}.
    pub fn theta_tilde(&self, x: &AinfElem, r: usize) -> Result<WittVector> {
        self.theta(&self.phi_pow(x, -(r as i32))?, r)
    }

    /// V(1) in W_r(A).
    pub fn v_one(&self, r: usize) -> WittVector {
        if r <= 1 {
            return WittVector::zero(&self.target, r.max(1));
        }
        WittVector::one(&self.target, r - 1).verschiebung()
    }

    /// Monomial exponents a = k/p^depth with 0 <= a <= deg_cap.
    pub fn exponents(&self, deg_cap: i64) -> Vec<Exp> {
        let den = self.p.pow(self.depth) as i64;
        (0..=deg_cap * den).map(|k| Exp::new(k, self.depth, self.p)).collect()
    }
}

#[cfg(test)]
mod tests;
