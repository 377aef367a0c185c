//! Multiplicative lifts of compatible residue sequences: x_i = lim ỹ_{i+n}^{p^n}.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{TiltKind, TiltModel};
use crate::algebra::{Ring, RingElement};
use crate::error::{Error, Result};

/// (x_0, ..., x_m) with x_{i+1}^p = x_i, exact or modulo p^precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltElement {
    pub kind: TiltKind,
    pub p: u64,
    pub precision: Option<u32>,
    pub slots: Vec<RingElement>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TiltElementJson {
    pub precision: Option<u32>,
    pub slots: Vec<String>,
}

impl TiltElement {
    pub fn depth(&self) -> usize {
        self.slots.len().saturating_sub(1)
    }

    pub fn is_compatible(&self) -> bool {
        self.slots.windows(2).all(|w| w[1].pow(self.p) == w[0])
    }

    pub fn summary(&self) -> TiltElementJson {
        TiltElementJson { precision: self.precision, slots: self.slots.iter().map(|s| s.to_string()).collect() }
    }
}

impl TiltModel {
    /// A/p as a carrier.
    pub fn residue_ring(&self) -> Result<Ring> {
        match self.kind {
            TiltKind::Charp => Ok(self.target().clone()),
            TiltKind::Cyclo => Ok(self.target_mod(1)?.ring),
        }
    }
}

/// Lift a residue sequence (y_0, ..., y_{m+n}) in A/p with y_{i+1}^p = y_i to (x_0, ..., x_m).
/// In the cyclotomic model x_i = ỹ_{i+n}^{p^n} modulo p^precision, which is independent of the
/// lifts once n + 1 >= precision; `lift_seed` perturbs the lifts by random multiples of p.
pub fn tilt_limit_lift(model: &TiltModel, y: &[RingElement], n: usize, precision: u32, lift_seed: Option<u64>) -> Result<TiltElement> {
    if y.len() <= n {
        return Err(Error::Depth(format!("{} residues cannot support {n} extra steps", y.len())));
    }
    let m = y.len() - 1 - n;
    let residue = model.residue_ring()?;
    let ys = y.iter().map(|v| v.coerce(&residue)).collect::<Result<Vec<_>>>()?;
    if ys.windows(2).any(|w| w[1].pow(model.p) != w[0]) {
        return Err(Error::Invalid("residue sequence is not Frobenius compatible".into()));
    }
    match model.kind {
        TiltKind::Charp => Ok(TiltElement { kind: model.kind, p: model.p, precision: None, slots: ys[..=m].to_vec() }),
        TiltKind::Cyclo => {
            if (n as u32) + 1 < precision {
                return Err(Error::Depth(format!("{n} steps do not stabilize modulo p^{precision}")));
            }
            let fq = model.target_mod(precision)?;
            let mut rng = lift_seed.map(ChaCha8Rng::seed_from_u64);
            let mut slots = Vec::with_capacity(m + 1);
            for i in 0..=m {
                let mut lift = ys[i + n].lift_into(&fq.ring)?;
                if let Some(r) = rng.as_mut() {
                    let noise: Vec<u128> = (0..fq.dim).map(|_| r.gen_range(0..fq.zr.modulus())).collect();
                    lift = lift.try_add(&fq.from_vec(&noise)?.scale_int(&BigInt::from(model.p)))?;
                }
                slots.push(lift.pow(model.p.pow(n as u32)));
            }
            let out = TiltElement { kind: model.kind, p: model.p, precision: Some(precision), slots };
            for (x, yv) in out.slots.iter().zip(&ys) {
                if &x.coerce(&residue)? != yv {
                    return Err(Error::Invalid("lift does not reduce to the residue".into()));
                }
            }
            Ok(out)
        }
    }
}

/// The residues of ζ_{p^{i+1}} - 1, i = 0..len, in the cyclotomic model.
pub fn cyclotomic_residue_sequence(model: &TiltModel, len: usize) -> Result<Vec<RingElement>> {
    let residue = model.residue_ring()?;
    (0..len)
        .map(|i| {
            let level = i as u32 + 1;
            if level > model.cap {
                return Err(Error::Depth(format!("ζ_{{p^{level}}} beyond cap {}", model.cap)));
            }
            let e = model.p.pow(model.cap - level) as i64;
            let z = RingElement::monomial(&residue, &[("X", crate::algebra::Exp::int(e))], BigInt::from(1))?;
            z.try_sub(&RingElement::one(&residue))
        })
        .collect()
}
