//! Truncated p-typical Witt vectors over any carrier.

pub mod structural;

use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::algebra::{Ring, RingDescriptor, RingElement};
use crate::error::{Error, Result};
pub use structural::{structural_polys, Kind, StructuralPolySet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector {
    pub p: u64,
    coords: Vec<RingElement>,
}

impl WittVector {
    pub fn new(p: u64, coords: Vec<RingElement>) -> Result<Self> {
        let first = coords.first().ok_or_else(|| Error::Invalid("Witt vector of length 0".into()))?;
        if coords.iter().any(|c| c.ring().desc != first.ring().desc) {
            return Err(Error::DescriptorMismatch("Witt coordinates in different rings".into()));
        }
        if first.p() != p {
            return Err(Error::DescriptorMismatch(format!("carrier prime {} differs from {p}", first.p())));
        }
        Ok(WittVector { p, coords })
    }

    pub fn from_ints(ring: &Ring, coords: &[i64]) -> Result<Self> {
        Self::new(ring.p, coords.iter().map(|c| RingElement::from_int(ring, *c)).collect())
    }

    pub fn zero(ring: &Ring, n: usize) -> Self {
        WittVector { p: ring.p, coords: vec![RingElement::zero(ring); n] }
    }

    pub fn one(ring: &Ring, n: usize) -> Self {
        Self::teichmuller(&RingElement::one(ring), n)
    }

    /// The Teichmüller lift [x] = (x, 0, ..., 0).
    pub fn teichmuller(x: &RingElement, n: usize) -> Self {
        let mut coords = vec![RingElement::zero(x.ring()); n];
        coords[0] = x.clone();
        WittVector { p: x.p(), coords }
    }

    /// The image of an integer m, computed over Z by ghost inversion.
    pub fn from_integer(ring: &Ring, n: usize, m: i64) -> Result<Self> {
        let z = RingDescriptor::integers(ring.p).compile()?;
        let g = vec![RingElement::from_int(&z, m); n];
        let w = witt_from_ghost(ring.p, &g)?;
        w.map_coords(|c| c.coerce(ring))
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[RingElement] {
        &self.coords
    }

    pub fn ring(&self) -> &Ring {
        self.coords[0].ring()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RingElement::is_zero)
    }

    pub fn map_coords(&self, f: impl Fn(&RingElement) -> Result<RingElement>) -> Result<Self> {
        Self::new(self.p, self.coords.iter().map(f).collect::<Result<Vec<_>>>()?)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.p != o.p || self.len() != o.len() {
            return Err(Error::DescriptorMismatch(format!("W_{} (p={}) vs W_{} (p={})", self.len(), self.p, o.len(), o.p)));
        }
        if self.ring().desc != o.ring().desc {
            return Err(Error::DescriptorMismatch(format!("{} vs {}", self.ring().desc, o.ring().desc)));
        }
        Ok(())
    }

    fn apply2(&self, o: &Self, kind: Kind) -> Result<Self> {
        self.check(o)?;
        let n = self.len();
        let ps = structural::polys(self.p, kind, n)?;
        let args: Vec<RingElement> = self.coords.iter().chain(o.coords.iter()).cloned().collect();
        let coords = ps.iter().map(|q| q.eval(&args)).collect::<Result<Vec<_>>>()?;
        Self::new(self.p, coords)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            self.check(o)?;
            return Ok(self.clone());
        }
        if self.is_zero() {
            self.check(o)?;
            return Ok(o.clone());
        }
        self.apply2(o, Kind::Sum)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.apply2(o, Kind::Product)
    }

    pub fn neg(&self) -> Result<Self> {
        let ps = structural::polys(self.p, Kind::Negation, self.len())?;
        let coords = ps.iter().map(|q| q.eval(&self.coords)).collect::<Result<Vec<_>>>()?;
        Self::new(self.p, coords)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg()?)
    }

    /// Multiplication by an integer.
    pub fn scale_int(&self, m: i64) -> Result<Self> {
        let c = Self::from_integer(self.ring(), self.len(), m)?;
        self.mul(&c)
    }

    /// Ghost components w_k = sum_{i<=k} p^i x_i^{p^(k-i)}.
    pub fn ghost(&self) -> Vec<RingElement> {
        let ring = self.ring();
        (0..self.len())
            .map(|k| {
                let mut acc = RingElement::zero(ring);
                for i in 0..=k {
                    let t = self.coords[i].pow(self.p.pow((k - i) as u32)).scale_int(&BigInt::from(self.p).pow(i as u32));
                    acc = &acc + &t;
                }
                acc
            })
            .collect()
    }

    /// Verschiebung: (x_0, ..., x_{n-1}) -> (0, x_0, ..., x_{n-1}).
    pub fn verschiebung(&self) -> Self {
        let mut coords = vec![RingElement::zero(self.ring())];
        coords.extend(self.coords.iter().cloned());
        WittVector { p: self.p, coords }
    }

    /// Restriction: drop the last coordinate.
    pub fn restriction(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::LengthMismatch("restriction needs length at least 2".into()));
        }
        Ok(WittVector { p: self.p, coords: self.coords[..self.len() - 1].to_vec() })
    }

    /// Restrict to the first m coordinates.
    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.len() {
            return Err(Error::LengthMismatch(format!("cannot truncate length {} to {m}", self.len())));
        }
        Ok(WittVector { p: self.p, coords: self.coords[..m].to_vec() })
    }

    /// Frobenius W_n -> W_{n-1}, via the universal F-polynomials.
    pub fn frobenius(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::LengthMismatch("Frobenius needs length at least 2".into()));
        }
        let ps = structural::polys(self.p, Kind::Frobenius, self.len())?;
        let coords = ps.iter().map(|q| q.eval(&self.coords)).collect::<Result<Vec<_>>>()?;
        Self::new(self.p, coords)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "n": self.len(),
            "base": self.ring().desc.to_json(),
            "coords": self.coords.iter().map(RingElement::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("Witt vector: {m}"));
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("p"))?;
        let base = RingDescriptor::from_json(v.get("base").ok_or_else(|| bad("base"))?)?.compile()?;
        let coords = v
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("coords"))?
            .iter()
            .map(|c| RingElement::from_json(&base, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, coords)
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Inverse of the ghost map on a p-torsion-free carrier.
pub fn witt_from_ghost(p: u64, g: &[RingElement]) -> Result<WittVector> {
    let first = g.first().ok_or_else(|| Error::Invalid("empty ghost vector".into()))?;
    if !first.ring().is_p_torsion_free() {
        return Err(Error::Unsupported("ghost inversion needs a p-torsion-free carrier".into()));
    }
    let mut xs: Vec<RingElement> = Vec::new();
    for (k, gk) in g.iter().enumerate() {
        let mut acc = gk.clone();
        for (i, x) in xs.iter().enumerate() {
            let t = x.pow(p.pow((k - i) as u32)).scale_int(&BigInt::from(p).pow(i as u32));
            acc = acc.try_sub(&t)?;
        }
        xs.push(acc.exact_div_p(k as u32)?);
    }
    WittVector::new(p, xs)
}

#[cfg(test)]
mod tests;
