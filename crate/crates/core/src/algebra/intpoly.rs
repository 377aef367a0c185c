//! Multivariate integer polynomials, used for universal Witt polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::element::RingElement;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u16>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut k = vec![0u16; nvars];
        k[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(k, BigInt::one());
        p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (k, c) in &o.terms {
            let e = t.entry(k.clone()).or_default();
            *e += c;
            if e.is_zero() {
                t.remove(k);
            }
        }
        IntPoly { nvars: self.nvars, terms: t }
    }

    pub fn neg(&self) -> Self {
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut t: BTreeMap<Vec<u16>, BigInt> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let k: Vec<u16> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                *t.entry(k).or_default() += ca * cb;
            }
        }
        t.retain(|_, c| !c.is_zero());
        IntPoly { nvars: self.nvars, terms: t }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divide every coefficient by p^k exactly.
    pub fn exact_div_p(&self, p: u64, k: u32) -> Result<Self> {
        let pk = BigInt::from(p).pow(k);
        let mut t = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(&pk);
            if !r.is_zero() {
                return Err(Error::Divisibility { k, detail: format!("coefficient {c} of a universal polynomial") });
            }
            t.insert(m.clone(), q);
        }
        Ok(IntPoly { nvars: self.nvars, terms: t })
    }

    /// Substitute polynomials for the variables.
    pub fn compose(&self, images: &[IntPoly]) -> Self {
        let n = images.first().map_or(0, |x| x.nvars);
        let mut acc = Self::zero(n);
        for (k, c) in &self.terms {
            let mut term = Self::constant(n, c.clone());
            for (i, e) in k.iter().enumerate() {
                if *e > 0 {
                    term = term.mul(&images[i].pow(*e as u32));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Evaluate at ring elements sharing one carrier.
    pub fn eval(&self, args: &[RingElement]) -> Result<RingElement> {
        if args.len() != self.nvars {
            return Err(Error::LengthMismatch(format!("{} arguments for {} variables", args.len(), self.nvars)));
        }
        let ring = args.first().map(|a| a.ring().clone()).ok_or_else(|| Error::Invalid("no arguments".into()))?;
        // power tables up to the maximal degree per variable
        let mut maxdeg = vec![0u16; self.nvars];
        for k in self.terms.keys() {
            for (m, e) in maxdeg.iter_mut().zip(k) {
                *m = (*m).max(*e);
            }
        }
        let powers: Vec<Vec<RingElement>> = args
            .iter()
            .zip(&maxdeg)
            .map(|(a, d)| {
                let mut v = vec![RingElement::one(&ring)];
                if !a.is_zero() {
                    for _ in 0..*d {
                        let nxt = v.last().unwrap().try_mul(a)?;
                        v.push(nxt);
                    }
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let mut acc = RingElement::zero(&ring);
        'terms: for (k, c) in &self.terms {
            let mut term = RingElement::constant(&ring, ring.normalize_int(c.clone()));
            if term.is_zero() {
                continue;
            }
            for (i, e) in k.iter().enumerate() {
                if *e > 0 {
                    if args[i].is_zero() {
                        continue 'terms;
                    }
                    term = term.try_mul(&powers[i][*e as usize])?;
                }
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }
}
