//! Elements of W_rΩ^i as coefficients on the basis indexed by (a, P), P ∈ P_a.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::weight::{enumerate_weights, partitions_of_degree, Base, Weight, WeightPartition};
use crate::error::{Error, Result};

/// W_•Ω^• of F_p[T_1..T_k] or of its Laurent localization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DrwSpace {
    pub p: u64,
    pub k: usize,
    pub base: Base,
}

impl DrwSpace {
    pub fn new(p: u64, k: usize, base: Base) -> Result<Self> {
        if p < 2 || k == 0 || k > 16 {
            return Err(Error::Invalid(format!("unsupported (p, k) = ({p}, {k})")));
        }
        Ok(DrwSpace { p, k, base })
    }

    pub fn polynomial(p: u64, k: usize) -> Result<Self> {
        Self::new(p, k, Base::Polynomial)
    }

    /// p^{r - u(a)}, or None when the weight does not occur at level r.
    pub fn coefficient_modulus(&self, level: u32, w: &Weight) -> Option<u128> {
        (level > w.u()).then(|| (self.p as u128).pow(level - w.u()))
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.k() != self.k || w.p() != self.p {
            return Err(Error::Invalid(format!("weight {w} does not belong to k = {}, p = {}", self.k, self.p)));
        }
        if self.base == Base::Polynomial && !w.is_nonnegative() {
            return Err(Error::Invalid(format!("negative weight {w} in a polynomial algebra")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisKey {
    pub weight: Weight,
    pub partition: WeightPartition,
}

impl BasisKey {
    pub fn new(weight: Weight, partition: WeightPartition) -> Self {
        BasisKey { weight, partition }
    }
}

/// One basis direction together with its coefficient module W_{r-u(a)}(F_p) = Z/p^{r-u(a)}.
#[derive(Clone, Debug, Serialize)]
pub struct BasisEntry {
    pub weight: Weight,
    pub partition: WeightPartition,
    #[serde(rename = "coeff-module")]
    pub coeff_module: String,
    #[serde(skip)]
    pub coeff_len: u32,
}

/// The basis of W_rΩ^i over weights with entries at most `cap`.
pub fn lz_basis(space: &DrwSpace, r: u32, i: usize, cap: i64) -> Result<Vec<BasisEntry>> {
    let mut out = Vec::new();
    for w in enumerate_weights(space.p, space.k, r, cap, space.base)? {
        if w.u() >= r {
            continue;
        }
        for part in partitions_of_degree(&w, space.base, i) {
            let len = r - w.u();
            out.push(BasisEntry {
                weight: w.clone(),
                partition: part,
                coeff_module: format!("W_{len}(F_{})", space.p),
                coeff_len: len,
            });
        }
    }
    Ok(out)
}

/// Σ x_{a,P} e(x_{a,P}, a, P) in W_rΩ^i with x_{a,P} ∈ Z/p^{r-u(a)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrwElement {
    pub space: DrwSpace,
    pub level: u32,
    pub degree: usize,
    pub terms: BTreeMap<BasisKey, u128>,
}

impl DrwElement {
    pub fn zero(space: DrwSpace, level: u32, degree: usize) -> Self {
        DrwElement { space, level, degree, terms: BTreeMap::new() }
    }

    pub fn basis(space: DrwSpace, level: u32, key: BasisKey) -> Result<Self> {
        let mut x = Self::zero(space, level, key.partition.degree());
        x.add_term(key, 1)?;
        Ok(x)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add c e(1, a, P), reducing modulo p^{r-u(a)}.
    pub fn add_term(&mut self, key: BasisKey, c: i128) -> Result<()> {
        self.space.check_weight(&key.weight)?;
        if key.partition.degree() != self.degree {
            return Err(Error::Invalid(format!("partition {} is not of degree {}", key.partition.label(), self.degree)));
        }
        let Some(m) = self.space.coefficient_modulus(self.level, &key.weight) else {
            return Ok(());
        };
        let c = c.rem_euclid(m as i128) as u128;
        let slot = self.terms.entry(key.clone()).or_insert(0);
        *slot = (*slot + c) % m;
        if *slot == 0 {
            self.terms.remove(&key);
        }
        Ok(())
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.space != other.space || self.level != other.level || self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "shape mismatch: level {} degree {} vs level {} degree {}",
                self.level, self.degree, other.level, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), *c as i128)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: i128) -> Result<Self> {
        let mut out = Self::zero(self.space, self.level, self.degree);
        for (k, c) in &self.terms {
            let m = self.space.coefficient_modulus(self.level, &k.weight).unwrap_or(1) as i128;
            out.add_term(k.clone(), (*c as i128 * s.rem_euclid(m)) % m)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1)?)
    }

    /// Weights carrying a nonzero coefficient.
    pub fn weights(&self) -> Vec<Weight> {
        let mut w: Vec<Weight> = self.terms.keys().map(|k| k.weight.clone()).collect();
        w.dedup();
        w
    }

    pub fn summary(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(k, c)| TermJson { weight: k.weight.clone(), partition: k.partition.clone(), coeff: c.to_string() })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub weight: Weight,
    pub partition: WeightPartition,
    pub coeff: String,
}

impl fmt::Display for DrwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(k, c)| format!("{c}·e{}{}", k.weight, k.partition.label())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
