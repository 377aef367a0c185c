//! Property checks on r_n: the generator formula for the product embedding, ring-homomorphism
//! checks, and bijectivity in the crystalline case.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use super::model::{Precision, Preset, PrismModel};
use super::rn::{project, RnValue};
use crate::algebra::RingElement;
use crate::error::{Error, Result};
use crate::witt::WittVector;

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingCheck {
    pub p: u64,
    pub n: usize,
    pub j: usize,
    pub components: Vec<String>,
    pub pass: bool,
}

/// The product embedding of V^j([q]) on the q-deRham preset against the closed form:
/// component i is p^j q^{p^{n-1-j}} for i ≤ n-1-j and 0 otherwise.
pub fn embedding_formula_check(p: u64, n: usize, j: usize) -> Result<EmbeddingCheck> {
    if j >= n {
        return Err(Error::Invalid(format!("V^{j} vanishes on W_{n}")));
    }
    let m = PrismModel::q_de_rham(p)?;
    let rd = m.ring_mod_d()?;
    let q = RingElement::var(&rd, "q")?;
    let mut x = WittVector::teichmuller(&q, n - j);
    for _ in 0..j {
        x = x.verschiebung();
    }
    let emb = m.rn_product_embedding(&x)?;
    let qa = RingElement::var(m.ring(), "q")?;
    let mut pass = emb.len() == n;
    for (i, c) in emb.iter().enumerate() {
        let expect = if i + j < n {
            qa.pow(p.pow((n - 1 - j) as u32)).scale_int(&BigInt::from(p).pow(j as u32))
        } else {
            RingElement::zero(m.ring())
        };
        pass &= c == &expect.coerce(c.ring())?;
    }
    Ok(EmbeddingCheck { p, n, j, components: emb.iter().map(|c| c.to_string()).collect(), pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct HomCheck {
    pub preset: Preset,
    pub p: u64,
    pub n: usize,
    pub exhaustive: bool,
    pub pairs: usize,
    pub additive_failures: usize,
    pub multiplicative_failures: usize,
    pub pass: bool,
}

/// W_n(F_p) as digit vectors (x_0, ..., x_{n-1}).
pub fn all_witt_fp(model: &PrismModel, n: usize) -> Result<Vec<WittVector>> {
    let p = model.p as i64;
    let fp = model.ring_mod_d()?;
    (0..p.pow(n as u32))
        .map(|k| {
            let digits: Vec<i64> = (0..n).map(|i| (k / p.pow(i as u32)) % p).collect();
            WittVector::from_ints(&fp, &digits)
        })
        .collect()
}

fn same(a: &RnValue, b: &RingElement, model: &PrismModel, n: usize, prec: u32) -> Result<bool> {
    let ring = project(&model.d_n(n)?, prec)?;
    Ok(a.value.lift_into(&ring)? == b.lift_into(&ring)?)
}

fn hom_pair(model: &PrismModel, x: &WittVector, y: &WittVector, prec: Precision) -> Result<(bool, bool)> {
    let n = x.len();
    let (rx, ry) = (model.universal_map_rn(x, prec)?, model.universal_map_rn(y, prec)?);
    let rs = model.universal_map_rn(&x.add(y)?, prec)?;
    let rp = model.universal_map_rn(&x.mul(y)?, prec)?;
    let pr = rx.precision.min(ry.precision).min(rs.precision).min(rp.precision);
    let ring = project(&model.d_n(n)?, pr)?;
    let (a, b) = (rx.value.lift_into(&ring)?, ry.value.lift_into(&ring)?);
    Ok((same(&rs, &a.try_add(&b)?, model, n, pr)?, same(&rp, &a.try_mul(&b)?, model, n, pr)?))
}

/// r_n(x + y) = r_n(x) + r_n(y) and r_n(xy) = r_n(x) r_n(y), on all pairs of W_n(F_p) when
/// `samples` is None (crystalline only), otherwise on random pairs.
pub fn rn_hom_check<R: Rng>(model: &PrismModel, n: usize, samples: Option<usize>, rng: &mut R) -> Result<HomCheck> {
    let prec = Precision::for_level(model.p, n as u32);
    let pairs: Vec<(WittVector, WittVector)> = match samples {
        None => {
            let all = all_witt_fp(model, n)?;
            all.iter().flat_map(|x| all.iter().map(move |y| (x.clone(), y.clone()))).collect()
        }
        Some(k) => (0..k).map(|_| Ok((model.random_witt(n, rng)?, model.random_witt(n, rng)?))).collect::<Result<_>>()?,
    };
    let (mut add_bad, mut mul_bad) = (0, 0);
    for (x, y) in &pairs {
        let (a, m) = hom_pair(model, x, y, prec)?;
        add_bad += usize::from(!a);
        mul_bad += usize::from(!m);
    }
    Ok(HomCheck {
        preset: model.preset,
        p: model.p,
        n,
        exhaustive: samples.is_none(),
        pairs: pairs.len(),
        additive_failures: add_bad,
        multiplicative_failures: mul_bad,
        pass: add_bad == 0 && mul_bad == 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionCheck {
    pub p: u64,
    pub n: usize,
    pub domain: usize,
    pub image: usize,
    pub pass: bool,
}

/// r_n: W_n(F_p) → Z/p^n is a bijection.
pub fn crystalline_bijection_check(p: u64, n: usize) -> Result<BijectionCheck> {
    let m = PrismModel::crystalline(p)?;
    let all = all_witt_fp(&m, n)?;
    let mut seen = BTreeSet::new();
    for x in &all {
        let v = m.universal_map_rn(x, Precision::for_level(p, n as u32))?;
        seen.insert(v.value.as_integer().ok_or_else(|| Error::Invalid("non-constant value".into()))?);
    }
    let target = p.pow(n as u32) as usize;
    Ok(BijectionCheck { p, n, domain: all.len(), image: seen.len(), pass: all.len() == target && seen.len() == target })
}
