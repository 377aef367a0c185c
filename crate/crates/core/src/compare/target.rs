//! The target ⊕_{(a,P)} A/d_{n-u(a)} indexed by the de Rham–Witt basis, and the comparison map
//! into it built from r_m and the φ-twisted products.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{IntMatrixModPN, Ring, RingElement};
use crate::drw::{lz_basis, DrwSpace, Weight, WeightPartition};
use crate::error::{Error, Result};
use crate::prism::rn::{is_injective, FiniteQuotient};
use crate::prism::{agree_mod, Precision, Preset, PrismModel, RnValue};
use crate::witt::WittVector;

#[derive(Clone, Debug, Serialize)]
pub struct Summand {
    pub weight: Weight,
    pub partition: WeightPartition,
    pub u: u32,
    /// The summand is A/d_level with level = n - u.
    pub level: u32,
    pub generator: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OplusOplusModule {
    pub preset: Preset,
    pub p: u64,
    pub n: u32,
    pub vars: usize,
    pub degree: usize,
    pub summands: Vec<Summand>,
}

impl OplusOplusModule {
    /// Torsion exponents at one weight when every summand is Z/p^{level} (crystalline preset).
    pub fn torsion_at(&self, w: &Weight) -> Vec<u32> {
        let mut out: Vec<u32> = self.summands.iter().filter(|s| &s.weight == w).map(|s| s.level).collect();
        out.sort_unstable();
        out
    }
}

fn check_preset(model: &PrismModel) -> Result<()> {
    match model.preset {
        Preset::Crystalline | Preset::QDeRham => Ok(()),
        other => Err(Error::Unsupported(format!("φ^i(d) not known to be nonzerodivisors on the {} preset", other.name()))),
    }
}

/// One summand A/d_{n-u(a)} per basis element e(a, P) of W_nΩ^degree with weights up to `cap`.
pub fn target_decomposition(model: &PrismModel, n: u32, vars: usize, degree: usize, cap: i64) -> Result<OplusOplusModule> {
    check_preset(model)?;
    let space = DrwSpace::polynomial(model.p, vars)?;
    let mut generators: BTreeMap<u32, String> = BTreeMap::new();
    let mut summands = Vec::new();
    for e in lz_basis(&space, n, degree, cap)? {
        let u = e.weight.u();
        let level = n - u;
        if !generators.contains_key(&level) {
            generators.insert(level, model.d_n(level as usize)?.to_string());
        }
        summands.push(Summand { weight: e.weight, partition: e.partition, u, level, generator: generators[&level].clone() });
    }
    Ok(OplusOplusModule { preset: model.preset, p: model.p, n, vars, degree, summands })
}

/// e(x, a, P) ↦ (Π_{j=n-u}^{n-1} φ^j(d)) · r_{n-u}(x) ∈ A/d_n, placed in the (a, P) summand.
#[derive(Clone, Debug)]
pub struct ComparisonMap {
    pub model: PrismModel,
    pub target: OplusOplusModule,
    /// Indexed by u.
    pub twists: BTreeMap<u32, RingElement>,
}

pub fn comparison_map_build(model: &PrismModel, n: u32, vars: usize, degree: usize, cap: i64) -> Result<ComparisonMap> {
    let target = target_decomposition(model, n, vars, degree, cap)?;
    let mut twists = BTreeMap::new();
    for s in &target.summands {
        if !twists.contains_key(&s.u) {
            let mut t = RingElement::one(model.ring());
            for j in s.level..n {
                t = t.try_mul(&model.phi_d(j as usize)?)?;
            }
            twists.insert(s.u, t);
        }
    }
    Ok(ComparisonMap { model: model.clone(), target, twists })
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistCheck {
    pub u: u32,
    pub level: u32,
    pub twist: String,
    pub summands: usize,
    /// twist · d_level ≡ 0 mod d_n and the map is additive on samples.
    pub well_defined: bool,
    pub injective: bool,
    /// Image equals the d_level-torsion of A/d_n (checked for the crystalline preset).
    pub onto_torsion: Option<bool>,
    pub samples: usize,
    pub pass: bool,
}

impl ComparisonMap {
    fn n(&self) -> u32 {
        self.target.n
    }

    fn target_ring(&self, precision: u32) -> Result<Ring> {
        let dn = self.model.d_n(self.n() as usize)?;
        match self.model.preset {
            Preset::Crystalline => self.model.quotient(&dn),
            _ => self.model.quotient_mod(&dn, precision),
        }
    }

    /// The image of x ∈ W_{n-u}(A/d) in A/d_n.
    pub fn apply(&self, u: u32, x: &WittVector) -> Result<RnValue> {
        let twist = self.twists.get(&u).ok_or_else(|| Error::Invalid(format!("no summand with u = {u}")))?;
        if x.len() as u32 + u != self.n() {
            return Err(Error::LengthMismatch(format!("length {} for u = {u} at level {}", x.len(), self.n())));
        }
        let r = self.model.universal_map_rn(x, Precision::for_level(self.model.p, self.n()))?;
        let ring = self.target_ring(r.precision)?;
        let value = twist.try_mul(&r.value.lift_into(self.model.ring())?)?.coerce(&ring)?;
        Ok(RnValue { value, precision: r.precision, route: r.route })
    }

    pub fn check<R: Rng>(&self, samples: usize, rng: &mut R) -> Result<Vec<TwistCheck>> {
        let mut out = Vec::new();
        for (&u, twist) in &self.twists {
            let level = self.n() - u;
            let dl = self.model.d_n(level as usize)?;
            let dn = self.model.d_n(self.n() as usize)?;
            let kills = twist.try_mul(&dl)?.coerce(&self.model.quotient(&dn)?)?.is_zero();
            let (additive, injective, onto, count) = match self.model.preset {
                Preset::Crystalline => self.check_crystalline(u, level)?,
                _ => self.check_sampled(u, level, samples, rng)?,
            };
            let well_defined = kills && additive;
            let pass = well_defined && injective && onto.unwrap_or(true);
            out.push(TwistCheck {
                u,
                level,
                twist: twist.to_string(),
                summands: self.target.summands.iter().filter(|s| s.u == u).count(),
                well_defined,
                injective,
                onto_torsion: onto,
                samples: count,
                pass,
            });
        }
        Ok(out)
    }

    /// Exhaustive over W_level(F_p) ≅ Z/p^level.
    fn check_crystalline(&self, u: u32, level: u32) -> Result<(bool, bool, Option<bool>, usize)> {
        let p = self.model.p as i64;
        let fp = self.model.ring_mod_d()?;
        let size = p.pow(level);
        let modulus = p.pow(self.n());
        let as_int = |v: &RnValue| -> Result<i64> {
            let x = v.value.as_integer().ok_or_else(|| Error::Invalid("non-constant value".into()))?;
            Ok(residue(&x, modulus))
        };
        let one = as_int(&self.apply(u, &WittVector::from_integer(&fp, level as usize, 1)?)?)?;
        let mut images = Vec::new();
        let mut additive = true;
        for c in 0..size {
            let img = as_int(&self.apply(u, &WittVector::from_integer(&fp, level as usize, c)?)?)?;
            additive &= img == (c * one).rem_euclid(modulus);
            images.push(img);
        }
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let injective = sorted.len() == images.len();
        let torsion: Vec<i64> = (0..modulus).filter(|y| (y * size) % modulus == 0).collect();
        Ok((additive, injective, Some(sorted == torsion), size as usize))
    }

    /// Sampled over W_level(A/d): additivity, injectivity of the twist on A/d_level ⊗ Z/p^N, and
    /// nonvanishing on samples with r_level(x) ≠ 0.
    fn check_sampled<R: Rng>(&self, u: u32, level: u32, samples: usize, rng: &mut R) -> Result<(bool, bool, Option<bool>, usize)> {
        let prec = Precision::for_level(self.model.p, self.n());
        let src = FiniteQuotient::new(&self.model.quotient_mod(&self.model.d_n(level as usize)?, prec.coeff)?)?;
        let dst = FiniteQuotient::new(&self.model.quotient_mod(&self.model.d_n(self.n() as usize)?, prec.coeff)?)?;
        let twist = &self.twists[&u];
        let mut mat = IntMatrixModPN::zeros(dst.zr, dst.dim, src.dim);
        for k in 0..src.dim {
            let mut e = vec![0u128; src.dim];
            e[k] = 1;
            let img = dst.to_vec(&twist.try_mul(&src.from_vec(&e)?.lift_into(self.model.ring())?)?.coerce(&dst.ring)?)?;
            for (i, c) in img.iter().enumerate() {
                mat.set(i, k, *c);
            }
        }
        let mut injective = is_injective(&mat);
        let mut additive = true;
        for _ in 0..samples {
            let x = self.model.random_witt(level as usize, rng)?;
            let y = self.model.random_witt(level as usize, rng)?;
            let sum = self.apply(u, &x.add(&y)?)?;
            let (fx, fy) = (self.apply(u, &x)?, self.apply(u, &y)?);
            let common = sum.precision.min(fx.precision).min(fy.precision);
            let both = RnValue { value: fx.value.try_add(&fy.value.lift_into(fx.value.ring())?)?, precision: common, route: fx.route };
            additive &= agree_mod(&sum, &both)?;
            let rx = self.model.universal_map_rn(&x, prec)?;
            if !rx.value.is_zero() {
                injective &= !fx.value.is_zero();
            }
        }
        Ok((additive, injective, None, samples))
    }
}

fn residue(x: &BigInt, m: i64) -> i64 {
    num_integer::Integer::mod_floor(x, &BigInt::from(m)).to_i64().expect("reduced residue")
}
