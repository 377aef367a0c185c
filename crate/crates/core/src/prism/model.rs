//! Prism presets, φ-twisted products and the membership p ∈ (d, φ(d)).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::delta::{expand_at_one, q_integer, DeltaRing, DistinguishedCert, FrobeniusLift, UnitCriterion};
use crate::algebra::{generator_terms, quotient_ring, Exp, IntMatrixModPN, Ring, RingDescriptor, RingElement, Zpn};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "crystalline")]
    Crystalline,
    #[serde(rename = "q-deRham")]
    QDeRham,
    #[serde(rename = "free-over-universal")]
    FreeOverUniversal,
    #[serde(rename = "charp-perfect")]
    CharpPerfect,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Crystalline => "crystalline",
            Preset::QDeRham => "q-deRham",
            Preset::FreeOverUniversal => "free-over-universal",
            Preset::CharpPerfect => "charp-perfect",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "crystalline" | "cris" => Ok(Preset::Crystalline),
            "q-deRham" | "q-derham" | "qdr" => Ok(Preset::QDeRham),
            "free-over-universal" | "universal" => Ok(Preset::FreeOverUniversal),
            "charp-perfect" | "charp" => Ok(Preset::CharpPerfect),
            _ => Err(Error::Parse(format!("unknown preset {s}"))),
        }
    }
}

/// Coefficient precision p^coeff and q-adic/series cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub coeff: u32,
    pub series: u32,
}

impl Precision {
    pub fn for_level(p: u64, n: u32) -> Self {
        Precision { coeff: n + 2, series: 2 * p.pow(n) as u32 }
    }
}

#[derive(Clone, Debug)]
pub struct PrismModel {
    pub preset: Preset,
    pub p: u64,
    pub delta: DeltaRing,
    pub d: RingElement,
    /// Exponent cap for charp-perfect, δ-word depth for the universal preset.
    pub depth: u32,
}

impl PrismModel {
    /// (Z_p, (p)) with φ = id, modelled on Z.
    pub fn crystalline(p: u64) -> Result<Self> {
        let z = RingDescriptor::integers(p).compile()?;
        let delta = DeltaRing::from_lift(&z, FrobeniusLift::Identity, UnitCriterion::ConstantModP)?;
        Ok(PrismModel { preset: Preset::Crystalline, p, d: RingElement::from_int(&z, p as i64), delta, depth: 0 })
    }

    /// (Z_p[[q-1]], [p]_q) with φ(q) = q^p, modelled on Z[q].
    pub fn q_de_rham(p: u64) -> Result<Self> {
        let r = RingDescriptor::poly(RingDescriptor::integers(p), &["q"]).compile()?;
        let q = RingElement::var(&r, "q")?;
        let delta = DeltaRing::from_lift(&r, FrobeniusLift::Substitution(vec![q.pow(p)]), UnitCriterion::AtOneModP { var: "q".into() })?;
        Ok(PrismModel { preset: Preset::QDeRham, p, d: q_integer(&r, "q", p)?, delta, depth: 0 })
    }

    /// W(F_p[t^{1/p^m}]) with d = p, modelled on Z[t^{1/p^m}] with the monomial Frobenius.
    pub fn charp_perfect(p: u64, m: u32) -> Result<Self> {
        let r = RingDescriptor::padic_poly(RingDescriptor::integers(p), &["t"], m).compile()?;
        let delta = DeltaRing::from_lift(&r, FrobeniusLift::MonomialPower, UnitCriterion::ConstantModP)?;
        Ok(PrismModel { preset: Preset::CharpPerfect, p, d: RingElement::from_int(&r, p as i64), delta, depth: m })
    }

    /// The universal oriented prism truncated at δ-words of depth K, with `t_vars` free δ-variables.
    /// Variables d0..dK and tj_0..tj_K with φ(x_k) = x_k^p + p x_{k+1}; φ(x_K) = x_K^p.
    pub fn universal(p: u64, depth: u32, t_vars: usize) -> Result<Self> {
        let mut names: Vec<String> = (0..=depth).map(|k| format!("d{k}")).collect();
        for j in 0..t_vars {
            names.extend((0..=depth).map(|k| format!("t{j}_{k}")));
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let r = RingDescriptor::poly(RingDescriptor::integers(p), &refs).compile()?;
        let pb = BigInt::from(p);
        let mut images = Vec::new();
        for block in 0..=t_vars {
            for k in 0..=depth as usize {
                let idx = block * (depth as usize + 1) + k;
                let x = RingElement::var(&r, &names[idx])?;
                let mut img = x.pow(p);
                if k < depth as usize {
                    img = &img + &RingElement::var(&r, &names[idx + 1])?.scale_int(&pb);
                }
                images.push(img);
            }
        }
        let units = UnitCriterion::UniversalMonomial { d: "d0".into(), delta_d: "d1".into() };
        let delta = DeltaRing::from_lift(&r, FrobeniusLift::Substitution(images), units)?;
        Ok(PrismModel { preset: Preset::FreeOverUniversal, p, d: RingElement::var(&r, "d0")?, delta, depth })
    }

    pub fn from_preset(preset: Preset, p: u64) -> Result<Self> {
        match preset {
            Preset::Crystalline => Self::crystalline(p),
            Preset::QDeRham => Self::q_de_rham(p),
            Preset::CharpPerfect => Self::charp_perfect(p, 3),
            Preset::FreeOverUniversal => Self::universal(p, 2, 1),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.delta.ring
    }

    pub fn phi(&self, x: &RingElement) -> Result<RingElement> {
        self.delta.phi(x)
    }

    pub fn phi_iter(&self, x: &RingElement, k: usize) -> Result<RingElement> {
        self.delta.phi_iter(x, k)
    }

    /// φ^i(d).
    pub fn phi_d(&self, i: usize) -> Result<RingElement> {
        self.phi_iter(&self.d, i)
    }

    /// d_n = d φ(d) ... φ^{n-1}(d), with d_0 = 1.
    pub fn d_n(&self, n: usize) -> Result<RingElement> {
        let mut acc = RingElement::one(self.ring());
        for i in 0..n {
            acc = acc.try_mul(&self.phi_d(i)?)?;
        }
        Ok(acc)
    }

    /// A/(g) for g in A.
    pub fn quotient(&self, g: &RingElement) -> Result<Ring> {
        quotient_ring(g)
    }

    /// A/(g) ⊗ Z/p^N.
    pub fn quotient_mod(&self, g: &RingElement, coeff: u32) -> Result<Ring> {
        quotient_mod(g, coeff)
    }

    pub fn check_distinguished(&self, precision: u32) -> Result<(DistinguishedCert, DistinguishedCert)> {
        let phid = self.phi_d(1)?;
        Ok((self.delta.is_distinguished(&self.d, precision)?, self.delta.is_distinguished(&phid, precision)?))
    }

    /// Certificate that p lies in (d, φ(d)) in the truncated completion.
    pub fn membership_p(&self, precision: Precision) -> Result<MembershipCert> {
        let phid = self.phi_d(1)?;
        match self.preset {
            Preset::Crystalline | Preset::CharpPerfect => Ok(MembershipCert {
                holds: self.d == RingElement::from_int(self.ring(), self.p as i64),
                detail: "d = p".into(),
            }),
            Preset::FreeOverUniversal => {
                // φ(d) - d^p = p δ(d) with δ(d) a unit
                let lhs = phid.try_sub(&self.d.pow(self.p))?;
                let dd = self.delta.delta(&self.d)?;
                let holds = lhs == dd.scale_int(&BigInt::from(self.p)) && self.delta.is_unit(&dd);
                Ok(MembershipCert { holds, detail: "p = (φ(d) - d^p) δ(d)^{-1}".into() })
            }
            Preset::QDeRham => {
                let m = precision.series.max(2);
                let n = precision.coeff;
                let dser = expand_at_one(&self.d, "q", m)?;
                let pser = expand_at_one(&phid, "q", m)?;
                let zr = Zpn::new(self.p, n)?;
                let (dv, pv) = (coeff_vector(&dser, zr, m as usize)?, coeff_vector(&pser, zr, m as usize)?);
                let mm = m as usize;
                let mut mat = IntMatrixModPN::zeros(zr, mm, 2 * mm);
                for j in 0..mm {
                    for i in j..mm {
                        mat.set(i, j, dv[i - j]);
                        mat.set(i, mm + j, pv[i - j]);
                    }
                }
                let mut rhs = vec![0u128; mm];
                rhs[0] = self.p as u128 % zr.modulus();
                let holds = mat.howell_solve(&rhs).is_ok();
                Ok(MembershipCert { holds, detail: format!("solved a d + b φ(d) = p in Z/p^{n}[[q-1]] mod (q-1)^{m}") })
            }
        }
    }

    /// The quotient target A/d_n, with d_n recorded.
    pub fn phi_twist_product(&self, n: usize) -> Result<PhiProductQuotient> {
        if n == 0 || n > 6 {
            return Err(Error::ResourceCap(format!("level {n} outside 1..=6")));
        }
        let generator = self.d_n(n)?;
        if self.preset == Preset::QDeRham && generator != q_integer(self.ring(), "q", self.p.pow(n as u32))? {
            return Err(Error::Invalid("φ-twisted product differs from [p^n]_q".into()));
        }
        let ring = match self.preset {
            Preset::FreeOverUniversal => None,
            _ => Some(self.quotient(&generator)?),
        };
        Ok(PhiProductQuotient { level: n, generator, ring })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipCert {
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct PhiProductQuotient {
    pub level: usize,
    pub generator: RingElement,
    /// A/d_n, when the generator is monic in one variable.
    pub ring: Option<Ring>,
}

/// (carrier of g)/(g) ⊗ Z/p^N.
pub fn quotient_mod(g: &RingElement, coeff: u32) -> Result<Ring> {
    let ring = g.ring();
    let base = RingDescriptor::quotient(ring.desc.clone(), vec![(vec![Exp::int(0); ring.nvars()], BigInt::from(ring.p).pow(coeff))]);
    RingDescriptor::quotient(base, generator_terms(g)?).compile()
}

/// Residues of a univariate element as a coefficient vector of length `len`.
pub fn coeff_vector(x: &RingElement, zr: Zpn, len: usize) -> Result<Vec<u128>> {
    let mut v = vec![0u128; len];
    for (k, c) in x.raw_terms() {
        let i = k.first().copied().unwrap_or(0) as usize;
        if i >= len {
            return Err(Error::LengthMismatch(format!("degree {i} beyond {len}")));
        }
        let m = BigInt::from(zr.modulus());
        v[i] = num_integer::Integer::mod_floor(c, &m).to_u128().expect("reduced residue");
    }
    Ok(v)
}
