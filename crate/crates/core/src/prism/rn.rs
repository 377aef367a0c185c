//! The universal map r_n : W_n(A/d) -> A/d_n and its V-twist square.

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use super::model::{coeff_vector, quotient_mod, Preset, Precision, PrismModel};
use crate::algebra::{Exp, IntMatrixModPN, Ring, RingDescriptor, RingElement, Submodule, Zpn};
use crate::error::{Error, Result};
use crate::witt::WittVector;

/// A Z/p^N-lattice Z/p^N[q]/(g) with basis 1, q, ..., q^{dim-1} (dim = 1 without variables).
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    pub ring: Ring,
    pub zr: Zpn,
    pub dim: usize,
}

impl FiniteQuotient {
    pub fn new(ring: &Ring) -> Result<Self> {
        let m = ring.modulus().ok_or_else(|| Error::Unsupported("finite quotient needs Z/p^N coefficients".into()))?;
        let mut n = 0u32;
        let mut pw = BigInt::from(1);
        while &pw < m {
            pw *= ring.p;
            n += 1;
        }
        if &pw != m {
            return Err(Error::Unsupported(format!("modulus {m} is not a power of {}", ring.p)));
        }
        let dim = match ring.nvars() {
            0 => 1,
            1 => ring
                .relations
                .iter()
                .find(|r| r.var == 0)
                .map(|r| r.degree as usize)
                .ok_or_else(|| Error::Unsupported("variable without a monic relation".into()))?,
            _ => return Err(Error::Unsupported("finite quotients are univariate".into())),
        };
        Ok(FiniteQuotient { ring: ring.clone(), zr: Zpn::new(ring.p, n)?, dim })
    }

    pub fn to_vec(&self, x: &RingElement) -> Result<Vec<u128>> {
        coeff_vector(&x.lift_into(&self.ring)?, self.zr, self.dim)
    }

    pub fn from_vec(&self, v: &[u128]) -> Result<RingElement> {
        let mut acc = RingElement::zero(&self.ring);
        for (i, c) in v.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let powers: Vec<(&str, Exp)> = self.ring.vars.iter().map(|var| (var.name.as_str(), Exp::int(i as i64))).collect();
            acc = acc.try_add(&RingElement::monomial(&self.ring, &powers, BigInt::from(*c))?)?;
        }
        Ok(acc)
    }

    /// Matrix of multiplication by g (columns are g * basis_k).
    pub fn mul_matrix(&self, g: &RingElement) -> Result<IntMatrixModPN> {
        let g = g.lift_into(&self.ring)?;
        let mut m = IntMatrixModPN::zeros(self.zr, self.dim, self.dim);
        for k in 0..self.dim {
            let mut e = vec![0u128; self.dim];
            e[k] = 1;
            let col = self.to_vec(&g.try_mul(&self.from_vec(&e)?)?)?;
            for (i, c) in col.iter().enumerate() {
                m.set(i, k, *c);
            }
        }
        Ok(m)
    }
}

/// A value of r_n together with its certified p-adic precision.
#[derive(Clone, Debug)]
pub struct RnValue {
    pub value: RingElement,
    pub precision: u32,
    pub route: &'static str,
}

impl PrismModel {
    /// A/d as a carrier.
    pub fn ring_mod_d(&self) -> Result<Ring> {
        self.quotient(&self.d)
    }

    /// Witt vector over A/d from lifts in A.
    pub fn witt_from_lifts(&self, lifts: &[RingElement]) -> Result<WittVector> {
        let rd = self.ring_mod_d()?;
        WittVector::new(self.p, lifts.iter().map(|x| x.lift_into(&rd)).collect::<Result<Vec<_>>>()?)
    }

    fn ghost_lifts(&self, x: &WittVector) -> Result<Vec<RingElement>> {
        let lifted = x.map_coords(|c| c.lift_into(self.ring()))?;
        Ok(lifted.ghost())
    }

    /// Component i is φ^i(g_{n-1-i}) mod φ^i(d), g the ghost vector of lifted coordinates.
    pub fn rn_product_embedding(&self, x: &WittVector) -> Result<Vec<RingElement>> {
        let n = x.len();
        let g = self.ghost_lifts(x)?;
        (0..n)
            .map(|i| {
                let target = self.quotient(&self.phi_d(i)?)?;
                self.phi_iter(&g[n - 1 - i], i)?.coerce(&target)
            })
            .collect()
    }

    /// r_n(x) in A/d_n, computed by the preset's strategy.
    pub fn universal_map_rn(&self, x: &WittVector, precision: Precision) -> Result<RnValue> {
        match self.preset {
            Preset::Crystalline => self.rn_closed_form(x),
            Preset::QDeRham => self.rn_by_solver(x, precision.coeff),
            Preset::CharpPerfect => self.rn_charp(x),
            Preset::FreeOverUniversal => Err(Error::Unsupported("no solving strategy for r_n on the universal preset".into())),
        }
    }

    /// sum_j p^j x_j^{p^{n-1-j}} modulo p^n, with x_j lifted to A.
    pub fn rn_closed_form(&self, x: &WittVector) -> Result<RnValue> {
        let n = x.len();
        let target = modp_n(self.ring(), n as u32)?;
        let mut acc = RingElement::zero(&target);
        for (j, c) in x.coords().iter().enumerate() {
            let lift = c.lift_into(self.ring())?;
            let t = lift.pow(self.p.pow((n - 1 - j) as u32)).scale_int(&BigInt::from(self.p).pow(j as u32));
            acc = acc.try_add(&t.coerce(&target)?)?;
        }
        Ok(RnValue { value: acc, precision: n as u32, route: "closed-form" })
    }

    /// φ^{n-1} composed with the inverse of the canonical iso W_n(R) -> A/p^n, for R perfect.
    fn rn_charp(&self, x: &WittVector) -> Result<RnValue> {
        let n = x.len();
        let m = self.depth;
        let wide = RingDescriptor::quotient(
            RingDescriptor::padic_poly(RingDescriptor::integers(self.p), &["t"], m + n as u32 - 1),
            vec![(vec![Exp::int(0)], BigInt::from(self.p).pow(n as u32))],
        )
        .compile()?;
        let fp_wide = RingDescriptor::padic_poly(RingDescriptor::prime_field(self.p), &["t"], m + n as u32 - 1).compile()?;
        let mut acc = RingElement::zero(&wide);
        for (j, c) in x.coords().iter().enumerate() {
            // x_j^{1/p^{n-1}} in the perfect ring, then a coefficient-wise lift
            let root = c.lift_into(&fp_wide)?.scale_exponents(-(n as i32 - 1))?;
            let lift = root.lift_into(&wide)?;
            let t = lift.pow(self.p.pow((n - 1 - j) as u32)).scale_int(&BigInt::from(self.p).pow(j as u32));
            acc = acc.try_add(&t)?;
        }
        let back = acc.scale_exponents(n as i32 - 1)?;
        let target = modp_n(self.ring(), n as u32)?;
        Ok(RnValue { value: back.lift_into(&target)?, precision: n as u32, route: "perfect-inverse" })
    }

    /// Solve for y in A/[p^n]_q ⊗ Z/p^N mapping to the product embedding.
    fn rn_by_solver(&self, x: &WittVector, coeff: u32) -> Result<RnValue> {
        let n = x.len();
        let emb = self.rn_product_embedding(x)?;
        let dn = self.d_n(n)?;
        let b = FiniteQuotient::new(&quotient_mod(&dn, coeff)?)?;
        let targets: Vec<FiniteQuotient> =
            (0..n).map(|i| FiniteQuotient::new(&quotient_mod(&self.phi_d(i)?, coeff)?)).collect::<Result<_>>()?;
        let rows: usize = targets.iter().map(|t| t.dim).sum();
        let mut mat = IntMatrixModPN::zeros(b.zr, rows, b.dim);
        for k in 0..b.dim {
            let mut e = vec![0u128; b.dim];
            e[k] = 1;
            let basis_k = b.from_vec(&e)?;
            let mut off = 0;
            for t in &targets {
                for (i, c) in t.to_vec(&basis_k)?.iter().enumerate() {
                    mat.set(off + i, k, *c);
                }
                off += t.dim;
            }
        }
        let mut rhs = Vec::with_capacity(rows);
        for (t, c) in targets.iter().zip(&emb) {
            rhs.extend(t.to_vec(c)?);
        }
        let y = mat.howell_solve(&rhs)?;
        let ker = mat.kernel();
        let loss = ker.iter().flat_map(|v| v.iter()).filter(|c| **c != 0).map(|c| coeff - b.zr.val(*c)).max().unwrap_or(0);
        if loss >= coeff {
            return Err(Error::Depth(format!("solution undetermined at coefficient precision p^{coeff}")));
        }
        let prec = coeff - loss;
        let out = FiniteQuotient::new(&quotient_mod(&dn, prec)?)?;
        let value = b.from_vec(&y)?.lift_into(&out.ring)?;
        Ok(RnValue { value, precision: prec, route: "howell-solve" })
    }

    /// Random Witt vector over A/d with small lifted coordinates.
    pub fn random_witt<R: Rng>(&self, n: usize, rng: &mut R) -> Result<WittVector> {
        let rd = self.ring_mod_d()?;
        let mut coords = Vec::with_capacity(n);
        for _ in 0..n {
            let mut c = RingElement::zero(&rd);
            let nterms = rng.gen_range(0..3);
            for _ in 0..nterms {
                let coef = BigInt::from(rng.gen_range(-3i64..=3));
                let powers: Vec<(String, Exp)> = rd
                    .vars
                    .iter()
                    .map(|v| {
                        let den = v.cap.min(2);
                        (v.name.clone(), Exp::new(rng.gen_range(0..4i64), den, self.p))
                    })
                    .collect();
                let refs: Vec<(&str, Exp)> = powers.iter().map(|(s, e)| (s.as_str(), *e)).collect();
                c = c.try_add(&RingElement::monomial(&rd, &refs, coef)?)?;
            }
            coords.push(c);
        }
        WittVector::new(self.p, coords)
    }
}

/// A ⊗ Z/p^n for a carrier without relations.
fn modp_n(ring: &Ring, n: u32) -> Result<Ring> {
    RingDescriptor::quotient(ring.desc.clone(), vec![(vec![Exp::int(0); ring.nvars()], BigInt::from(ring.p).pow(n))]).compile()
}

/// Compare two values of A/d_n at the smaller of their precisions.
pub fn agree_mod(a: &RnValue, b: &RnValue) -> Result<bool> {
    let prec = a.precision.min(b.precision);
    let target = common_precision(a.value.ring(), prec)?;
    Ok(a.value.lift_into(&target)? == b.value.lift_into(&target)?)
}

fn common_precision(ring: &Ring, prec: u32) -> Result<Ring> {
    // replace the coefficient modulus by p^prec, keeping relations
    match &ring.desc {
        RingDescriptor::Quotient { base, generator } => match base.as_ref() {
            RingDescriptor::Quotient { base: inner, .. } => {
                let b2 = RingDescriptor::quotient(
                    inner.as_ref().clone(),
                    vec![(vec![Exp::int(0); ring.nvars()], BigInt::from(ring.p).pow(prec))],
                );
                RingDescriptor::quotient(b2, generator.clone()).compile()
            }
            _ => modp_n_desc(base, ring, prec),
        },
        _ => modp_n(ring, prec),
    }
}

fn modp_n_desc(base: &RingDescriptor, ring: &Ring, prec: u32) -> Result<Ring> {
    RingDescriptor::quotient(base.clone(), vec![(vec![Exp::int(0); ring.nvars()], BigInt::from(ring.p).pow(prec))]).compile()
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaSquareReport {
    pub preset: Preset,
    pub r: usize,
    pub unit: String,
    pub unit_is_unit: bool,
    /// log_p of the set of valid choices of u.
    pub ambiguity: u32,
    pub samples: usize,
    pub consistent: usize,
    pub precision: u32,
    pub pass: bool,
}

impl PrismModel {
    /// Find u with λ_{r+1}(V(1)) = u φ^r(d), then check λ_{r+1}(V x) = u φ^r(d) λ_r(x) on samples.
    pub fn lambda_square_check<R: Rng>(&self, r: usize, samples: usize, rng: &mut R) -> Result<LambdaSquareReport> {
        if !matches!(self.preset, Preset::Crystalline | Preset::QDeRham) {
            return Err(Error::Unsupported("the V-twist square is checked on crystalline and q-deRham presets".into()));
        }
        if r == 0 {
            return Err(Error::Invalid("level r must be positive".into()));
        }
        let prec_cfg = Precision::for_level(self.p, r as u32 + 1);
        let one = WittVector::one(&self.ring_mod_d()?, r);
        let top = self.universal_map_rn(&one.verschiebung(), prec_cfg)?;
        let phir = self.phi_d(r)?;
        let mut precision = top.precision;
        let fq = FiniteQuotient::new(&project(&self.d_n(r + 1)?, precision)?)?;
        let mulm = fq.mul_matrix(&phir)?;
        let rhs_vec = fq.to_vec(&top.value)?;
        // u is determined modulo the annihilator of φ^r(d); prefer the representative 1
        let mut unit_vec = vec![0u128; fq.dim];
        unit_vec[0] = 1;
        let u_vec = if mulm.mul_vec(&unit_vec) == rhs_vec { unit_vec } else { mulm.howell_solve(&rhs_vec)? };
        let ambiguity = Submodule::new(fq.zr, fq.dim, &mulm.kernel()).length();
        let u = fq.from_vec(&u_vec)?;
        let u_lift = u.lift_into(self.ring())?;
        let unit_is_unit = self.delta.is_unit(&u_lift);
        let mut consistent = 0;
        for k in 0..samples {
            let x = if k == 0 { WittVector::zero(&self.ring_mod_d()?, r) } else { self.random_witt(r, rng)? };
            let lhs = self.universal_map_rn(&x.verschiebung(), prec_cfg)?;
            let low = self.universal_map_rn(&x, prec_cfg)?;
            let prec = lhs.precision.min(low.precision).min(precision);
            precision = prec;
            let ring = project(&self.d_n(r + 1)?, prec)?;
            let rhs = u_lift.try_mul(&phir)?.try_mul(&low.value.lift_into(self.ring())?)?.coerce(&ring)?;
            if lhs.value.lift_into(&ring)? == rhs {
                consistent += 1;
            }
        }
        Ok(LambdaSquareReport {
            preset: self.preset,
            r,
            unit: u.to_string(),
            unit_is_unit,
            ambiguity,
            samples,
            consistent,
            precision,
            pass: unit_is_unit && consistent == samples,
        })
    }

    /// q -> 1 specialization square between q-deRham and crystalline r_n.
    pub fn specialization_square<R: Rng>(&self, n: usize, samples: usize, rng: &mut R) -> Result<usize> {
        if self.preset != Preset::QDeRham {
            return Err(Error::Unsupported("specialization starts from the q-deRham preset".into()));
        }
        let cris = PrismModel::crystalline(self.p)?;
        let fp = cris.ring_mod_d()?;
        let mut ok = 0;
        for _ in 0..samples {
            let x = self.random_witt(n, rng)?;
            let y = self.universal_map_rn(&x, Precision::for_level(self.p, n as u32))?;
            let xs = x.map_coords(|c| c.lift_into(self.ring())?.eval_var_at_one("q")?.as_integer().map(|v| RingElement::constant(&fp, v)).ok_or(Error::Invalid("q".into())))?;
            let z = cris.universal_map_rn(&xs, Precision::for_level(self.p, n as u32))?;
            let prec = y.precision.min(n as u32);
            let zmod = BigInt::from(self.p).pow(prec);
            let ys = y.value.lift_into(self.ring())?.eval_var_at_one("q")?.as_integer().unwrap_or_default();
            let zs = z.value.as_integer().unwrap_or_default();
            if num_integer::Integer::mod_floor(&(ys - zs), &zmod) == BigInt::from(0) {
                ok += 1;
            }
        }
        Ok(ok)
    }
}

/// A/(g) ⊗ Z/p^prec.
pub fn project(g: &RingElement, prec: u32) -> Result<Ring> {
    if g.ring().nvars() == 0 {
        return RingDescriptor::integers_mod(g.p(), BigInt::from(g.p()).pow(prec)).compile();
    }
    quotient_mod(g, prec)
}

/// Whether a submodule of the kernel is trivial (used in injectivity checks).
pub fn is_injective(m: &IntMatrixModPN) -> bool {
    Submodule::new(m.ring, m.cols, &m.kernel()).length() == 0
}

#[cfg(test)]
mod tests;
