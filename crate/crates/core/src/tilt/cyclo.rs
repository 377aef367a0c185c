//! Linear algebra for the cyclotomic model: θ_r on the truncated subring Z/p^P[q^{1/p^s}]
//! through ghost components, preimages and kernels.

use num_bigint::BigInt;
use serde::Serialize;

use super::{cyclotomic_prime_power, TiltKind, TiltModel};
use crate::algebra::{Exp, IntMatrixModPN, RingDescriptor, RingElement, Submodule, Zpn};
use crate::error::{Error, Result};
use crate::prism::model::quotient_mod;
use crate::prism::FiniteQuotient;
use crate::witt::WittVector;

/// Outcome of comparing ker θ_r with the ideal generated by ξ_r in a truncated module.
#[derive(Clone, Debug, Serialize)]
pub struct KernelCert {
    pub r: usize,
    /// Coefficient precision of the comparison.
    pub precision: u32,
    /// Working precision at which the reduced kernel fell inside the ideal.
    pub stabilized_at: Option<u32>,
    pub domain_rank: usize,
    pub kernel_length: u32,
    pub ideal_length: u32,
    pub generator_in_kernel: bool,
    pub equal: bool,
}

impl TiltModel {
    fn require_cyclo(&self) -> Result<()> {
        if self.kind != TiltKind::Cyclo {
            return Err(Error::Unsupported("operation is specific to the cyclotomic model".into()));
        }
        Ok(())
    }

    /// A ⊗ Z/p^prec as a finite free module.
    pub fn target_mod(&self, prec: u32) -> Result<FiniteQuotient> {
        let zx = RingDescriptor::poly(RingDescriptor::integers(self.p), &["X"]).compile()?;
        let phi = cyclotomic_prime_power(&zx, "X", self.p, self.cap)?;
        FiniteQuotient::new(&quotient_mod(&phi, prec)?)
    }

    /// q^{k/p^level}.
    pub fn basis_monomial(&self, k: usize, level: u32) -> Result<RingElement> {
        RingElement::monomial(self.ainf_ring(), &[("q", Exp::new(k as i64, level, self.p))], BigInt::from(1))
    }

    /// Matrix of f -> (θ(f), θ(φ f), ..., θ(φ^{r-1} f)) on the basis q^{k/p^level}, k < dim.
    pub fn ghost_theta_matrix(&self, r: usize, level: u32, dim: usize, prec: u32) -> Result<IntMatrixModPN> {
        self.require_cyclo()?;
        if level > self.cap {
            return Err(Error::Depth(format!("level {level} beyond cap {}", self.cap)));
        }
        let fq = self.target_mod(prec)?;
        let mut m = IntMatrixModPN::zeros(fq.zr, r * fq.dim, dim);
        for k in 0..dim {
            let f = self.basis_monomial(k, level)?;
            for i in 0..r {
                let col = fq.to_vec(&self.theta_of_frobenius(&f, i as u32)?)?;
                for (row, c) in col.iter().enumerate() {
                    m.set(i * fq.dim + row, k, *c);
                }
            }
        }
        Ok(m)
    }

    /// Some f in Z[q^{1/p^level}] of q-degree < dim/p^level with ghost(θ_r(f)) = ghost(w) mod p^prec.
    pub fn theta_preimage(&self, w: &WittVector, level: u32, dim: usize, prec: u32) -> Result<RingElement> {
        let r = w.len();
        let m = self.ghost_theta_matrix(r, level, dim, prec)?;
        let fq = self.target_mod(prec)?;
        let mut rhs = Vec::with_capacity(r * fq.dim);
        for g in w.ghost() {
            rhs.extend(fq.to_vec(&g)?);
        }
        let y = m.howell_solve(&rhs)?;
        let mut f = RingElement::zero(self.ainf_ring());
        for (k, c) in y.iter().enumerate() {
            if *c != 0 {
                f = f.try_add(&self.basis_monomial(k, level)?.scale_int(&BigInt::from(*c)))?;
            }
        }
        Ok(f)
    }

    /// Compare ker θ_r with (g) inside Z/p^n[z]_{<dim}, z = q^{1/p^level}.
    /// The kernel is computed modulo p^M for growing M until its image modulo p^n stabilizes.
    pub fn theta_kernel_vs_ideal(&self, g: &RingElement, r: usize, level: u32, dim: usize, n: u32) -> Result<KernelCert> {
        self.require_cyclo()?;
        let zn = Zpn::new(self.p, n)?;
        // the ideal (g) truncated to the domain: z^j g with deg < dim
        let gv = self.level_coeffs(g, level, zn)?;
        let deg = gv.iter().rposition(|c| *c != 0).unwrap_or(0);
        let mut ideal_gens = Vec::new();
        for j in 0..dim.saturating_sub(deg) {
            let mut v = vec![0u128; dim];
            for (i, c) in gv.iter().enumerate() {
                if i + j < dim {
                    v[i + j] = *c;
                }
            }
            ideal_gens.push(v);
        }
        let ideal = Submodule::new(zn, dim, &ideal_gens);
        // ker mod p^M reduced to p^n shrinks with M and always contains the ideal,
        // so once the two agree they agree for every larger M
        let mut stabilized_at = None;
        let mut kernel = Submodule::full(zn, dim);
        for big in n..=n + 8 {
            let m = self.ghost_theta_matrix(r, level, dim, big)?;
            let gens: Vec<Vec<u128>> = m.kernel().iter().map(|v| v.iter().map(|c| c % zn.modulus()).collect()).collect();
            kernel = Submodule::new(zn, dim, &gens);
            if ideal.contains_module(&kernel) {
                stabilized_at = Some(big);
                break;
            }
        }
        let g_ghosts = (0..r as u32).map(|i| self.theta_of_frobenius(g, i)).collect::<Result<Vec<_>>>()?;
        let generator_in_kernel = g_ghosts.iter().all(|x| x.is_zero());
        let equal = stabilized_at.is_some() && kernel.contains_module(&ideal);
        Ok(KernelCert {
            r,
            precision: n,
            stabilized_at,
            domain_rank: dim,
            kernel_length: kernel.length(),
            ideal_length: ideal.length(),
            generator_in_kernel,
            equal,
        })
    }

    /// Coefficients of f in the basis q^{k/p^level}, reduced into zr.
    pub fn level_coeffs(&self, f: &RingElement, level: u32, zr: Zpn) -> Result<Vec<u128>> {
        let shift = self.cap.checked_sub(level).ok_or_else(|| Error::Depth("level beyond cap".into()))?;
        let step = self.p.pow(shift) as i64;
        let mut out: Vec<u128> = Vec::new();
        let m = BigInt::from(zr.modulus());
        for (k, c) in f.raw_terms() {
            if k[0] % step != 0 {
                return Err(Error::Depth(format!("exponent finer than p^-{level}")));
            }
            let idx = (k[0] / step) as usize;
            if out.len() <= idx {
                out.resize(idx + 1, 0);
            }
            let r = num_integer::Integer::mod_floor(c, &m);
            out[idx] = u128::try_from(r).expect("reduced residue");
        }
        Ok(out)
    }
}

/// ξ = 1 + q^{1/p} + ... + q^{(p-1)/p} in the cyclotomic model.
pub fn cyclo_xi(model: &TiltModel) -> Result<RingElement> {
    let mut acc = RingElement::zero(model.ainf_ring());
    for i in 0..model.p {
        acc = acc.try_add(&model.basis_monomial(i as usize, 1)?)?;
    }
    Ok(acc)
}
