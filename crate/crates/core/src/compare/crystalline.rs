//! W_nΩ^i_a of F_p[T] against H^i of the de Rham complex of (Z/p^n)[T] at weight p^n a.

use serde::Serialize;

use super::complex::{crystalline_backend, de_rham_basis, CochainComplex};
use super::target::target_decomposition;
use crate::algebra::{IntMatrixModPN, Submodule};
use crate::drw::cartier::{images, kernel, Component};
use crate::drw::forms::lz_form;
use crate::drw::{enumerate_weights, Base, DrwOp, DrwSpace, Rewriter, Weight};
use crate::error::{Error, Result};
use crate::prism::PrismModel;

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// Every basis image is a cocycle.
    pub cocycles: bool,
    /// p^{n-u} times every basis image is a coboundary.
    pub well_defined: bool,
    /// {y : M y ∈ B} = p^{n-u} (Z/p^n)^N.
    pub injective: bool,
    /// im M + B = Z.
    pub surjective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareEntry {
    pub weight: Weight,
    pub target_weight: Vec<i64>,
    pub degree: usize,
    pub lhs_rank: u32,
    pub rhs_rank: u32,
    pub lhs_torsion: Vec<u32>,
    pub rhs_torsion: Vec<u32>,
    pub iso: bool,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct AcyclicEntry {
    pub weight: Weight,
    pub acyclic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrystallineComparison {
    pub p: u64,
    pub n: u32,
    pub vars: usize,
    pub cap: i64,
    pub entries: Vec<CompareEntry>,
    /// W_nΩ^•_a has no cohomology at non-integral a.
    pub acyclic: Vec<AcyclicEntry>,
    pub failures: usize,
    pub pass: bool,
}

/// The matrix of e(1, a, P) ↦ F^n ω_P = Σ c_J T^{p^n a} dlog T_J in the monomial de Rham basis.
fn comparison_matrix(c: &CochainComplex, target: &[i64], w: &Weight, parts: &[crate::drw::WeightPartition], i: usize) -> Result<IntMatrixModPN> {
    let rows = de_rham_basis(target, i);
    let mut m = IntMatrixModPN::zeros(c.zr, rows.len(), parts.len());
    for (j, part) in parts.iter().enumerate() {
        for (mask, coef) in lz_form(w, part)? {
            let r = rows.binary_search(&mask).map_err(|_| Error::Invalid(format!("form outside Ω^{i} at weight {target:?}")))?;
            m.set(r, j, c.zr.reduce_i128(coef));
        }
    }
    Ok(m)
}

fn certify(c: &CochainComplex, m: &IntMatrixModPN, i: usize, u: u32, n: u32) -> Certificate {
    let zr = c.zr;
    let (z, b) = (c.cycles(i), c.boundaries(i));
    let full = Submodule::full(zr, m.cols);
    let img = full.image(m);
    let torsion_gen = zr.pow_p(n.saturating_sub(u).min(n));
    let cocycles = z.contains_module(&img);
    let well_defined = b.contains_module(&img.scale(torsion_gen));
    let expected_kernel = full.scale(torsion_gen);
    let pre = full.preimage_within(m, &b);
    let injective = pre.contains_module(&expected_kernel) && expected_kernel.contains_module(&pre);
    let surjective = img.sum(&b).contains_module(&z);
    Certificate { cocycles, well_defined, injective, surjective }
}

fn acyclic_at(space: &DrwSpace, n: u32, w: &Weight, rw: &mut Rewriter) -> Result<bool> {
    let comps: Vec<Component> = (0..=space.k).map(|i| Component::new(*space, n, w.clone(), i)).collect();
    for i in 0..=space.k {
        let z = match comps.get(i + 1) {
            Some(next) => kernel(&comps[i], next, &[DrwOp::D], rw)?,
            None => comps[i].full()?,
        };
        let b = match i {
            0 => comps[i].span(&[])?,
            _ => comps[i].span(&images(&comps[i - 1], &comps[i], &[DrwOp::D], 1, rw)?)?,
        };
        if z.length() != b.length() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per weight a with entries at most `cap` and every degree, certify W_nΩ^i_a ≅ H^i_{p^n a}.
pub fn compare_crystalline(p: u64, vars: usize, n: u32, cap: i64) -> Result<CrystallineComparison> {
    let model = PrismModel::crystalline(p)?;
    let space = DrwSpace::new(p, vars, Base::Polynomial)?;
    let scale = (p as i64).checked_pow(n).and_then(|q| q.checked_mul(cap)).ok_or_else(|| Error::ResourceCap("weight cap overflow".into()))?;
    let backend = crystalline_backend(p, vars, n, scale)?;
    let targets = (0..=vars).map(|i| target_decomposition(&model, n, vars, i, cap)).collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::new();
    let mut acyclic = Vec::new();
    let mut rw = Rewriter::from_env();
    for w in enumerate_weights(p, vars, n, cap, Base::Polynomial)? {
        let target_weight = w.scale(n as i32).numerators().to_vec();
        let c = &backend.complex.pieces[&target_weight];
        for (i, tgt) in targets.iter().enumerate() {
            let parts: Vec<_> = tgt.summands.iter().filter(|s| s.weight == w).map(|s| s.partition.clone()).collect();
            let m = comparison_matrix(c, &target_weight, &w, &parts, i)?;
            let certificate = certify(c, &m, i, w.u(), n);
            let h = c.cohomology(i)?;
            let lhs_torsion = tgt.torsion_at(&w);
            let lhs_rank = lhs_torsion.iter().sum();
            let iso = certificate.cocycles
                && certificate.well_defined
                && certificate.injective
                && certificate.surjective
                && lhs_rank == h.length
                && lhs_torsion == h.invariants;
            entries.push(CompareEntry {
                weight: w.clone(),
                target_weight: target_weight.clone(),
                degree: i,
                lhs_rank,
                rhs_rank: h.length,
                lhs_torsion,
                rhs_torsion: h.invariants,
                iso,
                certificate,
            });
        }
        if !w.is_integral() && w.u() < n {
            acyclic.push(AcyclicEntry { weight: w.clone(), acyclic: acyclic_at(&space, n, &w, &mut rw)? });
        }
    }
    let failures = entries.iter().filter(|e| !e.iso).count() + acyclic.iter().filter(|a| !a.acyclic).count();
    Ok(CrystallineComparison { p, n, vars, cap, entries, acyclic, failures, pass: failures == 0 })
}
