//! H^i(C ⊗ Q) ≅ H^i(C) ⊗ Q for complexes of free Z/p^N-modules and Q = Z/p^M, under the
//! vanishing of Tor_1(H^i(C), Q).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::complex::CochainComplex;
use crate::algebra::{IntMatrixModPN, Submodule, Zpn};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeDegree {
    pub degree: usize,
    pub cohomology: Vec<u32>,
    /// Length of Tor_1^{Z/p^N}(H^i, Z/p^M), from the periodic resolution of each cyclic summand.
    pub tor_length: u32,
    pub reduced_cohomology: Vec<u32>,
    /// Invariants of H^i ⊗ Z/p^M.
    pub tensored: Vec<u32>,
    /// H^i(C) ⊗ Q → H^i(C ⊗ Q) induced by reducing cocycles is an isomorphism.
    pub natural_iso: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeReport {
    pub p: u64,
    pub from: u32,
    pub to: u32,
    pub degrees: Vec<BaseChangeDegree>,
    pub hypothesis: bool,
    pub conclusion: bool,
    /// Hypothesis fails: the statement does not apply (not a failure).
    pub not_applicable: bool,
    pub pass: bool,
}

fn diag(zr: Zpn, exps: &[u32]) -> IntMatrixModPN {
    let mut m = IntMatrixModPN::zeros(zr, exps.len(), exps.len());
    for (i, e) in exps.iter().enumerate() {
        m.set(i, i, zr.pow_p(*e));
    }
    m
}

/// Tor_1 of ⊕ Z/p^{e_j} against Z/p^m over Z/p^N: homology of
/// F ─p^{N-e}→ F ─p^e→ F after reduction mod p^m.
fn tor_length(zr: Zpn, inv: &[u32], m: u32) -> Result<u32> {
    if inv.is_empty() {
        return Ok(0);
    }
    let zq = Zpn::new(zr.p, m)?;
    let outer = diag(zq, inv);
    let inner = diag(zq, &inv.iter().map(|e| zr.n - e).collect::<Vec<_>>());
    let ker = Submodule::new(zq, inv.len(), &outer.kernel());
    let im = Submodule::full(zq, inv.len()).image(&inner);
    Ok(ker.length() - im.length())
}

fn reduce_vec(v: &[u128], zq: Zpn) -> Vec<u128> {
    v.iter().map(|x| x % zq.modulus()).collect()
}

/// Verify the base change Z/p^N → Z/p^m degree by degree.
pub fn base_change_check(c: &CochainComplex, m: u32) -> Result<BaseChangeReport> {
    let zr = c.zr;
    if m == 0 || m > zr.n {
        return Err(Error::Invalid(format!("Z/p^{} → Z/p^{m} is not a quotient map", zr.n)));
    }
    let cq = c.reduce(m)?;
    let mut degrees = Vec::new();
    for i in 0..=c.top() {
        let h = c.cohomology(i)?;
        let hq = cq.cohomology(i)?;
        let tensored: Vec<u32> = h.invariants.iter().map(|e| (*e).min(m)).collect();
        // images of cocycles of C generate H^i(C) ⊗ Q inside H^i(C ⊗ Q)
        let zq = cq.zr;
        let reduced: Vec<Vec<u128>> = c.cycles(i).basis().iter().map(|v| reduce_vec(v, zq)).collect();
        let img = Submodule::new(zq, c.dims[i], &reduced);
        let (zc, bc) = (cq.cycles(i), cq.boundaries(i));
        let onto = img.sum(&bc).contains_module(&zc);
        let image_length = img.sum(&bc).length() - bc.length();
        let tensored_length: u32 = tensored.iter().sum();
        let natural_iso = onto && image_length == tensored_length && hq.invariants == tensored.iter().copied().filter(|e| *e > 0).collect::<Vec<_>>();
        degrees.push(BaseChangeDegree {
            degree: i,
            tor_length: tor_length(zr, &h.invariants, m)?,
            cohomology: h.invariants,
            reduced_cohomology: hq.invariants,
            tensored,
            natural_iso,
        });
    }
    let hypothesis = degrees.iter().all(|d| d.tor_length == 0);
    let conclusion = degrees.iter().all(|d| d.natural_iso);
    Ok(BaseChangeReport {
        p: zr.p,
        from: zr.n,
        to: m,
        hypothesis,
        conclusion,
        not_applicable: !hypothesis,
        pass: !hypothesis || conclusion,
        degrees,
    })
}

fn random_unimodular<R: Rng>(zr: Zpn, dim: usize, rng: &mut R) -> (IntMatrixModPN, IntMatrixModPN) {
    // product of elementary matrices and its inverse
    let mut a = IntMatrixModPN::zeros(zr, dim, dim);
    let mut inv = IntMatrixModPN::zeros(zr, dim, dim);
    for i in 0..dim {
        a.set(i, i, 1);
        inv.set(i, i, 1);
    }
    if dim < 2 {
        return (a, inv);
    }
    for _ in 0..3 * dim {
        let (i, j) = (rng.gen_range(0..dim), rng.gen_range(0..dim));
        if i == j {
            continue;
        }
        let s = rng.gen_range(1..zr.modulus());
        let mut e = IntMatrixModPN::zeros(zr, dim, dim);
        let mut einv = IntMatrixModPN::zeros(zr, dim, dim);
        for k in 0..dim {
            e.set(k, k, 1);
            einv.set(k, k, 1);
        }
        e.set(i, j, s);
        einv.set(i, j, zr.neg(s));
        a = e.mul(&a);
        inv = inv.mul(&einv);
    }
    (a, inv)
}

/// A complex over Z/p^N whose cohomology is free: sums of Z/p^N in a single degree and of
/// Z/p^N ─unit→ Z/p^N, conjugated by random changes of basis.
pub fn free_cohomology_complex<R: Rng>(zr: Zpn, top: usize, rng: &mut R) -> Result<CochainComplex> {
    let mut free = vec![0usize; top + 1];
    let mut acyclic = vec![0usize; top];
    for f in free.iter_mut() {
        *f = rng.gen_range(0..=2);
    }
    for a in acyclic.iter_mut() {
        *a = rng.gen_range(0..=2);
    }
    // C^i = free_i ⊕ (targets of acyclic_{i-1}) ⊕ (sources of acyclic_i)
    let dims: Vec<usize> = (0..=top).map(|i| free[i] + if i > 0 { acyclic[i - 1] } else { 0 } + acyclic.get(i).copied().unwrap_or(0)).collect();
    let changes: Vec<(IntMatrixModPN, IntMatrixModPN)> = dims.iter().map(|d| random_unimodular(zr, *d, rng)).collect();
    let mut maps = Vec::new();
    for i in 0..top {
        let mut m = IntMatrixModPN::zeros(zr, dims[i + 1], dims[i]);
        let src_off = free[i] + if i > 0 { acyclic[i - 1] } else { 0 };
        let dst_off = free[i + 1];
        for k in 0..acyclic[i] {
            let unit = loop {
                let u = rng.gen_range(1..zr.modulus());
                if zr.is_unit(u) {
                    break u;
                }
            };
            m.set(dst_off + k, src_off + k, unit);
        }
        // g_{i+1} m g_i^{-1}
        maps.push(changes[i + 1].0.mul(&m).mul(&changes[i].1));
    }
    CochainComplex::new(zr, dims, maps)
}

/// Z/p^N ─p^e→ Z/p^N: cohomology Z/p^e in both degrees, so Tor_1 against Z/p^m is nonzero when
/// 0 < e < N and m < N.
pub fn torsion_complex(zr: Zpn, e: u32) -> Result<CochainComplex> {
    let mut m = IntMatrixModPN::zeros(zr, 1, 1);
    m.set(0, 0, zr.pow_p(e));
    CochainComplex::new(zr, vec![1, 1], vec![m])
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeSuite {
    pub seed: u64,
    pub reports: Vec<BaseChangeReport>,
    pub applicable: usize,
    pub conclusion_holds: usize,
    pub detector: BaseChangeReport,
    pub detector_fires: bool,
    pub pass: bool,
}

/// `count` random complexes with free cohomology over Z/p^N (N ≤ 4, p ∈ {2, 3}) and random
/// quotients, plus the violating instance Z/4 ─2→ Z/4 with Q = Z/2.
pub fn base_change_suite(count: usize, seed: u64) -> Result<BaseChangeSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for _ in 0..count {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let zr = Zpn::new(p, rng.gen_range(1..=4))?;
        let c = free_cohomology_complex(zr, rng.gen_range(1..=3), &mut rng)?;
        reports.push(base_change_check(&c, rng.gen_range(1..=zr.n))?);
    }
    let detector = base_change_check(&torsion_complex(Zpn::new(2, 2)?, 1)?, 1)?;
    let applicable = reports.iter().filter(|r| r.hypothesis).count();
    let conclusion_holds = reports.iter().filter(|r| r.hypothesis && r.conclusion).count();
    let detector_fires = detector.not_applicable;
    let pass = applicable == count && conclusion_holds == count && detector_fires;
    Ok(BaseChangeSuite { seed, reports, applicable, conclusion_holds, detector, detector_fires, pass })
}
