//! Weight components as Z/p^m-modules, iterated cycles and boundaries, the higher Cartier map and
//! the canonical filtration.

use serde::Serialize;

use super::basis::{BasisKey, DrwElement, DrwSpace};
use super::forms::{d_integral, dlog_basis, to_coords, FormVec};
use super::normal::Rewriter;
use super::ops::DrwOp;
use super::weight::{enumerate_weights, partitions_of_degree, Weight, WeightPartition};
use crate::algebra::{IntMatrixModPN, Submodule, Zpn};
use crate::error::Result;

/// W_rΩ^i_a ≅ (Z/p^m)^N with m = r - u(a) and N = |P_a in degree i|.
#[derive(Clone, Debug)]
pub struct Component {
    pub space: DrwSpace,
    pub level: u32,
    pub weight: Weight,
    pub degree: usize,
    pub parts: Vec<WeightPartition>,
}

impl Component {
    pub fn new(space: DrwSpace, level: u32, weight: Weight, degree: usize) -> Self {
        let parts = if level > weight.u() { partitions_of_degree(&weight, space.base, degree) } else { Vec::new() };
        Component { space, level, weight, degree, parts }
    }

    pub fn m(&self) -> u32 {
        self.level.saturating_sub(self.weight.u())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn length(&self) -> u32 {
        self.m() * self.parts.len() as u32
    }

    pub fn zr(&self) -> Result<Zpn> {
        Zpn::new(self.space.p, self.m().max(1))
    }

    pub fn basis_element(&self, j: usize, c: i128) -> Result<DrwElement> {
        let mut x = DrwElement::zero(self.space, self.level, self.degree);
        x.add_term(BasisKey::new(self.weight.clone(), self.parts[j].clone()), c)?;
        Ok(x)
    }

    /// Coefficients of x on this component.
    pub fn coords(&self, x: &DrwElement) -> Vec<u128> {
        self.parts
            .iter()
            .map(|pt| x.terms.get(&BasisKey::new(self.weight.clone(), pt.clone())).copied().unwrap_or(0))
            .collect()
    }

    pub fn full(&self) -> Result<Submodule> {
        Ok(Submodule::full(self.zr()?, self.parts.len()))
    }

    pub fn span(&self, vecs: &[Vec<u128>]) -> Result<Submodule> {
        Ok(Submodule::new(self.zr()?, self.parts.len(), vecs))
    }
}

fn apply_all(x: &DrwElement, ops: &[DrwOp], rw: &mut Rewriter) -> Result<DrwElement> {
    let mut y = x.clone();
    for op in ops {
        y = y.apply(*op, rw)?;
    }
    Ok(y)
}

/// Images of c·(basis of `src`) under the operator word, read on `dst`.
pub fn images(src: &Component, dst: &Component, ops: &[DrwOp], c: i128, rw: &mut Rewriter) -> Result<Vec<Vec<u128>>> {
    (0..src.parts.len()).map(|j| Ok(dst.coords(&apply_all(&src.basis_element(j, c)?, ops, rw)?))).collect()
}

/// ker of the operator word from `src` to `dst`, as a submodule of `src`.
pub fn kernel(src: &Component, dst: &Component, ops: &[DrwOp], rw: &mut Rewriter) -> Result<Submodule> {
    if src.is_zero() {
        return src.full();
    }
    let zr = src.zr()?;
    let (ms, mt) = (src.m(), dst.m());
    let cols = images(src, dst, ops, 1, rw)?;
    let mut mat = IntMatrixModPN::zeros(zr, dst.parts.len(), src.parts.len());
    let p = src.space.p as u128;
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            // embed Z/p^{mt} into Z/p^{ms}
            let e = if mt <= ms { v * p.pow(ms - mt) } else { v / p.pow(mt - ms) };
            mat.set(i, j, e % zr.modulus());
        }
    }
    let gens = mat.kernel();
    Ok(Submodule::new(zr, src.parts.len(), &gens))
}

/// Iterated boundaries and cycles B_1..B_n, Z_1..Z_n of Ω^i_{F_p[T]} at an integral weight.
#[derive(Clone, Debug, Serialize)]
pub struct CyclesBoundaries {
    pub weight: Weight,
    pub degree: usize,
    pub rank: usize,
    pub boundaries: Vec<u32>,
    pub cycles: Vec<u32>,
    /// ker d = B_1 + C^{-1}(Ω_{c/p}).
    pub cartier_consistent: bool,
    #[serde(skip)]
    pub b_modules: Vec<Submodule>,
    #[serde(skip)]
    pub z_modules: Vec<Submodule>,
}

fn f_p(space: &DrwSpace) -> Result<Zpn> {
    Zpn::new(space.p, 1)
}

fn classical_d_image(space: &DrwSpace, c: &Weight, i: usize) -> Result<Submodule> {
    let zr = f_p(space)?;
    let dst = dlog_basis(c, space.base, i);
    if i == 0 {
        return Ok(Submodule::zero(zr, dst.len()));
    }
    let gens = dlog_basis(c, space.base, i - 1)
        .iter()
        .map(|m| Ok(to_coords(&d_integral(&c.integral_lift(), &FormVec::from([(*m, 1)])), &dst)?.iter().map(|x| zr.reduce_i128(*x)).collect()))
        .collect::<Result<Vec<Vec<u128>>>>()?;
    Ok(Submodule::new(zr, dst.len(), &gens))
}

fn classical_d_kernel(space: &DrwSpace, c: &Weight, i: usize) -> Result<Submodule> {
    let zr = f_p(space)?;
    let src = dlog_basis(c, space.base, i);
    let dst = dlog_basis(c, space.base, i + 1);
    let mut mat = IntMatrixModPN::zeros(zr, dst.len(), src.len());
    for (j, m) in src.iter().enumerate() {
        let img = to_coords(&d_integral(&c.integral_lift(), &FormVec::from([(*m, 1)])), &dst)?;
        for (r, v) in img.iter().enumerate() {
            mat.set(r, j, zr.reduce_i128(*v));
        }
    }
    Ok(Submodule::new(zr, src.len(), &mat.kernel()))
}

/// B_{j+1} = B_1 + C^{-1}(B_j) and Z_{j+1} = B_1 + C^{-1}(Z_j), where C^{-1}(T^b dlog T_J) = T^{pb} dlog T_J.
pub fn cycles_boundaries_at(space: &DrwSpace, c: &Weight, i: usize, n: u32) -> Result<CyclesBoundaries> {
    let zr = f_p(space)?;
    let dim = dlog_basis(c, space.base, i).len();
    let b1 = classical_d_image(space, c, i)?;
    let lower = c.scale(-1);
    let (mut bs, mut zs) = (Vec::new(), Vec::new());
    if lower.is_integral() && n > 1 {
        let rec = cycles_boundaries_at(space, &lower, i, n - 1)?;
        bs.push(b1.clone());
        zs.push(b1.sum(&Submodule::full(zr, dim)));
        for j in 0..(n - 1) as usize {
            bs.push(b1.sum(&rec.b_modules[j]));
            zs.push(b1.sum(&rec.z_modules[j]));
        }
    } else {
        let z1 = if lower.is_integral() { Submodule::full(zr, dim) } else { b1.clone() };
        for _ in 0..n {
            bs.push(b1.clone());
            zs.push(b1.clone());
        }
        zs[0] = z1;
    }
    let kernel = classical_d_kernel(space, c, i)?;
    let cartier_consistent = kernel.contains_module(&zs[0]) && zs[0].contains_module(&kernel);
    Ok(CyclesBoundaries {
        weight: c.clone(),
        degree: i,
        rank: dim,
        boundaries: bs.iter().map(|m| m.length()).collect(),
        cycles: zs.iter().map(|m| m.length()).collect(),
        cartier_consistent,
        b_modules: bs,
        z_modules: zs,
    })
}

/// All integral weights with entries at most `cap`, every degree.
pub fn cycles_boundaries(space: &DrwSpace, n: u32, cap: i64) -> Result<Vec<CyclesBoundaries>> {
    let mut out = Vec::new();
    for c in enumerate_weights(space.p, space.k, 0, cap, space.base)? {
        for i in 0..=space.k {
            out.push(cycles_boundaries_at(space, &c, i, n)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CartierWeight {
    /// Weight c of the cohomology; the source weight is c / p^n at level 2n.
    pub weight: Weight,
    pub degree: usize,
    pub cohomology_length: u32,
    pub source_length: u32,
    pub image_closed: bool,
    pub onto_cohomology: bool,
    pub factors_through_r: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CartierReport {
    pub p: u64,
    pub k: usize,
    pub n: u32,
    pub cap: i64,
    pub weights: Vec<CartierWeight>,
    pub failures: usize,
    pub pass: bool,
}

/// F^n: W_{2n}Ω^i → W_nΩ^i induces W_nΩ^i_{c/p^n} ≅ H^i(W_nΩ^•)_c for every weight c ≤ cap.
pub fn higher_cartier_check(space: &DrwSpace, n: u32, cap: i64) -> Result<CartierReport> {
    let mut rw = Rewriter::from_env();
    let fs = vec![DrwOp::F; n as usize];
    let mut weights = Vec::new();
    for c in enumerate_weights(space.p, space.k, n, cap, space.base)? {
        if c.u() >= n {
            continue;
        }
        let comps: Vec<Component> = (0..=space.k).map(|i| Component::new(*space, n, c.clone(), i)).collect();
        let b = c.scale(-(n as i32));
        for i in 0..=space.k {
            let here = &comps[i];
            let cycles = match comps.get(i + 1) {
                Some(next) => kernel(here, next, &[DrwOp::D], &mut rw)?,
                None => here.full()?,
            };
            let bounds = match i {
                0 => here.span(&[])?,
                _ => here.span(&images(&comps[i - 1], here, &[DrwOp::D], 1, &mut rw)?)?,
            };
            let h = cycles.length() - bounds.length();
            let src = Component::new(*space, 2 * n, b.clone(), i);
            let img = here.span(&images(&src, here, &fs, 1, &mut rw)?)?;
            let image_closed = cycles.contains_module(&img);
            let onto_cohomology = img.sum(&bounds).contains_module(&cycles);
            let r_kernel_scale = (space.p as i128).pow(n.saturating_sub(b.u()));
            let killed = here.span(&images(&src, here, &fs, r_kernel_scale, &mut rw)?)?;
            let factors_through_r = bounds.contains_module(&killed);
            let source_length = Component::new(*space, n, b.clone(), i).length();
            let pass = image_closed && onto_cohomology && factors_through_r && source_length == h;
            weights.push(CartierWeight {
                weight: c.clone(),
                degree: i,
                cohomology_length: h,
                source_length,
                image_closed,
                onto_cohomology,
                factors_through_r,
                pass,
            });
        }
    }
    let failures = weights.iter().filter(|w| !w.pass).count();
    Ok(CartierReport { p: space.p, k: space.k, n, cap, weights, failures, pass: failures == 0 })
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationWeight {
    pub weight: Weight,
    pub degree: usize,
    pub s: u32,
    pub kernel_length: u32,
    pub fil_length: u32,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedWeight {
    pub weight: Weight,
    pub degree: usize,
    /// gr^j = ker(R: W_{j+1}Ω^i → W_jΩ^i).
    pub j: u32,
    pub gr_length: u32,
    pub expected: u32,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationReport {
    pub p: u64,
    pub k: usize,
    pub n: u32,
    pub cap: i64,
    pub kernels: Vec<FiltrationWeight>,
    pub graded: Vec<GradedWeight>,
    pub failures: usize,
    pub pass: bool,
}

/// ker(R^{n-s}: W_nΩ^i → W_sΩ^i) = V^s W_{n-s}Ω^i + dV^s W_{n-s}Ω^{i-1} for 1 ≤ s < n, and
/// length gr^j_a = length (Ω^i/B_j)_{p^j a} + length (Ω^{i-1}/Z_j)_{p^j a} for 1 ≤ j ≤ n.
pub fn filtration_check(space: &DrwSpace, n: u32, cap: i64) -> Result<FiltrationReport> {
    let mut rw = Rewriter::from_env();
    let mut kernels = Vec::new();
    for s in 1..n {
        for a in enumerate_weights(space.p, space.k, n, cap, space.base)? {
            if a.u() >= n {
                continue;
            }
            let big = a.scale(s as i32);
            for i in 0..=space.k {
                let here = Component::new(*space, n, a.clone(), i);
                let low = Component::new(*space, s, a.clone(), i);
                let ker = kernel(&here, &low, &vec![DrwOp::R; (n - s) as usize], &mut rw)?;
                let vs = vec![DrwOp::V; s as usize];
                let mut gens = images(&Component::new(*space, n - s, big.clone(), i), &here, &vs, 1, &mut rw)?;
                if i > 0 {
                    let mut dvs = vs.clone();
                    dvs.push(DrwOp::D);
                    gens.extend(images(&Component::new(*space, n - s, big.clone(), i - 1), &here, &dvs, 1, &mut rw)?);
                }
                let fil = here.span(&gens)?;
                let (kernel_length, fil_length) = (ker.length(), fil.length());
                let equal = ker.contains_module(&fil) && fil.contains_module(&ker);
                kernels.push(FiltrationWeight { weight: a.clone(), degree: i, s, kernel_length, fil_length, equal });
            }
        }
    }
    let mut graded = Vec::new();
    for j in 1..=n {
        for a in enumerate_weights(space.p, space.k, j + 1, cap, space.base)? {
            let c = a.scale(j as i32);
            for i in 0..=space.k {
                let top = Component::new(*space, j + 1, a.clone(), i);
                let bottom = Component::new(*space, j, a.clone(), i);
                let gr_length = kernel(&top, &bottom, &[DrwOp::R], &mut rw)?.length();
                let expected = if c.is_integral() {
                    let cb = cycles_boundaries_at(space, &c, i, j)?;
                    let mut e = cb.rank as u32 - cb.boundaries[j as usize - 1];
                    if i > 0 {
                        let cz = cycles_boundaries_at(space, &c, i - 1, j)?;
                        e += cz.rank as u32 - cz.cycles[j as usize - 1];
                    }
                    e
                } else {
                    0
                };
                graded.push(GradedWeight { weight: a.clone(), degree: i, j, gr_length, expected, equal: gr_length == expected });
            }
        }
    }
    let failures = kernels.iter().filter(|w| !w.equal).count() + graded.iter().filter(|g| !g.equal).count();
    Ok(FiltrationReport { p: space.p, k: space.k, n, cap, kernels, graded, failures, pass: failures == 0 })
}
