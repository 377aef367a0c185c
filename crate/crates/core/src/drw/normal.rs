//! Per weight a, every element of W_rΩ is V^u(ω) + dV^u(ω') with u = u(a) and ω, ω' integral
//! forms of weight p^u a over Z/p^{r-u}. Products and the maps d, F, V, R are computed on this
//! form from FV = p, FdV = d, V(F(x)y) = xV(y), F[b] = [b]^p, Fd[b] = [b]^{p-1}d[b] and Leibniz.

use std::collections::BTreeMap;

use super::basis::{BasisKey, DrwElement, DrwSpace};
use super::forms::{d_integral, dlog_basis, lz_form, to_coords, wedge, FormVec};
use super::weight::{partitions_of_degree, Weight, WeightPartition};
use crate::algebra::{TrackedSpan, Zpn};
use crate::error::{Error, Result};

pub const DEFAULT_STEP_CAP: usize = 5_000_000;

/// Counts rule applications and stops at a hard cap.
#[derive(Clone, Debug)]
pub struct Rewriter {
    pub cap: usize,
    pub steps: usize,
    pub rules: BTreeMap<&'static str, usize>,
}

impl Rewriter {
    pub fn new(cap: usize) -> Self {
        Rewriter { cap, steps: 0, rules: BTreeMap::new() }
    }

    /// Cap from PWL_STEP_CAP, else the default.
    pub fn from_env() -> Self {
        let cap = std::env::var("PWL_STEP_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_STEP_CAP);
        Self::new(cap)
    }

    pub fn tick(&mut self, rule: &'static str) -> Result<()> {
        self.steps += 1;
        *self.rules.entry(rule).or_insert(0) += 1;
        if self.steps > self.cap {
            return Err(Error::StepCap(self.cap));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Piece {
    /// ω with V^u(ω).
    pub v: FormVec,
    /// ω' with dV^u(ω').
    pub dv: FormVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VdvForm {
    pub space: DrwSpace,
    pub level: u32,
    pub degree: usize,
    pub pieces: BTreeMap<Weight, Piece>,
}

fn scaled(x: &FormVec, s: i128) -> FormVec {
    x.iter().map(|(m, c)| (*m, c * s)).filter(|(_, c)| *c != 0).collect()
}

fn add_into(acc: &mut FormVec, x: &FormVec, modulus: i128) {
    for (m, c) in x {
        let slot = acc.entry(*m).or_insert(0);
        *slot = (*slot + c).rem_euclid(modulus);
    }
    acc.retain(|_, c| *c != 0);
}

fn reduce(x: &FormVec, modulus: i128) -> FormVec {
    x.iter().map(|(m, c)| (*m, c.rem_euclid(modulus))).filter(|(_, c)| *c != 0).collect()
}

impl VdvForm {
    pub fn zero(space: DrwSpace, level: u32, degree: usize) -> Self {
        VdvForm { space, level, degree, pieces: BTreeMap::new() }
    }

    fn modulus(&self, w: &Weight) -> Option<i128> {
        self.space.coefficient_modulus(self.level, w).map(|m| m as i128)
    }

    fn tidy(&mut self) {
        self.pieces.retain(|_, pc| !pc.v.is_empty() || !pc.dv.is_empty());
    }

    /// Add V^s(θ) for θ of weight p^s a. With u = u(a) ≤ s, θ = F^{s-u} θ̃ and V^s F^{s-u} = p^{s-u} V^u.
    pub fn insert_v(&mut self, rw: &mut Rewriter, s: u32, a: &Weight, theta: &FormVec) -> Result<()> {
        if theta.is_empty() {
            return Ok(());
        }
        let u = a.u();
        if u > s {
            return Err(Error::Invalid(format!("V^{s} cannot reach weight {a}")));
        }
        let Some(m) = self.modulus(a) else { return Ok(()) };
        if u < s {
            rw.tick("VF=p")?;
        }
        let t = scaled(theta, (self.space.p as i128).pow(s - u));
        add_into(&mut self.pieces.entry(a.clone()).or_default().v, &t, m);
        self.tidy();
        Ok(())
    }

    /// Add dV^s(θ) for θ of weight p^s a; at integral a this is d(p^s θ).
    pub fn insert_dv(&mut self, rw: &mut Rewriter, s: u32, a: &Weight, theta: &FormVec) -> Result<()> {
        if theta.is_empty() {
            return Ok(());
        }
        let u = a.u();
        if u > s {
            return Err(Error::Invalid(format!("dV^{s} cannot reach weight {a}")));
        }
        let Some(m) = self.modulus(a) else { return Ok(()) };
        if u < s {
            rw.tick("VF=p")?;
        }
        let t = scaled(theta, (self.space.p as i128).pow(s - u));
        if u == 0 {
            rw.tick("leibniz")?;
            let dt = d_integral(&a.integral_lift(), &t);
            add_into(&mut self.pieces.entry(a.clone()).or_default().v, &dt, m);
        } else {
            add_into(&mut self.pieces.entry(a.clone()).or_default().dv, &t, m);
        }
        self.tidy();
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space || self.level != other.level || self.degree != other.degree {
            return Err(Error::Invalid("adding forms of different shape".into()));
        }
        let mut out = self.clone();
        for (w, pc) in &other.pieces {
            let m = out.modulus(w).unwrap_or(1);
            let slot = out.pieces.entry(w.clone()).or_default();
            add_into(&mut slot.v, &pc.v, m);
            add_into(&mut slot.dv, &pc.dv, m);
        }
        out.tidy();
        Ok(out)
    }

    pub fn scale(&self, s: i128) -> Self {
        let mut out = self.clone();
        for (w, pc) in out.pieces.iter_mut() {
            let m = self.space.coefficient_modulus(self.level, w).unwrap_or(1) as i128;
            pc.v = reduce(&scaled(&pc.v, s), m);
            pc.dv = reduce(&scaled(&pc.dv, s), m);
        }
        out.tidy();
        out
    }

    /// The product, using V^u(ω)·y = V^u(ω F^u y), F^u V^{u'} = p^{u'} F^{u-u'}, F^u dV^{u'} = F^{u-u'} d
    /// and dx·y = d(xy) - (-1)^{|x|} x dy.
    pub fn mul(&self, other: &Self, rw: &mut Rewriter) -> Result<Self> {
        if self.space != other.space || self.level != other.level {
            return Err(Error::Invalid("multiplying forms of different level".into()));
        }
        let (i, j) = (self.degree, other.degree);
        let mut out = VdvForm::zero(self.space, self.level, i + j);
        for (a, x) in &self.pieces {
            for (b, y) in &other.pieces {
                if a.u() >= b.u() {
                    mul_ordered(&mut out, rw, (a, x, i), (b, y), 1)?;
                } else {
                    rw.tick("graded-commutativity")?;
                    let sign = if i * j % 2 == 0 { 1 } else { -1 };
                    mul_ordered(&mut out, rw, (b, y, j), (a, x), sign)?;
                }
            }
        }
        Ok(out)
    }

    pub fn d(&self, rw: &mut Rewriter) -> Result<Self> {
        let mut out = VdvForm::zero(self.space, self.level, self.degree + 1);
        for (a, pc) in &self.pieces {
            if a.u() == 0 {
                rw.tick("leibniz")?;
                out.insert_v(rw, 0, a, &d_integral(&a.integral_lift(), &pc.v))?;
            } else {
                if !pc.dv.is_empty() {
                    rw.tick("dd=0")?;
                }
                out.insert_dv(rw, a.u(), a, &pc.v)?;
            }
        }
        Ok(out)
    }

    /// F: FV = p, FdV = d, and on integral forms T^b dlog T_J ↦ T^{pb} dlog T_J.
    pub fn frobenius(&self, rw: &mut Rewriter) -> Result<Self> {
        if self.level < 2 {
            return Err(Error::Depth("F needs level at least 2".into()));
        }
        let mut out = VdvForm::zero(self.space, self.level - 1, self.degree);
        let p = self.space.p as i128;
        for (a, pc) in &self.pieces {
            let pa = a.scale(1);
            let u = a.u();
            if u == 0 {
                rw.tick("teichmuller")?;
                out.insert_v(rw, 0, &pa, &pc.v)?;
            } else {
                rw.tick("FV=p")?;
                out.insert_v(rw, u - 1, &pa, &scaled(&pc.v, p))?;
                if !pc.dv.is_empty() {
                    rw.tick("FdV=d")?;
                    out.insert_dv(rw, u - 1, &pa, &pc.dv)?;
                }
            }
        }
        Ok(out)
    }

    /// V: V V^u = V^{u+1} and V dV^u = V F dV^{u+1} = p dV^{u+1}.
    pub fn verschiebung(&self, rw: &mut Rewriter) -> Result<Self> {
        let mut out = VdvForm::zero(self.space, self.level + 1, self.degree);
        let p = self.space.p as i128;
        for (a, pc) in &self.pieces {
            let ap = a.scale(-1);
            let u = a.u();
            out.insert_v(rw, u + 1, &ap, &pc.v)?;
            if !pc.dv.is_empty() {
                rw.tick("projection")?;
                out.insert_dv(rw, u + 1, &ap, &scaled(&pc.dv, p))?;
            }
        }
        Ok(out)
    }

    /// R reduces every coefficient modulo p^{r-1-u}.
    pub fn restriction(&self, rw: &mut Rewriter) -> Result<Self> {
        if self.level < 2 {
            return Err(Error::Depth("R needs level at least 2".into()));
        }
        let mut out = VdvForm::zero(self.space, self.level - 1, self.degree);
        for (a, pc) in &self.pieces {
            rw.tick("R-truncation")?;
            if let Some(m) = out.modulus(a) {
                out.pieces.insert(a.clone(), Piece { v: reduce(&pc.v, m), dv: reduce(&pc.dv, m) });
            }
        }
        out.tidy();
        Ok(out)
    }
}

/// x·y for u(a) ≥ u(b); `sign` is applied to every product.
fn mul_ordered(
    out: &mut VdvForm,
    rw: &mut Rewriter,
    (a, x, i): (&Weight, &Piece, usize),
    (b, y): (&Weight, &Piece),
    sign: i128,
) -> Result<()> {
    let u = a.u();
    let pu2 = (out.space.p as i128).pow(b.u());
    let c = a.add(b);
    // d of y's forms at weight p^{u'} b; F^{u-u'} then only rescales the weight
    let bl = b.integral_lift();
    if !x.v.is_empty() {
        rw.tick("projection")?;
        out.insert_v(rw, u, &c, &scaled(&wedge(&x.v, &y.v), sign * pu2))?;
        if !y.dv.is_empty() {
            rw.tick("FdV=d")?;
            out.insert_v(rw, u, &c, &scaled(&wedge(&x.v, &d_integral(&bl, &y.dv)), sign))?;
        }
    }
    if !x.dv.is_empty() {
        rw.tick("leibniz")?;
        let eps = if (i - 1) % 2 == 0 { 1 } else { -1 };
        out.insert_dv(rw, u, &c, &scaled(&wedge(&x.dv, &y.v), sign * pu2))?;
        out.insert_v(rw, u, &c, &scaled(&wedge(&x.dv, &d_integral(&bl, &y.v)), -eps * sign))?;
        if !y.dv.is_empty() {
            out.insert_dv(rw, u, &c, &scaled(&wedge(&x.dv, &d_integral(&bl, &y.dv)), sign))?;
        }
    }
    Ok(())
}

/// Coordinates of an integral form of integral weight b on the basis e(1, b, P), modulo p^m.
pub fn integral_coords(space: &DrwSpace, b: &Weight, degree: usize, m: u32, f: &FormVec) -> Result<Vec<(WeightPartition, i128)>> {
    let parts = partitions_of_degree(b, space.base, degree);
    let masks = dlog_basis(b, space.base, degree);
    let zr = Zpn::new(space.p, m)?;
    let cols: Vec<Vec<u128>> = parts
        .iter()
        .map(|pt| Ok(to_coords(&lz_form(b, pt)?, &masks)?.iter().map(|x| zr.reduce_i128(*x)).collect()))
        .collect::<Result<_>>()?;
    let rhs: Vec<u128> = to_coords(f, &masks)?.iter().map(|x| zr.reduce_i128(*x)).collect();
    let y = TrackedSpan::new(zr, masks.len(), &cols)
        .express(&rhs)
        .ok_or_else(|| Error::Invalid(format!("integral form at {b} outside the basis span")))?;
    Ok(parts.into_iter().zip(y).filter(|(_, c)| *c != 0).map(|(pt, c)| (pt, c as i128)).collect())
}

impl VdvForm {
    /// e(x, a, P) is V^u(x e(1, p^u a, P)) when I_0 ≠ ∅ and dV^u(x e(1, p^u a, P shifted)) when I_0 = ∅.
    pub fn from_element(x: &DrwElement) -> Result<Self> {
        let mut out = VdvForm::zero(x.space, x.level, x.degree);
        for (key, c) in &x.terms {
            let a = &key.weight;
            let u = a.u();
            let b = a.scale(u as i32);
            let m = out.modulus(a).unwrap_or(1);
            let slot = out.pieces.entry(a.clone()).or_default();
            if u == 0 || !key.partition.i0().is_empty() {
                add_into(&mut slot.v, &scaled(&lz_form(&b, &key.partition)?, *c as i128), m);
            } else {
                let lower = key.partition.shift_down().expect("I_0 is empty");
                add_into(&mut slot.dv, &scaled(&lz_form(&b, &lower)?, *c as i128), m);
            }
        }
        out.tidy();
        Ok(out)
    }

    /// Back to basis coordinates: V^u e(y, b, P) is e(y, a, P) for I_0 ≠ ∅ and p^u e(y, a, P)
    /// otherwise; dV^u e(y, b, P) is e(y, a, (∅, I_0, ...)) for I_0 ≠ ∅ and 0 otherwise.
    pub fn to_element(&self, rw: &mut Rewriter) -> Result<DrwElement> {
        let mut out = DrwElement::zero(self.space, self.level, self.degree);
        let p = self.space.p as i128;
        for (a, pc) in &self.pieces {
            let u = a.u();
            if u >= self.level {
                continue;
            }
            let mlen = self.level - u;
            let b = a.scale(u as i32);
            for (pt, y) in integral_coords(&self.space, &b, self.degree, mlen, &pc.v)? {
                rw.tick("basis")?;
                let c = if u > 0 && pt.i0().is_empty() { y * p.pow(u) } else { y };
                out.add_term(BasisKey::new(a.clone(), pt), c)?;
            }
            if self.degree > 0 && !pc.dv.is_empty() {
                for (pt, y) in integral_coords(&self.space, &b, self.degree - 1, mlen, &pc.dv)? {
                    rw.tick("basis")?;
                    if let Some(up) = pt.shift_up() {
                        out.add_term(BasisKey::new(a.clone(), up), y)?;
                    } else {
                        rw.tick("dd=0")?;
                    }
                }
            }
        }
        Ok(out)
    }
}
