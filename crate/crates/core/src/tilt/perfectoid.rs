//! Sample-based checks of the p-th power and Frobenius surjectivity conditions.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{TiltKind, TiltModel};
use crate::algebra::{Exp, IntMatrixModPN, RingDescriptor, RingElement};
use crate::error::{Error, Result};
use crate::prism::FiniteQuotient;
use crate::witt::WittVector;

#[derive(Clone, Debug, Serialize)]
pub struct ConditionResult {
    pub name: &'static str,
    pub verified: bool,
    pub samples: usize,
    pub failures: usize,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerfectoidReport {
    pub model: String,
    pub p: u64,
    pub precision: Option<u32>,
    pub conditions: Vec<ConditionResult>,
}

/// What to run the checks on: a tilt model, or F_p[t] as a non-perfectoid control.
#[derive(Clone, Copy, Debug)]
pub enum PerfectoidSource<'a> {
    Tilt(&'a TiltModel),
    PolynomialControl { p: u64 },
}

const POWER_CONDITIONS: [&str; 3] = ["pth-power-mod-pi-p", "pth-power-mod-p", "pth-power-mod-pi^p"];

pub fn perfectoid_checks(source: PerfectoidSource<'_>, samples: usize, precision: u32, seed: u64) -> Result<PerfectoidReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match source {
        PerfectoidSource::PolynomialControl { p } => control_checks(p, samples, &mut rng),
        PerfectoidSource::Tilt(m) if m.kind == TiltKind::Charp => charp_checks(m, samples, &mut rng),
        PerfectoidSource::Tilt(m) => CycloLevels::new(m, precision)?.checks(samples, &mut rng),
    }
}

fn result(name: &'static str, samples: usize, failures: usize, note: impl Into<String>) -> ConditionResult {
    ConditionResult { name, verified: failures == 0 && samples > 0, samples, failures, note: note.into() }
}

fn random_fp_poly(ring: &crate::algebra::Ring, p: u64, depth: u32, rng: &mut ChaCha8Rng) -> Result<RingElement> {
    let mut x = RingElement::zero(ring);
    for _ in 0..rng.gen_range(1..4) {
        let a = Exp::new(rng.gen_range(0..(4 * p.pow(depth) as i64)), depth, p);
        x = x.try_add(&RingElement::monomial(ring, &[("t", a)], BigInt::from(rng.gen_range(1..p)))?)?;
    }
    Ok(x)
}

fn charp_checks(m: &TiltModel, samples: usize, rng: &mut ChaCha8Rng) -> Result<PerfectoidReport> {
    // p = 0 in A, so the three quotients all equal A
    let mut root_fail = 0;
    let mut f_fail = [0usize; 2];
    for _ in 0..samples {
        let x = random_fp_poly(m.target(), m.p, m.depth, rng)?;
        match x.scale_exponents(-1) {
            Ok(y) if y.pow(m.p) == x => {}
            _ => root_fail += 1,
        }
        for (k, fails) in f_fail.iter_mut().enumerate() {
            let len = k + 1;
            let w = WittVector::new(m.p, (0..len).map(|_| random_fp_poly(m.target(), m.p, m.depth, rng)).collect::<Result<_>>()?)?;
            let mut coords: Vec<RingElement> = w.coords().iter().map(|c| c.scale_exponents(-1)).collect::<Result<_>>()?;
            coords.push(RingElement::zero(m.target()));
            let alpha = WittVector::new(m.p, coords)?;
            if alpha.frobenius()? != w {
                *fails += 1;
            }
        }
    }
    let mut conditions: Vec<ConditionResult> =
        POWER_CONDITIONS.iter().map(|n| result(n, samples, root_fail, "coordinatewise p-th roots")).collect();
    conditions.push(result("F-surjective-W2-W1", samples, f_fail[0], "alpha = coordinatewise p-th roots"));
    conditions.push(result("F-surjective-W3-W2", samples, f_fail[1], "alpha = coordinatewise p-th roots"));
    Ok(PerfectoidReport { model: "charp".into(), p: m.p, precision: None, conditions })
}

fn control_checks(p: u64, samples: usize, rng: &mut ChaCha8Rng) -> Result<PerfectoidReport> {
    let ring = RingDescriptor::poly(RingDescriptor::prime_field(p), &["t"]).compile()?;
    let t = RingElement::var(&ring, "t")?;
    let mut fails = 0;
    let mut total = 0;
    let mut xs = vec![t];
    for _ in 1..samples.max(1) {
        xs.push(random_fp_poly(&ring, p, 0, rng)?);
    }
    for x in &xs {
        total += 1;
        // a p-th power in F_p[t] has every exponent divisible by p
        if x.scale_exponents(-1).is_err() {
            fails += 1;
        }
    }
    let note = "exponent not divisible by p";
    let mut conditions: Vec<ConditionResult> = POWER_CONDITIONS.iter().map(|n| result(n, total, fails, note)).collect();
    conditions.push(result("F-surjective-W2-W1", total, fails, "F(a0, a1) = a0^p in characteristic p"));
    Ok(PerfectoidReport { model: "polynomial-control".into(), p, precision: None, conditions })
}

/// Z/p^N[ζ_{p^cap}], with the subrings Z/p^N[ζ_{p^l}] spanned by ζ^{k p^{cap-l}}.
struct CycloLevels<'a> {
    model: &'a TiltModel,
    fq: FiniteQuotient,
    n: u32,
}

impl<'a> CycloLevels<'a> {
    fn new(model: &'a TiltModel, n: u32) -> Result<Self> {
        if model.cap < model.depth + 2 || model.cap < 2 {
            return Err(Error::Depth("cyclotomic checks need two levels above the sample depth".into()));
        }
        Ok(CycloLevels { model, fq: model.target_mod(n)?, n })
    }

    fn zeta_pow(&self, e: i64) -> Result<RingElement> {
        RingElement::monomial(&self.fq.ring, &[("X", Exp::int(e))], BigInt::from(1))
    }

    /// Basis ζ_{p^l}^k, k < φ(p^l).
    fn level_basis(&self, level: u32) -> Result<Vec<RingElement>> {
        let p = self.model.p;
        let dim = if level == 0 { 1 } else { ((p - 1) * p.pow(level - 1)) as usize };
        let step = p.pow(self.model.cap - level) as i64;
        (0..dim).map(|k| self.zeta_pow(k as i64 * step)).collect()
    }

    /// Some y in the level-l subring with g y = rhs.
    fn solve_in_level(&self, g: &RingElement, rhs: &RingElement, level: u32) -> Result<RingElement> {
        let basis = self.level_basis(level)?;
        let mut m = IntMatrixModPN::zeros(self.fq.zr, self.fq.dim, basis.len());
        for (k, b) in basis.iter().enumerate() {
            for (i, c) in self.fq.to_vec(&g.try_mul(b)?)?.iter().enumerate() {
                m.set(i, k, *c);
            }
        }
        let y = m.howell_solve(&self.fq.to_vec(rhs)?)?;
        let mut acc = RingElement::zero(&self.fq.ring);
        for (c, b) in y.iter().zip(&basis) {
            acc = acc.try_add(&b.scale_int(&BigInt::from(*c)))?;
        }
        Ok(acc)
    }

    fn member(&self, x: &RingElement, g: &RingElement) -> Result<bool> {
        Ok(self.solve_in_level(g, x, self.model.cap).is_ok())
    }

    /// Σ c_k ζ^{e_k/p}, a p-th root modulo p of an element of a lower level.
    fn frob_root(&self, x: &RingElement) -> Result<RingElement> {
        x.scale_exponents(-1).map_err(|_| Error::Depth("element is at the top level".into()))
    }

    fn random_at(&self, level: u32, rng: &mut ChaCha8Rng) -> Result<RingElement> {
        let mut acc = RingElement::zero(&self.fq.ring);
        let modulus = self.fq.zr.modulus() as u64;
        for b in self.level_basis(level)? {
            acc = acc.try_add(&b.scale_int(&BigInt::from(rng.gen_range(0..modulus))))?;
        }
        Ok(acc)
    }

    fn checks(&self, samples: usize, rng: &mut ChaCha8Rng) -> Result<PerfectoidReport> {
        let (p, lvl) = (self.model.p, self.model.depth);
        let pe = RingElement::from_int(&self.fq.ring, p as i64);
        let pi = self.zeta_pow(p.pow(self.model.cap - 2) as i64)?.try_sub(&RingElement::one(&self.fq.ring))?;
        let ideals = [pi.try_mul(&pe)?, pe.clone(), pi.pow(p)];
        let pi_pp1 = pi.pow(p * (p - 1));
        let mut fails = [0usize; 5];
        for _ in 0..samples {
            let x = self.random_at(lvl, rng)?;
            let y0 = self.frob_root(&x)?;
            let e = x.try_sub(&y0.pow(p))?;
            // correct y0 by π^{p-1} w with w^p = e / π^{p(p-1)} modulo π
            let refined = self
                .solve_in_level(&pi_pp1, &e, lvl + 1)
                .and_then(|w1| Ok(y0.try_add(&pi.pow(p - 1).try_mul(&self.frob_root(&w1)?)?)?));
            let ok_i = match refined {
                Ok(y) => self.member(&y.pow(p).try_sub(&x)?, &ideals[0])?,
                Err(_) => false,
            };
            fails[0] += usize::from(!ok_i);
            fails[1] += usize::from(!self.member(&e, &ideals[1])?);
            fails[2] += usize::from(!self.member(&e, &ideals[2])?);
            // F(a0, a1) = a0^p + p a1
            let ok_f2 = match self.solve_in_level(&pe, &e, lvl + 1) {
                Ok(a1) => y0.pow(p).try_add(&pe.try_mul(&a1)?)? == x,
                Err(_) => false,
            };
            fails[3] += usize::from(!ok_f2);
            fails[4] += usize::from(!self.f_surjective_w3(rng)?);
        }
        let notes = [
            "y = y0 + pi^(p-1) w, pi = zeta_{p^2} - 1",
            "coefficientwise root one level up",
            "coefficientwise root one level up",
            "solved a0^p + p a1 = x",
            "alpha = theta_3(phi^-1 f) with theta_2(f) = w",
        ];
        let names = [POWER_CONDITIONS[0], POWER_CONDITIONS[1], POWER_CONDITIONS[2], "F-surjective-W2-W1", "F-surjective-W3-W2"];
        let conditions = (0..5).map(|i| result(names[i], samples, fails[i], notes[i])).collect();
        Ok(PerfectoidReport { model: "cyclo".into(), p, precision: Some(self.n), conditions })
    }

    /// Preimage of a random w in W_2(A) under F, via F θ_3 = θ_2 φ.
    fn f_surjective_w3(&self, rng: &mut ChaCha8Rng) -> Result<bool> {
        let m = self.model;
        let target = m.target();
        let coords = (0..2)
            .map(|_| self.random_at(m.depth, rng)?.lift_into(target))
            .collect::<Result<Vec<_>>>()?;
        let w = WittVector::new(m.p, coords)?;
        for level in m.depth + 1..m.cap {
            let dim = m.p.pow(level) as usize;
            if let Ok(f) = m.theta_preimage(&w, level, dim, self.n + 2) {
                let alpha = m.theta(&m.phi_inv(&super::AinfElem::Poly(f))?, 3)?;
                return m.witt_eq(&alpha.frobenius()?, &w, Some(self.n));
            }
        }
        Ok(false)
    }
}
