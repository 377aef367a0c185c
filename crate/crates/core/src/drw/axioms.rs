//! The Witt-complex identities checked on basis elements and random elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::basis::{lz_basis, BasisEntry, BasisKey, DrwElement, DrwSpace};
use super::normal::Rewriter;
use super::ops::{oracle, DrwOp};
use super::weight::enumerate_weights;
use super::word::{drw_normalize_with, FreeWittWord};
use crate::error::Result;

/// A sum of `terms` random multiples of basis elements drawn from `basis`.
pub fn random_combination<R: Rng>(space: DrwSpace, level: u32, degree: usize, basis: &[BasisEntry], terms: usize, rng: &mut R) -> Result<DrwElement> {
    let mut x = DrwElement::zero(space, level, degree);
    if basis.is_empty() {
        return Ok(x);
    }
    let bound = (space.p as i128).pow(level);
    for _ in 0..terms {
        let b = &basis[rng.gen_range(0..basis.len())];
        x.add_term(BasisKey::new(b.weight.clone(), b.partition.clone()), rng.gen_range(1..bound.max(2)))?;
    }
    Ok(x)
}

pub fn random_element<R: Rng>(space: DrwSpace, level: u32, degree: usize, cap: i64, terms: usize, rng: &mut R) -> Result<DrwElement> {
    random_combination(space, level, degree, &lz_basis(&space, level, degree, cap)?, terms, rng)
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub p: u64,
    pub k: usize,
    pub max_level: u32,
    pub cap: i64,
    pub seed: u64,
    pub basis_elements: usize,
    pub random_elements: usize,
    pub axioms: Vec<AxiomResult>,
    pub pass: bool,
}

const NAMES: [&str; 14] = [
    "dd=0",
    "FV=p",
    "FdV=d",
    "Vd=pdV",
    "dF=pFd",
    "RF=FR",
    "RV=VR",
    "Rd=dR",
    "leibniz",
    "graded-commutative",
    "F-multiplicative",
    "projection",
    "teichmuller-Fd",
    "oracle",
];

struct Tally {
    results: Vec<AxiomResult>,
}

impl Tally {
    fn new() -> Self {
        Tally { results: NAMES.iter().map(|name| AxiomResult { name, checked: 0, failures: 0, first_failure: None }).collect() }
    }

    fn record(&mut self, name: &'static str, ok: bool, context: impl FnOnce() -> String) {
        let slot = self.results.iter_mut().find(|r| r.name == name).expect("known axiom");
        slot.checked += 1;
        if !ok {
            slot.failures += 1;
            if slot.first_failure.is_none() {
                slot.first_failure = Some(context());
            }
        }
    }
}

struct Ctx {
    rw: Rewriter,
    p: i128,
}

impl Ctx {
    fn op(&mut self, x: &DrwElement, ops: &[DrwOp]) -> Result<DrwElement> {
        let mut y = x.clone();
        for op in ops {
            y = y.apply(*op, &mut self.rw)?;
        }
        Ok(y)
    }
}

fn unary(t: &mut Tally, cx: &mut Ctx, x: &DrwElement, with_oracle: bool) -> Result<()> {
    use DrwOp::*;
    let r = x.level;
    let show = || x.to_string();
    t.record("dd=0", cx.op(x, &[D, D])?.is_zero(), show);
    t.record("FV=p", cx.op(x, &[V, F])? == x.scale(cx.p)?, show);
    t.record("FdV=d", cx.op(x, &[V, D, F])? == cx.op(x, &[D])?, show);
    t.record("Vd=pdV", cx.op(x, &[D, V])? == cx.op(x, &[V, D])?.scale(cx.p)?, show);
    if r >= 2 {
        t.record("dF=pFd", cx.op(x, &[F, D])? == cx.op(x, &[D, F])?.scale(cx.p)?, show);
        t.record("RV=VR", cx.op(x, &[V, R])? == cx.op(x, &[R, V])?, show);
        t.record("Rd=dR", cx.op(x, &[D, R])? == cx.op(x, &[R, D])?, show);
    }
    if r >= 3 {
        t.record("RF=FR", cx.op(x, &[F, R])? == cx.op(x, &[R, F])?, show);
    }
    if with_oracle {
        for op in [D, F, V, R] {
            if r < 2 && matches!(op, F | R) {
                continue;
            }
            t.record("oracle", cx.op(x, &[op])? == oracle::apply(op, x)?, || format!("{op:?} on {x}"));
        }
    }
    Ok(())
}

fn binary(t: &mut Tally, cx: &mut Ctx, x: &DrwElement, y: &DrwElement, y_up: &DrwElement, with_oracle: bool) -> Result<()> {
    use DrwOp::*;
    let show = || format!("{x} ; {y}");
    let xy = x.mul_with(y, &mut cx.rw)?;
    let sign = if x.degree % 2 == 0 { 1 } else { -1 };
    let dx_y = cx.op(x, &[D])?.mul_with(y, &mut cx.rw)?;
    let x_dy = x.mul_with(&cx.op(y, &[D])?, &mut cx.rw)?;
    t.record("leibniz", cx.op(&xy, &[D])? == dx_y.add(&x_dy.scale(sign)?)?, show);
    let swap = if (x.degree * y.degree) % 2 == 0 { 1 } else { -1 };
    t.record("graded-commutative", xy == y.mul_with(x, &mut cx.rw)?.scale(swap)?, show);
    if x.level >= 2 {
        let lhs = cx.op(&xy, &[F])?;
        let rhs = cx.op(x, &[F])?.mul_with(&cx.op(y, &[F])?, &mut cx.rw)?;
        t.record("F-multiplicative", lhs == rhs, show);
    }
    // V(x · F y') = V(x) · y' with y' one level up
    let fy = cx.op(y_up, &[F])?;
    let x_fy = x.mul_with(&fy, &mut cx.rw)?;
    let lhs = cx.op(&x_fy, &[V])?;
    let rhs = cx.op(x, &[V])?.mul_with(y_up, &mut cx.rw)?;
    t.record("projection", lhs == rhs, || format!("{x} ; {y_up}"));
    if with_oracle {
        t.record("oracle", xy == oracle::mul(x, y)?, show);
    }
    Ok(())
}

/// F d[T^b] = [T^b]^{p-1} d[T^b] for every monomial with entries at most `cap`.
fn teichmuller(t: &mut Tally, cx: &mut Ctx, space: &DrwSpace, r: u32, cap: i64) -> Result<()> {
    for w in enumerate_weights(space.p, space.k, 0, cap, space.base)? {
        let mono = FreeWittWord::teich(w.numerators());
        let lhs = drw_normalize_with(&mono.clone().d().f(), space, r, &mut cx.rw)?;
        let mut factors = vec![mono.clone(); space.p as usize - 1];
        factors.push(mono.clone().d());
        let rhs = drw_normalize_with(&FreeWittWord::Mul(factors), space, r, &mut cx.rw)?;
        t.record("teichmuller-Fd", lhs == rhs, || w.to_string());
    }
    Ok(())
}

/// Run every identity on all basis elements of levels 1..=max_level with weights up to `cap`, then on
/// `samples` random elements. Every `oracle_every`-th element is also compared with the
/// integral-forms model.
pub fn axiom_suite(space: &DrwSpace, max_level: u32, cap: i64, samples: usize, seed: u64, oracle_every: usize) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    let mut cx = Ctx { rw: Rewriter::from_env(), p: space.p as i128 };
    let oracle_every = oracle_every.max(1);
    let mut bases = Vec::new();
    for r in 1..=max_level + 1 {
        bases.push((0..=space.k).map(|i| lz_basis(space, r, i, cap)).collect::<Result<Vec<_>>>()?);
    }
    let partner = |rng: &mut ChaCha8Rng, r: u32, i: usize| -> Result<(DrwElement, DrwElement)> {
        let j = rng.gen_range(0..=space.k - i);
        let y = random_combination(*space, r, j, &bases[r as usize - 1][j], 2, rng)?;
        let y_up = random_combination(*space, r + 1, j, &bases[r as usize][j], 2, rng)?;
        Ok((y, y_up))
    };
    let mut count = 0usize;
    let mut basis_elements = 0usize;
    for r in 1..=max_level {
        teichmuller(&mut t, &mut cx, space, r, cap)?;
        for i in 0..=space.k {
            for e in &bases[r as usize - 1][i] {
                let x = DrwElement::basis(*space, r, BasisKey::new(e.weight.clone(), e.partition.clone()))?;
                let check = count % oracle_every == 0;
                unary(&mut t, &mut cx, &x, check)?;
                let (y, y_up) = partner(&mut rng, r, i)?;
                binary(&mut t, &mut cx, &x, &y, &y_up, check)?;
                count += 1;
                basis_elements += 1;
            }
        }
    }
    for _ in 0..samples {
        let r = rng.gen_range(1..=max_level);
        let i = rng.gen_range(0..=space.k);
        let x = random_combination(*space, r, i, &bases[r as usize - 1][i], rng.gen_range(1..=4), &mut rng)?;
        let check = count % oracle_every == 0;
        unary(&mut t, &mut cx, &x, check)?;
        let (y, y_up) = partner(&mut rng, r, i)?;
        binary(&mut t, &mut cx, &x, &y, &y_up, check)?;
        count += 1;
    }
    let pass = t.results.iter().all(|a| a.failures == 0 && a.checked > 0);
    Ok(AxiomReport {
        p: space.p,
        k: space.k,
        max_level,
        cap,
        seed,
        basis_elements,
        random_elements: samples,
        axioms: t.results,
        pass,
    })
}
