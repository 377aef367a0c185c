//! The six compatibility squares of θ_r and θ̃_r with R, F and V.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AinfElem, TiltKind, TiltModel};
use crate::algebra::RingDescriptor;
use crate::error::{Error, Result};
use crate::witt::WittVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramResult {
    pub name: &'static str,
    pub status: DiagramStatus,
    pub samples: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutReport {
    pub model: TiltKind,
    pub p: u64,
    pub r: usize,
    /// Coefficient precision of comparisons; None when they are exact.
    pub precision: Option<u32>,
    pub lambda: Option<String>,
    pub diagrams: Vec<DiagramResult>,
    pub pass: bool,
}

const NAMES: [&str; 6] = [
    "theta-R",
    "theta-F",
    "theta-V",
    "theta-tilde-R",
    "theta-tilde-F",
    "theta-tilde-V",
];

impl TiltModel {
    /// Equality in W_r(A), modulo p^prec in the cyclotomic model.
    pub fn witt_eq(&self, a: &WittVector, b: &WittVector, prec: Option<u32>) -> Result<bool> {
        match prec {
            None => Ok(a == b),
            Some(n) => {
                let desc = RingDescriptor::quotient(
                    self.target().desc.clone(),
                    vec![(vec![crate::algebra::Exp::int(0)], num_bigint::BigInt::from(self.p).pow(n))],
                );
                let ring = desc.compile()?;
                Ok(a.map_coords(|c| c.coerce(&ring))? == b.map_coords(|c| c.coerce(&ring))?)
            }
        }
    }

    /// Some λ with θ_{r+1}(λ) = V(1), exactly (char p) or with Witt coordinates correct mod p^prec.
    pub fn solve_lambda(&self, r: usize, prec: u32) -> Result<AinfElem> {
        let target = self.v_one(r + 1);
        match self.kind {
            TiltKind::Charp => {
                // θ_{r+1} is the projection, so pad V(1) with zeros
                let mut coords = target.coords().to_vec();
                coords.resize(self.len.max(r + 1), crate::algebra::RingElement::zero(self.target()));
                Ok(AinfElem::Witt(WittVector::new(self.p, coords)?))
            }
            TiltKind::Cyclo => {
                for level in 1..=self.cap.min(3) {
                    let dim = self.p.pow(level) as usize;
                    if let Ok(f) = self.theta_preimage(&target, level, dim, prec + r as u32) {
                        return Ok(AinfElem::Poly(f));
                    }
                }
                Err(Error::NoSolution)
            }
        }
    }

    /// Generators [t^a] and V^j[t^a] (char p) or q^a and 1 + q^a (cyclotomic) for a <= deg_cap,
    /// followed by `random` sums of them.
    pub fn generating_sample(&self, deg_cap: i64, random: usize, seed: u64) -> Result<Vec<AinfElem>> {
        let mut gens = Vec::new();
        for a in self.exponents(deg_cap) {
            let m = self.monomial(a, 1)?;
            match (&m, self.kind) {
                (AinfElem::Witt(w), TiltKind::Charp) => {
                    for j in 1..self.len {
                        let mut v = WittVector::teichmuller(&w.coords()[0], self.len - j);
                        for _ in 0..j {
                            v = v.verschiebung();
                        }
                        gens.push(AinfElem::Witt(v));
                    }
                }
                _ => gens.push(self.add(&m, &self.one())?),
            }
            gens.push(m);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = gens.clone();
        for _ in 0..random {
            let k = rng.gen_range(2..=3);
            let mut acc = gens[rng.gen_range(0..gens.len())].clone();
            for _ in 1..k {
                acc = self.add(&acc, &gens[rng.gen_range(0..gens.len())])?;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Check the six squares at level r on the given sample.
pub fn commut_diagrams_check(model: &TiltModel, r: usize, samples: &[AinfElem], precision: u32) -> Result<CommutReport> {
    if r == 0 || (model.kind == TiltKind::Charp && r + 1 > model.len) {
        return Err(Error::Depth(format!("level {r} needs Witt length {}", r + 1)));
    }
    let prec = match model.kind {
        TiltKind::Charp => None,
        TiltKind::Cyclo => Some(precision),
    };
    let lambda = model.solve_lambda(r, precision).ok();
    let lambda_ok = match &lambda {
        Some(l) => model.witt_eq(&model.theta(l, r + 1)?, &model.v_one(r + 1), prec)?,
        None => false,
    };
    let mut failures = [0usize; 6];
    for x in samples {
        let t1 = model.theta(x, r + 1)?;
        let tt1 = model.theta_tilde(x, r + 1)?;
        let checks: [Option<bool>; 6] = [
            Some(model.witt_eq(&t1.restriction()?, &model.theta(x, r)?, prec)?),
            Some(model.witt_eq(&t1.frobenius()?, &model.theta(&model.phi(x)?, r)?, prec)?),
            match (&lambda, lambda_ok) {
                (Some(l), true) => {
                    let lhs = model.theta(&model.mul(l, &model.phi_inv(x)?)?, r + 1)?;
                    Some(model.witt_eq(&lhs, &model.theta(x, r)?.verschiebung(), prec)?)
                }
                _ => None,
            },
            Some(model.witt_eq(&tt1.restriction()?, &model.theta_tilde(&model.phi_inv(x)?, r)?, prec)?),
            Some(model.witt_eq(&tt1.frobenius()?, &model.theta_tilde(x, r)?, prec)?),
            match (&lambda, lambda_ok) {
                (Some(l), true) => {
                    let twisted = model.mul(&model.phi_pow(l, r as i32 + 1)?, x)?;
                    let lhs = model.theta_tilde(&twisted, r + 1)?;
                    Some(model.witt_eq(&lhs, &model.theta_tilde(x, r)?.verschiebung(), prec)?)
                }
                _ => None,
            },
        ];
        for (i, c) in checks.iter().enumerate() {
            if *c == Some(false) {
                failures[i] += 1;
            }
        }
    }
    let diagrams: Vec<DiagramResult> = (0..6)
        .map(|i| {
            let status = if (i == 2 || i == 5) && !lambda_ok {
                DiagramStatus::Inconclusive
            } else if failures[i] == 0 {
                DiagramStatus::Pass
            } else {
                DiagramStatus::Fail
            };
            DiagramResult { name: NAMES[i], status, samples: samples.len(), failures: failures[i] }
        })
        .collect();
    let pass = diagrams.iter().all(|d| d.status != DiagramStatus::Fail);
    Ok(CommutReport {
        model: model.kind,
        p: model.p,
        r,
        precision: prec,
        lambda: lambda.as_ref().filter(|_| lambda_ok).map(|l| l.to_string()),
        diagrams,
        pass,
    })
}
