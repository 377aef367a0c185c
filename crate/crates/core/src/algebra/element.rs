//! Elements of compiled carriers: sparse polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::{json, Value};

use super::descriptor::{CoeffDomain, Exp, Ring};
use crate::error::{Error, Result};

pub type Terms = BTreeMap<Vec<i64>, BigInt>;

#[derive(Clone, Debug)]
pub struct RingElement {
    ring: Ring,
    terms: Terms,
    /// Common positive denominator; always 1 outside p-local carriers.
    den: BigInt,
    inexact: bool,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms && self.den == other.den
    }
}

impl Eq for RingElement {}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || a.desc == b.desc
}

fn pval(x: &BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    v
}

impl RingElement {
    pub fn from_terms(ring: &Ring, terms: Terms) -> Result<Self> {
        Self::build(ring, terms, BigInt::one(), false)
    }

    fn build(ring: &Ring, mut terms: Terms, mut den: BigInt, mut inexact: bool) -> Result<Self> {
        let nv = ring.nvars();
        if terms.keys().any(|k| k.len() != nv) {
            return Err(Error::LengthMismatch(format!("monomial arity differs from {nv} variables")));
        }
        if ring.relations.is_empty() {
            if let CoeffDomain::Mod(m) = &ring.coeff {
                for c in terms.values_mut() {
                    *c = c.mod_floor(m);
                }
            }
        } else {
            reduce_relations(ring, &mut terms);
        }
        for (i, v) in ring.vars.iter().enumerate() {
            if let Some(prec) = v.precision {
                let before = terms.len();
                terms.retain(|k, _| k[i] < prec);
                inexact |= terms.len() != before;
            }
            if terms.keys().any(|k| k[i] < 0) {
                return Err(Error::ExponentRange(format!("negative exponent in {}", v.name)));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        match &ring.coeff {
            CoeffDomain::PLocal { cap } => {
                if den.is_negative() {
                    den = -den;
                    for c in terms.values_mut() {
                        *c = -c.clone();
                    }
                }
                let g = terms.values().fold(den.clone(), |g, c| g.gcd(c));
                if !g.is_one() && !g.is_zero() {
                    den /= &g;
                    for c in terms.values_mut() {
                        *c /= &g;
                    }
                }
                if terms.is_empty() {
                    den = BigInt::one();
                }
                if pval(&den, ring.p) > *cap {
                    return Err(Error::DenominatorCap(format!("denominator {den} exceeds p^{cap}")));
                }
            }
            _ => {
                if !den.is_one() {
                    return Err(Error::Invalid("denominator outside a p-local carrier".into()));
                }
            }
        }
        Ok(RingElement { ring: ring.clone(), terms, den, inexact })
    }

    pub fn zero(ring: &Ring) -> Self {
        RingElement { ring: ring.clone(), terms: Terms::new(), den: BigInt::one(), inexact: false }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: &Ring, c: impl Into<BigInt>) -> Self {
        Self::constant(ring, c.into())
    }

    pub fn constant(ring: &Ring, c: BigInt) -> Self {
        let mut t = Terms::new();
        t.insert(vec![0; ring.nvars()], c);
        Self::build(ring, t, BigInt::one(), false).expect("constants are always representable")
    }

    /// A rational constant num/den in a p-local carrier.
    pub fn fraction(ring: &Ring, num: BigInt, den: BigInt) -> Result<Self> {
        let mut t = Terms::new();
        t.insert(vec![0; ring.nvars()], num);
        Self::build(ring, t, den, false)
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self> {
        Self::monomial(ring, &[(name, Exp::int(1))], BigInt::one())
    }

    /// c * prod name^exp.
    pub fn monomial(ring: &Ring, powers: &[(&str, Exp)], c: BigInt) -> Result<Self> {
        let mut k = vec![0i64; ring.nvars()];
        for (name, e) in powers {
            let i = ring.var_index(name).ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
            k[i] += e.scaled(ring.p, ring.vars[i].cap)?;
        }
        let mut t = Terms::new();
        t.insert(k, c);
        Self::build(ring, t, BigInt::one(), false)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.ring)
    }

    pub fn inexact(&self) -> bool {
        self.inexact
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Raw stored terms (exponents scaled by p^cap per variable).
    pub fn raw_terms(&self) -> &Terms {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms with exponents as rationals.
    pub fn terms(&self) -> Vec<(Vec<Exp>, BigInt)> {
        self.terms
            .iter()
            .map(|(k, c)| {
                let e = k.iter().zip(&self.ring.vars).map(|(x, v)| Exp::from_scaled(*x, self.ring.p, v.cap)).collect();
                (e, c.clone())
            })
            .collect()
    }

    /// The integer value of a constant element with trivial denominator.
    pub fn as_integer(&self) -> Option<BigInt> {
        if !self.den.is_one() {
            return None;
        }
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                k.iter().all(|x| *x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&vec![0; self.ring.nvars()]).cloned().unwrap_or_default()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(format!("{} vs {}", self.ring.desc, other.ring.desc)))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut t = Terms::new();
        for (k, c) in &self.terms {
            t.insert(k.clone(), c * &other.den);
        }
        for (k, c) in &other.terms {
            *t.entry(k.clone()).or_default() += c * &self.den;
        }
        Self::build(&self.ring, t, &self.den * &other.den, self.inexact || other.inexact)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let t = self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect();
        Self::build(&self.ring, t, self.den.clone(), self.inexact).expect("negation preserves canonical form")
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prec: Vec<(usize, i64)> =
            self.ring.vars.iter().enumerate().filter_map(|(i, v)| v.precision.map(|p| (i, p))).collect();
        let mut t = Terms::new();
        let mut dropped = false;
        for (ka, ca) in &self.terms {
            'inner: for (kb, cb) in &other.terms {
                let k: Vec<i64> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                for (i, p) in &prec {
                    if k[*i] >= *p {
                        dropped = true;
                        continue 'inner;
                    }
                }
                *t.entry(k).or_default() += ca * cb;
            }
        }
        Self::build(&self.ring, t, &self.den * &other.den, self.inexact || other.inexact || dropped)
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let t = self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect();
        Self::build(&self.ring, t, self.den.clone(), self.inexact).expect("integer scaling is closed")
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// x^e for a signed exponent; negative powers need a unit.
    pub fn pow_signed(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.try_inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// y with p^k y = x, requiring every coefficient to be divisible.
    pub fn exact_div_p(&self, k: u32) -> Result<Self> {
        let pk = BigInt::from(self.ring.p).pow(k);
        match &self.ring.coeff {
            CoeffDomain::Integers => {
                let mut t = Terms::new();
                for (m, c) in &self.terms {
                    let (q, r) = c.div_rem(&pk);
                    if !r.is_zero() {
                        return Err(Error::Divisibility { k, detail: format!("coefficient {c}") });
                    }
                    t.insert(m.clone(), q);
                }
                Self::build(&self.ring, t, BigInt::one(), self.inexact)
            }
            CoeffDomain::PLocal { .. } => Self::build(&self.ring, self.terms.clone(), &self.den * pk, self.inexact),
            CoeffDomain::Mod(_) => Err(Error::Unsupported("division by p in a carrier with p-torsion".into())),
        }
    }

    /// Inverse of a unit: constants, or series with unit constant term.
    pub fn try_inverse(&self) -> Result<Self> {
        let r = &self.ring;
        let not_unit = || Error::NotUnit(format!("{self}"));
        if let Some(c) = self.as_constant_fraction() {
            let (num, den) = c;
            return match &r.coeff {
                CoeffDomain::Mod(_) => {
                    let inv = r.coeff_inverse(&num).ok_or_else(not_unit)?;
                    Ok(Self::constant(r, inv))
                }
                CoeffDomain::Integers => {
                    let inv = r.coeff_inverse(&num).ok_or_else(not_unit)?;
                    Ok(Self::constant(r, inv))
                }
                CoeffDomain::PLocal { .. } => {
                    if num.is_zero() || pval(&num, r.p) > 0 {
                        return Err(not_unit());
                    }
                    Self::fraction(r, den, num)
                }
            };
        }
        // series inversion: u = c (1 - h) with h topologically nilpotent
        if r.relations.is_empty() && r.vars.iter().all(|v| v.precision.is_some()) {
            let c0 = Self::build(r, {
                let mut t = Terms::new();
                t.insert(vec![0; r.nvars()], self.constant_term());
                t
            }, self.den.clone(), false)?;
            let c0inv = c0.try_inverse()?;
            let h = &Self::one(r) - &(&c0inv * self);
            let total: i64 = r.vars.iter().map(|v| v.precision.unwrap()).sum();
            let mut acc = Self::one(r);
            let mut hp = Self::one(r);
            for _ in 0..total {
                hp = &hp * &h;
                if hp.is_zero() {
                    break;
                }
                acc = &acc + &hp;
            }
            return Ok(&acc * &c0inv);
        }
        Err(not_unit())
    }

    fn as_constant_fraction(&self) -> Option<(BigInt, BigInt)> {
        match self.terms.len() {
            0 => Some((BigInt::zero(), BigInt::one())),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                k.iter().all(|x| *x == 0).then(|| (c.clone(), self.den.clone()))
            }
            _ => None,
        }
    }

    /// Multiply every exponent of every variable by p^k (k may be negative).
    pub fn scale_exponents(&self, k: i32) -> Result<Self> {
        let p = self.ring.p as i64;
        let mut t = Terms::new();
        for (m, c) in &self.terms {
            let mut e = m.clone();
            for x in e.iter_mut() {
                if k >= 0 {
                    *x = x.checked_mul(p.pow(k as u32)).ok_or_else(|| Error::ExponentRange("overflow".into()))?;
                } else {
                    let d = p.pow(k.unsigned_abs());
                    if *x % d != 0 {
                        return Err(Error::ExponentRange("root exceeds the exponent cap".into()));
                    }
                    *x /= d;
                }
            }
            *t.entry(e).or_default() += c;
        }
        Self::build(&self.ring, t, self.den.clone(), self.inexact)
    }

    /// Evaluation homomorphism sending variable i to images[i] in `target`.
    /// Exponents must be integral for every variable with a nontrivial image.
    pub fn substitute(&self, target: &Ring, images: &[RingElement]) -> Result<Self> {
        if images.len() != self.ring.nvars() {
            return Err(Error::LengthMismatch(format!("{} images for {} variables", images.len(), self.ring.nvars())));
        }
        let mut acc = Self::zero(target);
        let mut cache: BTreeMap<(usize, i64), RingElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, target.normalize_int(c.clone()));
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let scale = (self.ring.p as i64).pow(self.ring.vars[i].cap);
                if e % scale != 0 {
                    return Err(Error::ExponentRange(format!("fractional exponent in {}", self.ring.vars[i].name)));
                }
                let pw = match cache.get(&(i, *e)) {
                    Some(x) => x.clone(),
                    None => {
                        let x = images[i].pow((e / scale) as u64);
                        cache.insert((i, *e), x.clone());
                        x
                    }
                };
                term = term.try_mul(&pw)?;
            }
            acc = acc.try_add(&term)?;
        }
        acc.divide_by_integer(&self.den)
    }

    /// Divide by an integer that is a unit in the carrier (or any integer in p-local carriers).
    pub fn divide_by_integer(&self, n: &BigInt) -> Result<Self> {
        if n.is_one() {
            return Ok(self.clone());
        }
        match &self.ring.coeff {
            CoeffDomain::PLocal { .. } => Self::build(&self.ring, self.terms.clone(), &self.den * n, self.inexact),
            _ => {
                let inv = self.ring.coeff_inverse(n).ok_or_else(|| Error::NotUnit(n.to_string()))?;
                Ok(self.scale_int(&inv))
            }
        }
    }

    /// Map into a carrier with the same variable names (missing variables must not occur).
    pub fn coerce(&self, target: &Ring) -> Result<Self> {
        match (&self.ring.coeff, &target.coeff) {
            (CoeffDomain::Mod(m), CoeffDomain::Mod(n)) if !(m % n).is_zero() => {
                return Err(Error::DescriptorMismatch(format!("Z/{m} does not map to Z/{n}")))
            }
            (CoeffDomain::Mod(m), CoeffDomain::Integers | CoeffDomain::PLocal { .. }) => {
                return Err(Error::DescriptorMismatch(format!("Z/{m} does not map to a torsion-free ring")))
            }
            _ => {}
        }
        self.lift_into(target)
    }

    /// Rebuild the stored representative in another carrier with the same variable
    /// names, without checking that this is a ring map (e.g. lifting A/d to A).
    pub fn lift_into(&self, target: &Ring) -> Result<Self> {
        let mut t = Terms::new();
        let src = &self.ring;
        let map: Vec<Option<usize>> = src.vars.iter().map(|v| target.var_index(&v.name)).collect();
        for (m, c) in &self.terms {
            let mut k = vec![0i64; target.nvars()];
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::DescriptorMismatch(format!("variable {} missing in target", src.vars[i].name)))?;
                let ex = Exp::from_scaled(*e, src.p, src.vars[i].cap);
                k[j] = ex.scaled(target.p, target.vars[j].cap)?;
            }
            *t.entry(k).or_default() += c;
        }
        let x = Self::build(target, t, BigInt::one(), self.inexact)?;
        x.divide_by_integer(&self.den)
    }

    /// Element with every exponent of variable `name` set to zero, i.e. name -> 1.
    pub fn eval_var_at_one(&self, name: &str) -> Result<Self> {
        let i = self.ring.var_index(name).ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        let mut t = Terms::new();
        for (m, c) in &self.terms {
            let mut k = m.clone();
            k[i] = 0;
            *t.entry(k).or_default() += c;
        }
        Self::build(&self.ring, t, self.den.clone(), self.inexact)
    }

    /// Degree in a variable (stored units), None for zero.
    pub fn degree_in(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|k| k[var]).max()
    }

    pub fn to_json(&self) -> Value {
        let p = self.ring.p;
        Value::Array(
            self.terms()
                .into_iter()
                .map(|(e, c)| {
                    let cs = if self.den.is_one() { c.to_string() } else { format!("{c}/{}", self.den) };
                    json!([e.iter().map(|x| x.render(p)).collect::<Vec<_>>(), cs])
                })
                .collect(),
        )
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("element: {v}"));
        let mut acc = Self::zero(ring);
        for t in v.as_array().ok_or_else(bad)? {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let exps = pair[0].as_array().ok_or_else(bad)?;
            if exps.len() != ring.nvars() {
                return Err(bad());
            }
            let mut k = Vec::new();
            for (e, var) in exps.iter().zip(&ring.vars) {
                let ex = Exp::parse(e.as_str().ok_or_else(bad)?, ring.p)?;
                k.push(ex.scaled(ring.p, var.cap)?);
            }
            let cs = pair[1].as_str().ok_or_else(bad)?;
            let (num, den) = match cs.split_once('/') {
                Some((a, b)) => (a.parse::<BigInt>().map_err(|_| bad())?, b.parse::<BigInt>().map_err(|_| bad())?),
                None => (cs.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
            };
            let mut tm = Terms::new();
            tm.insert(k, num);
            acc = acc.try_add(&Self::build(ring, tm, den, false)?)?;
        }
        Ok(acc)
    }
}

fn reduce_relations(ring: &Ring, terms: &mut Terms) {
    let modulus = ring.modulus().cloned();
    let norm = |c: &mut BigInt| {
        if let Some(m) = &modulus {
            *c = c.mod_floor(m);
        }
    };
    for c in terms.values_mut() {
        norm(c);
    }
    terms.retain(|_, c| !c.is_zero());
    loop {
        let mut changed = false;
        for rel in &ring.relations {
            loop {
                let top = terms
                    .iter()
                    .filter(|(k, _)| k[rel.var] >= rel.degree)
                    .max_by_key(|(k, _)| k[rel.var])
                    .map(|(k, c)| (k.clone(), c.clone()));
                let Some((k, c)) = top else { break };
                changed = true;
                terms.remove(&k);
                for (te, tc) in &rel.tail {
                    let mut nk = k.clone();
                    nk[rel.var] -= rel.degree;
                    for (a, b) in nk.iter_mut().zip(te) {
                        *a += b;
                    }
                    let e = terms.entry(nk.clone()).or_default();
                    *e -= &c * tc;
                    norm(e);
                    if e.is_zero() {
                        terms.remove(&nk);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &'a RingElement) -> RingElement {
        self.try_add(rhs).unwrap_or_else(|e| panic!("ring addition: {e}"))
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &'a RingElement) -> RingElement {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("ring subtraction: {e}"))
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &'a RingElement) -> RingElement {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("ring multiplication: {e}"))
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_ref()
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let p = self.ring.p;
        let parts: Vec<String> = self
            .terms()
            .into_iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(&self.ring.vars)
                    .filter(|(x, _)| x.num != 0)
                    .map(|(x, v)| if *x == Exp::int(1) { v.name.clone() } else { format!("{}^({})", v.name, x.render(p)) })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        if self.den.is_one() {
            write!(f, "{}", parts.join(" + "))
        } else {
            write!(f, "({})/{}", parts.join(" + "), self.den)
        }
    }
}
