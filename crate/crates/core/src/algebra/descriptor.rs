//! Ring descriptors and their compiled carriers.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A rational exponent num / p^den_val, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exp {
    pub num: i64,
    pub den_val: u32,
}

impl Exp {
    pub fn int(n: i64) -> Self {
        Exp { num: n, den_val: 0 }
    }

    pub fn new(num: i64, den_val: u32, p: u64) -> Self {
        let (mut num, mut den_val) = (num, den_val);
        while den_val > 0 && num % p as i64 == 0 {
            num /= p as i64;
            den_val -= 1;
        }
        Exp { num, den_val }
    }

    /// Integer representative after scaling by p^cap.
    pub fn scaled(&self, p: u64, cap: u32) -> Result<i64> {
        if self.den_val > cap {
            return Err(Error::DenominatorCap(format!("exponent {}/{}^{} exceeds cap p^{}", self.num, p, self.den_val, cap)));
        }
        Ok(self.num * (p as i64).pow(cap - self.den_val))
    }

    pub fn from_scaled(v: i64, p: u64, cap: u32) -> Self {
        Exp::new(v, cap, p)
    }

    pub fn render(&self, p: u64) -> String {
        if self.den_val == 0 {
            self.num.to_string()
        } else {
            format!("{}/{}", self.num, p.pow(self.den_val))
        }
    }

    pub fn parse(s: &str, p: u64) -> Result<Self> {
        let bad = || Error::Parse(format!("bad exponent '{s}'"));
        match s.split_once('/') {
            None => Ok(Exp::int(s.trim().parse().map_err(|_| bad())?)),
            Some((a, b)) => {
                let num: i64 = a.trim().parse().map_err(|_| bad())?;
                let mut den: u64 = b.trim().parse().map_err(|_| bad())?;
                let mut k = 0;
                while den > 1 && den % p == 0 {
                    den /= p;
                    k += 1;
                }
                if den != 1 {
                    return Err(Error::Parse(format!("exponent denominator in '{s}' is not a power of {p}")));
                }
                Ok(Exp::new(num, k, p))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExponentMonoid {
    NonNegInt,
    /// Nonnegative rationals with denominator dividing p^cap.
    PAdic { cap: u32 },
}

impl ExponentMonoid {
    pub fn cap(&self) -> u32 {
        match self {
            ExponentMonoid::NonNegInt => 0,
            ExponentMonoid::PAdic { cap } => *cap,
        }
    }
}

/// Sparse integral polynomial data attached to a descriptor (quotient generators).
pub type TermList = Vec<(Vec<Exp>, BigInt)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers { p: u64 },
    IntegersMod { p: u64, m: BigInt },
    PLocalRationals { p: u64, cap: u32 },
    Poly { base: Box<RingDescriptor>, vars: Vec<String>, monoid: ExponentMonoid },
    TruncatedSeries { base: Box<RingDescriptor>, var: String, precision: u64 },
    Quotient { base: Box<RingDescriptor>, generator: TermList },
}

impl RingDescriptor {
    pub fn p(&self) -> u64 {
        match self {
            RingDescriptor::Integers { p } | RingDescriptor::IntegersMod { p, .. } | RingDescriptor::PLocalRationals { p, .. } => *p,
            RingDescriptor::Poly { base, .. } | RingDescriptor::TruncatedSeries { base, .. } | RingDescriptor::Quotient { base, .. } => base.p(),
        }
    }

    pub fn integers(p: u64) -> Self {
        RingDescriptor::Integers { p }
    }

    pub fn integers_mod(p: u64, m: impl Into<BigInt>) -> Self {
        RingDescriptor::IntegersMod { p, m: m.into() }
    }

    /// F_p as Z/p.
    pub fn prime_field(p: u64) -> Self {
        Self::integers_mod(p, p)
    }

    pub fn poly(base: RingDescriptor, vars: &[&str]) -> Self {
        RingDescriptor::Poly { base: Box::new(base), vars: vars.iter().map(|s| s.to_string()).collect(), monoid: ExponentMonoid::NonNegInt }
    }

    pub fn padic_poly(base: RingDescriptor, vars: &[&str], cap: u32) -> Self {
        RingDescriptor::Poly { base: Box::new(base), vars: vars.iter().map(|s| s.to_string()).collect(), monoid: ExponentMonoid::PAdic { cap } }
    }

    pub fn series(base: RingDescriptor, var: &str, precision: u64) -> Self {
        RingDescriptor::TruncatedSeries { base: Box::new(base), var: var.to_string(), precision }
    }

    pub fn quotient(base: RingDescriptor, generator: TermList) -> Self {
        RingDescriptor::Quotient { base: Box::new(base), generator }
    }

    pub fn compile(&self) -> Result<Ring> {
        Ok(Arc::new(Carrier::compile(self)?))
    }

    pub fn to_json(&self) -> Value {
        let p = self.p();
        let term_json = |t: &TermList| -> Value {
            Value::Array(
                t.iter()
                    .map(|(e, c)| json!([e.iter().map(|x| x.render(p)).collect::<Vec<_>>(), c.to_string()]))
                    .collect(),
            )
        };
        match self {
            RingDescriptor::Integers { .. } => json!({"variant": "Integers", "p": p, "args": []}),
            RingDescriptor::IntegersMod { m, .. } => json!({"variant": "IntegersMod", "p": p, "args": [m.to_string()]}),
            RingDescriptor::PLocalRationals { cap, .. } => json!({"variant": "PLocalRationals", "p": p, "args": [cap]}),
            RingDescriptor::Poly { base, vars, monoid } => {
                let m = match monoid {
                    ExponentMonoid::NonNegInt => json!("int"),
                    ExponentMonoid::PAdic { cap } => json!({"padic": cap}),
                };
                json!({"variant": "Poly", "p": p, "args": [base.to_json(), vars, m]})
            }
            RingDescriptor::TruncatedSeries { base, var, precision } => {
                json!({"variant": "TruncatedSeries", "p": p, "args": [base.to_json(), var, precision]})
            }
            RingDescriptor::Quotient { base, generator } => {
                json!({"variant": "Quotient", "p": p, "args": [base.to_json(), term_json(generator)]})
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("ring descriptor: {m}"));
        let variant = v.get("variant").and_then(Value::as_str).ok_or_else(|| bad("missing variant"))?;
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"))?;
        let args = v.get("args").and_then(Value::as_array).ok_or_else(|| bad("missing args"))?;
        let arg = |i: usize| args.get(i).ok_or_else(|| bad("too few args"));
        let d = match variant {
            "Integers" => RingDescriptor::Integers { p },
            "IntegersMod" => {
                let m = arg(0)?.as_str().ok_or_else(|| bad("modulus"))?.parse::<BigInt>().map_err(|_| bad("modulus"))?;
                RingDescriptor::IntegersMod { p, m }
            }
            "PLocalRationals" => RingDescriptor::PLocalRationals { p, cap: arg(0)?.as_u64().ok_or_else(|| bad("cap"))? as u32 },
            "Poly" => {
                let base = Box::new(Self::from_json(arg(0)?)?);
                let vars = arg(1)?
                    .as_array()
                    .ok_or_else(|| bad("vars"))?
                    .iter()
                    .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("var name")))
                    .collect::<Result<Vec<_>>>()?;
                let monoid = match arg(2)? {
                    Value::String(s) if s == "int" => ExponentMonoid::NonNegInt,
                    Value::Object(o) => ExponentMonoid::PAdic {
                        cap: o.get("padic").and_then(Value::as_u64).ok_or_else(|| bad("monoid cap"))? as u32,
                    },
                    _ => return Err(bad("monoid")),
                };
                RingDescriptor::Poly { base, vars, monoid }
            }
            "TruncatedSeries" => RingDescriptor::TruncatedSeries {
                base: Box::new(Self::from_json(arg(0)?)?),
                var: arg(1)?.as_str().ok_or_else(|| bad("series var"))?.to_string(),
                precision: arg(2)?.as_u64().ok_or_else(|| bad("precision"))?,
            },
            "Quotient" => {
                let base = Box::new(Self::from_json(arg(0)?)?);
                let mut gen = TermList::new();
                for t in arg(1)?.as_array().ok_or_else(|| bad("generator"))? {
                    let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("generator term"))?;
                    let exps = pair[0]
                        .as_array()
                        .ok_or_else(|| bad("exponents"))?
                        .iter()
                        .map(|e| e.as_str().ok_or_else(|| bad("exponent")).and_then(|s| Exp::parse(s, p)))
                        .collect::<Result<Vec<_>>>()?;
                    let c = pair[1].as_str().ok_or_else(|| bad("coefficient"))?.parse::<BigInt>().map_err(|_| bad("coefficient"))?;
                    gen.push((exps, c));
                }
                RingDescriptor::Quotient { base, generator: gen }
            }
            other => return Err(bad(&format!("unknown variant {other}"))),
        };
        Ok(d)
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers { .. } => write!(f, "Z"),
            RingDescriptor::IntegersMod { m, .. } => write!(f, "Z/{m}"),
            RingDescriptor::PLocalRationals { p, .. } => write!(f, "Z_({p})"),
            RingDescriptor::Poly { base, vars, monoid } => match monoid {
                ExponentMonoid::NonNegInt => write!(f, "{base}[{}]", vars.join(",")),
                ExponentMonoid::PAdic { cap } => write!(f, "{base}[{}; 1/p^{cap}]", vars.join(",")),
            },
            RingDescriptor::TruncatedSeries { base, var, precision } => write!(f, "{base}[[{var}]]/{var}^{precision}"),
            RingDescriptor::Quotient { base, generator } => write!(f, "{base}/({} terms)", generator.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffDomain {
    Integers,
    Mod(BigInt),
    /// Rationals whose denominators have p-adic valuation at most `cap`.
    PLocal { cap: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    /// Exponents are stored multiplied by p^cap.
    pub cap: u32,
    /// Series truncation: stored exponents >= precision are dropped.
    pub precision: Option<i64>,
}

/// A monic relation x_var^degree = -(tail), with tail of lower degree in x_var.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub var: usize,
    pub degree: i64,
    pub tail: Vec<(Vec<i64>, BigInt)>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct Carrier {
    pub desc: RingDescriptor,
    pub p: u64,
    pub coeff: CoeffDomain,
    pub vars: Vec<VarSpec>,
    pub relations: Vec<Relation>,
}

pub type Ring = Arc<Carrier>;

impl Carrier {
    fn compile(desc: &RingDescriptor) -> Result<Carrier> {
        let p = desc.p();
        let base = |coeff| Carrier { desc: desc.clone(), p, coeff, vars: Vec::new(), relations: Vec::new() };
        match desc {
            RingDescriptor::Integers { .. } => Ok(base(CoeffDomain::Integers)),
            RingDescriptor::IntegersMod { m, .. } => {
                if !m.is_positive() {
                    return Err(Error::Invalid(format!("modulus {m} must be positive")));
                }
                Ok(base(CoeffDomain::Mod(m.clone())))
            }
            RingDescriptor::PLocalRationals { cap, .. } => Ok(base(CoeffDomain::PLocal { cap: *cap })),
            RingDescriptor::Poly { base: b, vars, monoid } => {
                let mut c = Carrier::compile(b)?;
                for v in vars {
                    c.add_var(v, monoid.cap(), None)?;
                }
                c.desc = desc.clone();
                Ok(c)
            }
            RingDescriptor::TruncatedSeries { base: b, var, precision } => {
                if *precision == 0 {
                    return Err(Error::Invalid("series precision must be positive".into()));
                }
                let mut c = Carrier::compile(b)?;
                c.add_var(var, 0, Some(*precision as i64))?;
                c.desc = desc.clone();
                Ok(c)
            }
            RingDescriptor::Quotient { base: b, generator } => {
                let mut c = Carrier::compile(b)?;
                c.add_relation(generator)?;
                c.desc = desc.clone();
                Ok(c)
            }
        }
    }

    fn add_var(&mut self, name: &str, cap: u32, precision: Option<i64>) -> Result<()> {
        if self.vars.iter().any(|v| v.name == name) {
            return Err(Error::Invalid(format!("variable {name} declared twice")));
        }
        self.vars.push(VarSpec { name: name.to_string(), cap, precision });
        Ok(())
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_torsion_free(&self) -> bool {
        !matches!(self.coeff, CoeffDomain::Mod(_)) && self.relations.is_empty()
    }

    /// Whether every quotient relation is monic over a torsion-free coefficient ring,
    /// so the carrier is a free module over its coefficients.
    pub fn is_p_torsion_free(&self) -> bool {
        !matches!(self.coeff, CoeffDomain::Mod(_))
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match &self.coeff {
            CoeffDomain::Mod(m) => Some(m),
            _ => None,
        }
    }

    fn scale_exps(&self, exps: &[Exp]) -> Result<Vec<i64>> {
        if exps.len() != self.vars.len() {
            return Err(Error::LengthMismatch(format!("{} exponents for {} variables", exps.len(), self.vars.len())));
        }
        exps.iter().zip(&self.vars).map(|(e, v)| e.scaled(self.p, v.cap)).collect()
    }

    fn add_relation(&mut self, gen: &TermList) -> Result<()> {
        let mut terms: Vec<(Vec<i64>, BigInt)> = Vec::new();
        for (e, c) in gen {
            if !c.is_zero() {
                terms.push((self.scale_exps(e)?, c.clone()));
            }
        }
        if terms.is_empty() {
            return Err(Error::UnsupportedQuotient("quotient by zero".into()));
        }
        let moving: Vec<usize> = (0..self.vars.len()).filter(|i| terms.iter().any(|(e, _)| e[*i] != 0)).collect();
        if moving.is_empty() {
            // integer generator: change the coefficient domain
            let g: BigInt = terms[0].1.abs();
            let newm = match &self.coeff {
                CoeffDomain::Integers => g,
                CoeffDomain::Mod(m) => m.gcd(&g),
                CoeffDomain::PLocal { .. } => {
                    let mut q = BigInt::one();
                    let mut g = g;
                    let pb = BigInt::from(self.p);
                    while (&g % &pb).is_zero() {
                        g /= &pb;
                        q *= &pb;
                    }
                    q
                }
            };
            self.coeff = CoeffDomain::Mod(newm.clone());
            for rel in &mut self.relations {
                for (_, c) in rel.tail.iter_mut() {
                    *c = c.mod_floor(&newm);
                }
                rel.tail.retain(|(_, c)| !c.is_zero());
            }
            return Ok(());
        }
        // leading variable: the last variable that occurs
        let var = *moving.last().unwrap();
        if self.vars[var].cap != 0 {
            return Err(Error::UnsupportedQuotient(format!("generator in fractional-exponent variable {}", self.vars[var].name)));
        }
        if self.relations.iter().any(|r| r.var == var) {
            return Err(Error::UnsupportedQuotient(format!("second relation in variable {}", self.vars[var].name)));
        }
        let degree = terms.iter().map(|(e, _)| e[var]).max().unwrap();
        let lead: Vec<&(Vec<i64>, BigInt)> = terms.iter().filter(|(e, _)| e[var] == degree).collect();
        if lead.len() != 1 || lead[0].0.iter().enumerate().any(|(i, x)| i != var && *x != 0) {
            return Err(Error::UnsupportedQuotient("leading coefficient is not a constant".into()));
        }
        let inv = self
            .coeff_inverse(&lead[0].1)
            .ok_or_else(|| Error::UnsupportedQuotient(format!("leading coefficient {} is not a unit", lead[0].1)))?;
        let tail = terms
            .iter()
            .filter(|(e, _)| e[var] != degree)
            .map(|(e, c)| (e.clone(), self.normalize_int(c * &inv)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        self.relations.push(Relation { var, degree, tail });
        Ok(())
    }

    /// Reduce an integer coefficient into canonical form (Mod domains only).
    pub fn normalize_int(&self, c: BigInt) -> BigInt {
        match &self.coeff {
            CoeffDomain::Mod(m) => c.mod_floor(m),
            _ => c,
        }
    }

    /// Inverse of an integer constant as an integer, when it exists without denominators.
    pub fn coeff_inverse(&self, c: &BigInt) -> Option<BigInt> {
        match &self.coeff {
            CoeffDomain::Mod(m) => {
                let e = c.mod_floor(m).extended_gcd(m);
                if e.gcd.is_one() {
                    Some(e.x.mod_floor(m))
                } else {
                    None
                }
            }
            _ if c.is_one() => Some(BigInt::one()),
            _ if *c == -BigInt::one() => Some(-BigInt::one()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_normalization_and_parsing() {
        assert_eq!(Exp::new(2, 1, 2), Exp::int(1));
        assert_eq!(Exp::parse("3/4", 2).unwrap(), Exp { num: 3, den_val: 2 });
        assert!(Exp::parse("1/3", 2).is_err());
        assert_eq!(Exp { num: 3, den_val: 2 }.scaled(2, 3).unwrap(), 6);
        assert!(Exp { num: 1, den_val: 3 }.scaled(2, 2).is_err());
    }

    #[test]
    fn descriptor_json_roundtrip() {
        let d = RingDescriptor::quotient(
            RingDescriptor::poly(RingDescriptor::integers(2), &["q"]),
            vec![(vec![Exp::int(1)], BigInt::from(1)), (vec![Exp::int(0)], BigInt::from(1))],
        );
        assert_eq!(RingDescriptor::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn non_monic_generator_is_rejected() {
        let d = RingDescriptor::quotient(
            RingDescriptor::poly(RingDescriptor::integers(2), &["q"]),
            vec![(vec![Exp::int(1)], BigInt::from(2)), (vec![Exp::int(0)], BigInt::from(1))],
        );
        assert!(matches!(d.compile(), Err(Error::UnsupportedQuotient(_))));
    }

    #[test]
    fn integer_quotient_changes_coefficients() {
        let d = RingDescriptor::quotient(RingDescriptor::integers(3), vec![(vec![], BigInt::from(9))]);
        assert_eq!(d.compile().unwrap().coeff, CoeffDomain::Mod(BigInt::from(9)));
    }
}
