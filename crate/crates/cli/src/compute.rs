//! Commands that compute one object and dump it.

use pwl_core::drw::{drw_normalize, lz_basis, parse_word, Base, DrwSpace};
use pwl_core::prism::{Precision, Preset, PrismModel};
use pwl_core::{Entry, Error, Result, Ring, RingDescriptor, RingElement, Status, WittVector};
use serde_json::{json, Value};

use crate::args::*;

/// `Fp`/`F<p>`, `Z/<m>`, `Z/<p>^<k>` or `Z`.
pub fn parse_ring(spec: &str, p: u64) -> Result<Ring> {
    let s = spec.trim();
    let desc = if s == "Fp" || s == format!("F{p}") {
        RingDescriptor::prime_field(p)
    } else if s == "Z" {
        RingDescriptor::integers(p)
    } else if let Some(m) = s.strip_prefix("Z/") {
        let modulus: u64 = match m.split_once('^') {
            Some((b, e)) => {
                let (b, e): (u64, u32) = (num(b)?, num(e)?);
                b.checked_pow(e).ok_or_else(|| Error::Invalid(format!("modulus {m} overflows")))?
            }
            None => num(m)?,
        };
        if !is_power_of(modulus, p) {
            return Err(Error::Invalid(format!("modulus {modulus} is not a power of {p}")));
        }
        RingDescriptor::integers_mod(p, modulus)
    } else {
        return Err(Error::Parse(format!("unknown ring {spec}")));
    };
    desc.compile()
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not a number: {s}")))
}

fn is_power_of(mut m: u64, p: u64) -> bool {
    if m < p {
        return false;
    }
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

pub fn parse_ints(s: &str) -> Result<Vec<i64>> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("{s}: {e}")))
}

fn witt_input(p: u64, ring: &str, n: Option<usize>, coords: &str) -> Result<WittVector> {
    let r = parse_ring(ring, p)?;
    let xs = parse_ints(coords)?;
    if xs.is_empty() || n.is_some_and(|n| n != xs.len()) {
        return Err(Error::Invalid(format!("{coords} does not have length {}", n.unwrap_or(1))));
    }
    WittVector::from_ints(&r, &xs)
}

fn strings(xs: &[RingElement]) -> Vec<String> {
    xs.iter().map(|c| c.to_string()).collect()
}

pub fn witt(cmd: &WittCmd) -> Result<Vec<Entry>> {
    let details = match cmd {
        WittCmd::Add(a) | WittCmd::Mul(a) => {
            let x = witt_input(a.p, &a.ring, a.n, &a.x)?;
            let y = witt_input(a.p, &a.ring, a.n, &a.y)?;
            let (op, z) = match cmd {
                WittCmd::Add(_) => ("add", x.add(&y)?),
                _ => ("mul", x.mul(&y)?),
            };
            json!({"op": op, "x": strings(x.coords()), "y": strings(y.coords()), "result": strings(z.coords())})
        }
        WittCmd::Ghost(a) => {
            let x = witt_input(a.p, &a.ring, a.n, &a.x)?;
            json!({"op": "ghost", "x": strings(x.coords()), "ghost": strings(&x.ghost())})
        }
        WittCmd::Fvr(a) => {
            let x = witt_input(a.p, &a.ring, a.n, &a.x)?;
            let opt = |r: Result<WittVector>| r.ok().map(|w| strings(w.coords()));
            json!({
                "op": "fvr",
                "x": strings(x.coords()),
                "F": opt(x.frobenius()),
                "V": strings(x.verschiebung().coords()),
                "R": opt(x.restriction()),
            })
        }
    };
    Ok(vec![Entry::new("witt.arithmetic", Status::Pass, details)])
}

fn model(preset: &str, p: u64, m: u32) -> Result<PrismModel> {
    match Preset::parse(preset)? {
        Preset::CharpPerfect => PrismModel::charp_perfect(p, m),
        other => PrismModel::from_preset(other, p),
    }
}

pub fn prism(cmd: &PrismCmd, rng: &mut impl rand::Rng) -> Result<Vec<Entry>> {
    match cmd {
        PrismCmd::Rn(a) => {
            let m = model(&a.preset, a.p, 3)?;
            let xs = parse_ints(&a.input)?;
            if xs.is_empty() || a.n.is_some_and(|n| n != xs.len()) {
                return Err(Error::Invalid(format!("input {} does not have length {:?}", a.input, a.n)));
            }
            let x = WittVector::from_ints(&m.ring_mod_d()?, &xs)?;
            let v = m.universal_map_rn(&x, Precision::for_level(a.p, xs.len() as u32))?;
            let modulus = a.p.checked_pow(v.precision);
            Ok(vec![Entry::new(
                "prism.rn.value",
                Status::Pass,
                json!({"preset": m.preset.name(), "input": xs, "value": v.value.to_string(), "modulus": modulus, "precision": v.precision, "route": v.route}),
            )])
        }
        PrismCmd::Embed(a) => {
            if let Some(inp) = &a.input {
                let m = model(&a.preset, a.p, 3)?;
                let x = WittVector::from_ints(&m.ring_mod_d()?, &parse_ints(inp)?)?;
                let emb = m.rn_product_embedding(&x)?;
                return Ok(vec![Entry::new("plumbing", Status::Pass, json!({"preset": m.preset.name(), "embedding": strings(&emb)}))]);
            }
            if Preset::parse(&a.preset)? != Preset::QDeRham {
                return Err(Error::Invalid("the generator check runs on the q-deRham preset".into()));
            }
            let js: Vec<usize> = match a.j {
                Some(j) => vec![j],
                None => (0..a.n).collect(),
            };
            js.into_iter()
                .map(|j| {
                    let c = pwl_core::prism::embedding_formula_check(a.p, a.n, j)?;
                    Ok(Entry::new("prism.rn.generator", Status::from_bool(c.pass), to_value(&c)))
                })
                .collect()
        }
        PrismCmd::CheckSquare(a) => {
            let m = model(&a.preset, a.p, 3)?;
            let rep = m.lambda_square_check(a.r, a.samples, rng)?;
            Ok(vec![Entry::new("prism.lambda-square", Status::from_bool(rep.pass), to_value(&rep))])
        }
        PrismCmd::Validate(a) => {
            let m = model(&a.preset, a.p, a.m)?;
            let (d, phid) = m.check_distinguished(a.precision)?;
            let mem = m.membership_p(Precision { coeff: a.precision, series: 2 * a.precision })?;
            let pass = d.distinguished && phid.distinguished && mem.holds;
            Ok(vec![Entry::new(
                "prism.validate",
                Status::from_bool(pass),
                json!({
                    "preset": m.preset.name(),
                    "d": m.d_n(1)?.to_string(),
                    "d_distinguished": d.distinguished,
                    "phi_d_distinguished": phid.distinguished,
                    "delta_d": d.delta.to_string(),
                    "p_in_ideal": mem.holds,
                    "note": mem.detail,
                }),
            )])
        }
    }
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn drw_basis(a: &DrwBasis) -> Result<Vec<Entry>> {
    let space = DrwSpace::new(a.p, a.vars, Base::parse(&a.base)?)?;
    Ok(lz_basis(&space, a.r, a.i, a.deg_cap)?
        .into_iter()
        .map(|e| Entry::weighted("drw.basis", e.weight.to_string(), Status::Pass, json!({"weight": e.weight, "partition": e.partition, "coeff-module": e.coeff_module})))
        .collect())
}

pub fn drw_normalize_cmd(a: &DrwNormalize) -> Result<Vec<Entry>> {
    let space = DrwSpace::polynomial(a.p, a.vars)?;
    let word = parse_word(&a.word, a.vars)?;
    let x = drw_normalize(&word, &space, a.r)?;
    Ok(vec![Entry::new("drw.normalize", Status::Pass, json!({"word": a.word, "normal_form": x.to_string(), "terms": x.summary()}))])
}
