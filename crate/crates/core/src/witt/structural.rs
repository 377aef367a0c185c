//! Universal Witt polynomials over Z, computed by ghost recursion.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Pow;

use crate::algebra::IntPoly;
use crate::error::{Error, Result};

/// Largest supported Witt length for a prime.
pub fn max_length(p: u64) -> usize {
    match p {
        2 => 5,
        3 => 4,
        5 => 3,
        _ => 2,
    }
}

/// Term-count limit for a single universal polynomial.
pub const TERM_CAP: usize = 250_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Sum,
    Product,
    Negation,
    Frobenius,
}

type Cache = Mutex<HashMap<(u64, Kind), Arc<Vec<IntPoly>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Ghost component w_k of the variables offset..offset+k+1 in an nvars-variable ring.
pub fn ghost_poly(p: u64, k: usize, nvars: usize, offset: usize) -> IntPoly {
    let mut acc = IntPoly::zero(nvars);
    for i in 0..=k {
        let term = IntPoly::var(nvars, offset + i).pow(p.pow((k - i) as u32) as u32).scale(&BigInt::from(p).pow(i as u32));
        acc = acc.add(&term);
    }
    acc
}

fn ghost_target(p: u64, kind: Kind, k: usize, n: usize) -> IntPoly {
    match kind {
        Kind::Sum => ghost_poly(p, k, 2 * n, 0).add(&ghost_poly(p, k, 2 * n, n)),
        Kind::Product => ghost_poly(p, k, 2 * n, 0).mul(&ghost_poly(p, k, 2 * n, n)),
        Kind::Negation => ghost_poly(p, k, n, 0).neg(),
        Kind::Frobenius => ghost_poly(p, k + 1, n, 0),
    }
}

/// Arity per output coordinate for a given truncation length n.
fn arity(kind: Kind, n: usize) -> usize {
    match kind {
        Kind::Sum | Kind::Product => 2 * n,
        Kind::Negation | Kind::Frobenius => n,
    }
}

/// Polynomials Q_0..Q_{len-1} of `kind` for Witt length n (F has n-1 outputs).
pub fn polys(p: u64, kind: Kind, n: usize) -> Result<Arc<Vec<IntPoly>>> {
    if n == 0 || n > max_length(p) {
        return Err(Error::ResourceCap(format!("Witt length {n} outside the supported range 1..={} for p = {p}", max_length(p))));
    }
    // variable layout depends on n, so the cache is keyed on the padded layout of max_length
    let key_n = max_length(p);
    let outputs = if kind == Kind::Frobenius { n - 1 } else { n };
    if let Some(v) = cache().lock().unwrap().get(&(p, kind)) {
        if v.len() >= outputs {
            return Ok(Arc::new(restrict(&v[..outputs], kind, key_n, n)));
        }
    }
    let full = compute(p, kind, key_n, outputs)?;
    let mut c = cache().lock().unwrap();
    let entry = c.entry((p, kind)).or_insert_with(|| Arc::new(Vec::new()));
    if entry.len() < full.len() {
        *entry = Arc::new(full.clone());
    }
    Ok(Arc::new(restrict(&full[..outputs], kind, key_n, n)))
}

/// Re-index polynomials written in the padded layout to the layout of length n.
fn restrict(ps: &[IntPoly], kind: Kind, padded: usize, n: usize) -> Vec<IntPoly> {
    let two = matches!(kind, Kind::Sum | Kind::Product);
    ps.iter()
        .map(|q| {
            let mut out = IntPoly::zero(arity(kind, n));
            for (k, c) in &q.terms {
                let mut nk = vec![0u16; arity(kind, n)];
                nk[..n].copy_from_slice(&k[..n]);
                if two {
                    nk[n..].copy_from_slice(&k[padded..padded + n]);
                }
                out.terms.insert(nk, c.clone());
            }
            out
        })
        .collect()
}

fn compute(p: u64, kind: Kind, padded: usize, outputs: usize) -> Result<Vec<IntPoly>> {
    let mut out: Vec<IntPoly> = Vec::new();
    for k in 0..outputs {
        let mut acc = ghost_target(p, kind, k, padded);
        for (i, q) in out.iter().enumerate() {
            let pw = q.pow(p.pow((k - i) as u32) as u32).scale(&BigInt::from(p).pow(i as u32));
            acc = acc.sub(&pw);
            if acc.len() > TERM_CAP {
                return Err(Error::ResourceCap(format!("universal polynomial exceeds {TERM_CAP} terms at coordinate {k}")));
            }
        }
        let q = acc.exact_div_p(p, k as u32)?;
        if q.len() > TERM_CAP {
            return Err(Error::ResourceCap(format!("universal polynomial exceeds {TERM_CAP} terms at coordinate {k}")));
        }
        out.push(q);
    }
    Ok(out)
}

/// The sum, product and negation polynomials of one truncation length.
#[derive(Clone, Debug)]
pub struct StructuralPolySet {
    pub p: u64,
    pub n: usize,
    pub sums: Arc<Vec<IntPoly>>,
    pub products: Arc<Vec<IntPoly>>,
    pub negations: Arc<Vec<IntPoly>>,
}

pub fn structural_polys(p: u64, n: usize) -> Result<StructuralPolySet> {
    Ok(StructuralPolySet {
        p,
        n,
        sums: polys(p, Kind::Sum, n)?,
        products: polys(p, Kind::Product, n)?,
        negations: polys(p, Kind::Negation, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(n: usize, exps: &[(usize, u16)], c: i64) -> IntPoly {
        let mut k = vec![0u16; n];
        for (i, e) in exps {
            k[*i] = *e;
        }
        let mut q = IntPoly::zero(n);
        q.terms.insert(k, BigInt::from(c));
        q
    }

    #[test]
    fn low_degree_polynomials_for_p2() {
        let s = structural_polys(2, 2).unwrap();
        // variables x0 x1 y0 y1
        assert_eq!(s.sums[0], mono(4, &[(0, 1)], 1).add(&mono(4, &[(2, 1)], 1)));
        let s1 = mono(4, &[(1, 1)], 1).add(&mono(4, &[(3, 1)], 1)).add(&mono(4, &[(0, 1), (2, 1)], -1));
        assert_eq!(s.sums[1], s1);
        let p1 = mono(4, &[(0, 2), (3, 1)], 1).add(&mono(4, &[(2, 2), (1, 1)], 1)).add(&mono(4, &[(1, 1), (3, 1)], 2));
        assert_eq!(s.products[1], p1);
    }

    #[test]
    fn ghost_compatibility_of_sums_and_products() {
        for (p, n) in [(2u64, 3usize), (3, 2)] {
            let s = structural_polys(p, n).unwrap();
            for k in 0..n {
                let w = ghost_poly(p, k, n, 0);
                let ws = w.compose(&s.sums);
                assert_eq!(ws, ghost_poly(p, k, 2 * n, 0).add(&ghost_poly(p, k, 2 * n, n)));
                let wp = w.compose(&s.products);
                assert_eq!(wp, ghost_poly(p, k, 2 * n, 0).mul(&ghost_poly(p, k, 2 * n, n)));
            }
        }
    }

    #[test]
    fn negation_for_p2_is_not_coordinatewise() {
        let s = structural_polys(2, 2).unwrap();
        assert_ne!(s.negations[1], IntPoly::var(2, 1).neg());
    }

    #[test]
    fn lengths_beyond_the_cap_are_refused() {
        assert!(matches!(polys(3, Kind::Sum, 5), Err(Error::ResourceCap(_))));
    }
}
