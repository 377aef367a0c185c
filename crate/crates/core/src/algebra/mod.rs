//! Exact coefficient rings and linear algebra over Z/p^N.

pub mod descriptor;
pub mod element;
pub mod intpoly;
pub mod modpn;

pub use descriptor::{CoeffDomain, Exp, ExponentMonoid, Ring, RingDescriptor, TermList};
pub use element::RingElement;
pub use intpoly::IntPoly;
pub use modpn::{howell_form, IntMatrixModPN, Submodule, TrackedSpan, Zpn};

use num_traits::One;

use crate::error::{Error, Result};

/// The generator's terms, requiring integral coefficients.
pub fn generator_terms(gen: &RingElement) -> Result<TermList> {
    if !gen.denominator().is_one() {
        return Err(Error::UnsupportedQuotient("generator with denominators".into()));
    }
    Ok(gen.terms())
}

/// The carrier base/(gen).
pub fn quotient_ring(gen: &RingElement) -> Result<Ring> {
    if gen.is_zero() {
        return Err(Error::UnsupportedQuotient("quotient by zero".into()));
    }
    RingDescriptor::quotient(gen.ring().desc.clone(), generator_terms(gen)?).compile()
}

/// Canonical representative of x modulo (gen), as an element of base/(gen).
pub fn quotient_reduce(x: &RingElement, gen: &RingElement) -> Result<RingElement> {
    let q = quotient_ring(gen)?;
    x.coerce(&q)
}
