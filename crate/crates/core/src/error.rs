use thiserror::Error;

/// Errors raised by the algebra, Witt, prism, tilt and de Rham-Witt layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("element is not a unit: {0}")]
    NotUnit(String),
    #[error("unsupported quotient: {0}")]
    UnsupportedQuotient(String),
    #[error("coefficient not divisible by p^{k}: {detail}")]
    Divisibility { k: u32, detail: String },
    #[error("exponent outside the carrier's monoid: {0}")]
    ExponentRange(String),
    #[error("denominator cap exceeded: {0}")]
    DenominatorCap(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("no solution")]
    NoSolution,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a Frobenius lift: {0}")]
    NotFrobeniusLift(String),
    #[error("insufficient depth or precision: {0}")]
    Depth(String),
    #[error("rewrite step cap {0} exceeded")]
    StepCap(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
