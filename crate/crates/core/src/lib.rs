//! Exact computer algebra for truncated Witt vectors, δ-rings and prisms,
//! finite-depth tilting, and the de Rham–Witt complex of polynomial algebras.

pub mod algebra;
pub mod compare;
pub mod drw;
pub mod error;
pub mod prism;
pub mod report;
pub mod tilt;
pub mod witt;

pub use algebra::{Exp, IntMatrixModPN, IntPoly, Ring, RingDescriptor, RingElement, Submodule, Zpn};
pub use error::{Error, Result};
pub use report::{merge_reports, Entry, MergedTable, Report, Status};
pub use witt::WittVector;
