//! The de Rham–Witt complex W_rΩ^• of F_p[T_1..T_k] and its Laurent localization: the basis
//! indexed by weights and partitions, a normalizer built on the procomplex identities, the
//! integral-forms model as an independent route, and the filtration and Cartier checks.

pub mod axioms;
pub mod basis;
pub mod cartier;
pub mod deligne;
pub mod forms;
pub mod normal;
pub mod ops;
pub mod weight;
pub mod word;

pub use axioms::{axiom_suite, random_element, AxiomReport, AxiomResult};
pub use basis::{lz_basis, BasisEntry, BasisKey, DrwElement, DrwSpace};
pub use cartier::{cycles_boundaries, filtration_check, higher_cartier_check, CartierReport, CyclesBoundaries, FiltrationReport};
pub use deligne::{basis_iso_check, deligne_quotient, one_variable_decomposition, BasisIsoCheck, DeligneQuotient, OneVariableReport};
pub use normal::{Rewriter, VdvForm};
pub use ops::{drw_ops, to_witt, DrwOp};
pub use weight::{enumerate_weights, partitions_pa, Base, Weight, WeightPartition};
pub use word::{drw_normalize, parse_word, FreeWittWord};

#[cfg(test)]
mod tests;
