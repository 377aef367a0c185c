//! Comparison of the de Rham–Witt complex with prismatic cohomology computed through backends:
//! the crystalline backend, the ⊕⊕ target indexed by the basis, and a base-change utility.

pub mod base_change;
pub mod complex;
pub mod crystalline;
pub mod target;

pub use base_change::{base_change_check, base_change_suite, BaseChangeReport, BaseChangeSuite};
pub use complex::{crystalline_backend, de_rham_piece, CochainComplex, Cohomology, CrystallineBackend, WeightedCochainComplex};
pub use crystalline::{compare_crystalline, CompareEntry, CrystallineComparison};
pub use target::{comparison_map_build, target_decomposition, ComparisonMap, OplusOplusModule, TwistCheck};

#[cfg(test)]
mod tests;
