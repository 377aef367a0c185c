//! δ-rings, prism presets and the universal map r_n.

pub mod checks;
pub mod delta;
pub mod model;
pub mod rn;

pub use checks::{crystalline_bijection_check, embedding_formula_check, rn_hom_check, BijectionCheck, EmbeddingCheck, HomCheck};
pub use delta::{DeltaRing, DistinguishedCert, FrobeniusLift, UnitCriterion};
pub use model::{MembershipCert, PhiProductQuotient, Precision, Preset, PrismModel};
pub use rn::{agree_mod, FiniteQuotient, LambdaSquareReport, RnValue};
