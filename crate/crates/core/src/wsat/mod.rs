//! Weak saturation: embedding search, bootstrap closure and exact search.

pub mod closure;
pub mod embedding;
pub mod exact;

pub use closure::{
    closure, closure_shuffled, is_weakly_saturated, ClosureResult, Family, SaturationCertificate,
    SaturationStep,
};
pub use embedding::{creates_new_copy, is_valid_embedding, HostSet, PreparedPattern};
pub use exact::{
    wsat_exact, wsat_family_vs_disjoint, wsat_r1, FamilyComparison, LevelOutcome, WsatExactResult,
    WsatOptions,
};
