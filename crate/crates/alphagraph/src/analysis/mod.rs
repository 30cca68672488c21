//! Reachability analysis: exact graph audits, worst-case bound evaluators
//! for prune tuning, tight worst-case point configurations, and a
//! randomized verifier for the Euclidean optimum those bounds rest on.

mod audit;
mod bounds;
mod lemma_a;
mod tight;

pub use audit::{audit_reachability, audit_reachability_with_mode, ReachabilityReport};
pub use bounds::{beta, bound_after_tuning, BoundKind};
pub use lemma_a::{
    lagrangian_identity_residual, sample_feasible_triples, verify_lemma_a_optimum, LemmaAReport,
};
pub use tight::{
    gen_sorted_euclid_tight_config, gen_sorted_general_tight_config, gen_unsorted_tight_config,
    TightConfig,
};
