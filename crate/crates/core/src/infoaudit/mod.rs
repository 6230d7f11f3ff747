//! Purified inputs and exact audits of the information crossing each cut.
//!
//! The default path simulates every input branch on the work registers only
//! and assembles reduced states across branches (see [`Ensemble`]); the
//! monolithic path simulates the full purified state and is kept as a
//! reference for small instances.

mod audit;
mod distribution;
mod ensemble;

pub use audit::{
    audit_compiled, audit_compiled_with, audit_line_leakage, audit_line_leakage_with,
    leakage_two_party, leakage_two_party_with, monolithic_line_audit, monolithic_two_party_leakage,
    AuditRow, AuditTrace, BlockIdentity, CompiledAudit, LeakageReport, LeakageTerm, BOUND_TOL,
    QIL_TOL,
};
pub use distribution::{
    canonical_purification, verify_conditional_independence, InputDistribution, Outcome,
    INDEPENDENCE_TOL, NORMALIZATION_TOL, PURIFIED_REGISTERS,
};
pub use ensemble::{Ensemble, EnsembleBranch};
