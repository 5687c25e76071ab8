//! End-to-end verification of identities: the built-in catalog, per-identity
//! reports and suite runs over several lattices.

pub mod catalog;
pub mod relations;
pub mod report;
pub mod run;

pub use catalog::{builtin_catalog, find_builtin, Body, Functional, IdentitySpec};
pub use relations::Relation;
pub use report::{
    ContextInfo, MultiplierEvidence, Rational, RelationEvidence, ResidualStats, SuiteEntry,
    SuiteReport, Verdict, VerificationReport, ZeroEvidence,
};
pub use run::{
    default_contexts, default_tolerance, run_suite, run_suite_with_catalog, verify, VerifyParams,
};
