//! Exhaustive enumeration, classification and certification.

mod certificate;
mod claims;
mod enumerate;

pub use certificate::{Cap, Certificate, Counts, Finding, Outcome, Tally, SCHEMA_VERSION, TOOL_VERSION};
pub use claims::{
    classify_extremal, classify_extremal_with, family_union, sweep_lemmas, verify_conjecture, verify_theorem1,
    verify_theorem2, verify_theorem3, VerifyOptions, DESK_LIMIT,
};
pub use enumerate::{enumerate, sweep, with_jobs, Constraint, EnumerationQuery, Sweep, DEFAULT_BUDGET};
