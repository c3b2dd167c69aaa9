//! Sumsets and restricted sumsets of finite integer sets: kernels, lower
//! bounds, structural checks, extremal families and exhaustive certification.

pub mod bounds;
pub mod error;
pub mod families;
pub mod sets;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use sets::{restricted_sumset, sumset, IntegerSet, NormalizedSet};
