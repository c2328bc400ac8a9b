//! Exact arithmetic: cyclotomic fields, finite local rings and linear algebra over them.

pub mod cyclotomic;
pub mod linalg;
pub mod local;
pub mod numtheory;

pub use cyclotomic::{cyclotomic_field, CyclotomicNumber, CyclotomicRecord, RootAccumulator, RootSum};
pub use linalg::{HowellForm, RMatrix};
pub use local::{build_local_ring, LocalRing, RElem};
