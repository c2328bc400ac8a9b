//! Exact block idempotents, integral lattices and Tate cohomology for cuspidal
//! representations of `GL_2(F_ℓ)` and for `p`-nilpotent groups.

pub mod arith;
pub mod error;
pub mod group;
pub mod character;
pub mod block;
pub mod lattice;
pub mod cohomology;
pub mod pnilpotent;
pub mod report;

pub use error::{Error, Result};
