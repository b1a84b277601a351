//! Constructions, exact counting formulas, decision procedures and
//! exhaustive search for non-trivial r-wise and cross t-intersecting
//! families of k-subsets of `[n]`.

pub mod error;
pub mod constructions;
pub mod formulas;
pub mod search;
pub mod setcore;
pub mod verify;

pub use error::{Error, Result};
pub use setcore::{enumerate_k_subsets, family_intersection, restrict, Family, SetMask};
