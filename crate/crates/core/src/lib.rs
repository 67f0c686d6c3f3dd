//! Exact combinatorics of oriented matroids and their Salvetti complexes.
//!
//! The crate covers covector systems and their lattices of flats, tope
//! posets and shellings, the Salvetti poset with its localization maps,
//! discrete Morse matchings, integral homology of order complexes,
//! certificates that localization maps at modular flats are poset
//! quasi-fibrations, and single-element extensions of rank-3 oriented
//! matroids towards supersolvable ones.

pub mod error;
pub mod extensions;
pub mod homotopy;
pub mod io;
pub mod lattice;
pub mod morse;
pub mod oriented_matroid;
pub mod par;
pub mod poset;
pub mod salvetti;
pub mod shelling;
pub mod sign_vectors;
pub mod topes;

pub use error::{Error, Result};
