//! Conjugacy decisions and conjugacy separability growth for finitely
//! generated virtually abelian groups `H ≤ Z^h ⋊ G`.

pub mod error;
pub mod group;
pub mod growth;
pub mod hull;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod examples;
pub mod modp;
pub mod pattern;
pub mod rep;
pub mod separability;
pub mod vab;

pub use error::{Error, Result};
