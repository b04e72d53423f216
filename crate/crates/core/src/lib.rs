//! Hecke operators on lattice polytopes.

pub mod ehrhart;
pub mod error;
pub mod exactmath;
pub mod grassmann;
pub mod hecke;
pub mod lattice;
pub mod linalg;
pub mod polytope;
pub mod toddop;

pub use error::{Error, Result};
