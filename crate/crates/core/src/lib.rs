//! Exact computations behind the classification of non-symplectic automorphisms
//! of prime order on K3 surfaces: even lattices, cyclotomic arithmetic, the
//! holomorphic Lefschetz system, fixed-locus profiles and elliptic fibrations.

// index loops read closer to the matrix formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod appendix;
pub mod classify;
pub mod cyclotomic;
pub mod error;
pub mod fibers;
pub mod lattice;
pub mod lefschetz;
pub mod matrix;
pub mod poly;
pub mod reference;
pub mod verify;

pub use error::{Error, Result};
