//! Euclid numbers and polynomials, their height-1 companion matrices, and the
//! conditioning experiments that compare the matrix eigenvalue formulation with
//! the monomial and shifted polynomial bases.

pub mod analysis;
pub mod cli;
pub mod companion;
pub mod error;
pub mod exact_poly;
pub mod fields;
pub mod spectra;

pub use error::{Error, Result};
