//! Companion-matrix dynamic mode decomposition with accurate Vandermonde
//! inversion through the DFT and complete-pivoted Cauchy LDU factorization.

pub mod dmd;
pub mod ensemble;
pub mod error;
pub mod gla;
pub mod krylov;
pub mod linalg;
pub mod reconstruction;
pub mod vandermonde;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Permutation, C64};
