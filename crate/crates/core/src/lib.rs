//! Decide SLOCC and LU equivalence of multipartite qudit states.
//!
//! Pure states are compared through the mode-n unfoldings of their coefficient
//! tensors; mixed states through their spectra and Gell-Mann coefficient
//! tensors. Whenever two states are found equivalent, the verdict carries a
//! list of per-party operators that has been checked independently.

pub mod cp;
pub mod equivalence;
pub mod error;
pub mod fixtures;
pub mod kron;
pub mod linalg;
pub mod random;
pub mod state;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{Matrix, Tensor, Vector};
