//! Stabilized finite elements for the two-dimensional transient Stokes
//! problem.
//!
//! Equal-order P1/P1 velocity-pressure pairs are stabilized with the
//! algebraic subgrid-scale (ASGS) method, advanced in time by the theta
//! scheme (backward Euler or Crank-Nicolson) with dynamic subscales, and
//! verified against a manufactured solution.

pub mod asgs;
pub mod cli;
pub mod error;
pub mod fem;
pub mod linalg;
pub mod manufactured;
pub mod mesh;

pub use error::{Error, Result};
