//! Sparse storage and linear solvers for the saddle-point systems.

mod direct;
mod gmres;
mod sparse;

use std::time::Duration;

pub use direct::{LuFactorization, PIVOT_THRESHOLD, solve_direct};
pub use gmres::{GmresOptions, solve_gmres};
pub use sparse::{SparseMatrix, relative_residual};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    Iterative,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub method: SolveMethod,
    pub iterations: usize,
    /// `||A x - b|| / ||b||` recomputed from the returned iterate.
    pub relative_residual: f64,
    pub elapsed: Duration,
}
