use std::time::Instant;

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::sparse::linalg::colamd;
use faer::sparse::linalg::lu::{
    LuRef, LuSymbolicParams, NumericLu, SymbolicLu, factorize_symbolic_lu,
};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{Conj, MatMut, Par};

use super::sparse::relative_residual;
use super::{SolveMethod, SolveReport, SparseMatrix};
use crate::error::{Error, Result};

/// Residual above which a direct solve is treated as having hit a singular
/// pivot. Also the accuracy promised on success.
pub const PIVOT_THRESHOLD: f64 = 1e-10;

/// Iterative refinement steps attempted when the first solve misses
/// [`PIVOT_THRESHOLD`].
const MAX_REFINEMENTS: usize = 4;

/// Rows or columns with more than `DENSE_FACTOR * sqrt(n)` entries are ordered
/// last by COLAMD (the mean-pressure multiplier couples every pressure dof).
const DENSE_FACTOR: f64 = 10.0;

/// Sparse LU factorization with partial pivoting, reusable across
/// right-hand sides.
pub struct LuFactorization {
    matrix: SparseMatrix,
    symbolic: SymbolicLu<usize>,
    numeric: NumericLu<usize, f64>,
}

impl std::fmt::Debug for LuFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LuFactorization")
            .field("n", &self.matrix.n_rows())
            .field("nnz", &self.matrix.n_nonzeros())
            .finish()
    }
}

fn singular<E: std::fmt::Debug>(e: E) -> Error {
    Error::SingularMatrix(format!("factorization failed: {e:?}"))
}

impl LuFactorization {
    pub fn new(matrix: &SparseMatrix) -> Result<Self> {
        if matrix.n_rows() != matrix.n_cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.n_rows(),
                actual: matrix.n_cols(),
            });
        }
        if matrix.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix has non-finite entries".into(),
            ));
        }
        let n = matrix.n_rows();
        // CSR of the transpose is CSC of the matrix
        let csc = SparseMatrix::from_triplets(
            n,
            n,
            &matrix
                .triplets()
                .map(|(i, j, v)| (j, i, v))
                .collect::<Vec<_>>(),
        )?;
        let pattern =
            SymbolicSparseColMatRef::new_checked(n, n, csc.row_offsets(), None, csc.col_indices());
        let dense = if n > 0 {
            DENSE_FACTOR / (n as f64).sqrt()
        } else {
            0.5
        };
        let params = LuSymbolicParams {
            colamd_params: colamd::Control {
                dense_row: dense,
                dense_col: dense,
                ..Default::default()
            },
            ..Default::default()
        };
        let symbolic = factorize_symbolic_lu(pattern, params).map_err(singular)?;
        let mut numeric = NumericLu::new();
        // single-threaded factorization keeps results bit-reproducible
        let par = Par::Seq;
        let mut buf = MemBuffer::try_new(
            symbolic.factorize_numeric_lu_scratch::<f64>(par, Default::default()),
        )
        .map_err(singular)?;
        symbolic
            .factorize_numeric_lu(
                &mut numeric,
                SparseColMatRef::new(pattern, csc.values()),
                par,
                MemStack::new(&mut buf),
                Default::default(),
            )
            .map_err(singular)?;
        Ok(Self {
            matrix: matrix.clone(),
            symbolic,
            numeric,
        })
    }

    fn solve_raw(&self, x: &mut [f64]) {
        let n = x.len();
        let par = Par::Seq;
        let mut buf = MemBuffer::new(self.symbolic.solve_in_place_scratch::<f64>(1, par));
        LuRef::new_unchecked(&self.symbolic, &self.numeric).solve_in_place_with_conj(
            Conj::No,
            MatMut::from_column_major_slice_mut(x, n, 1),
            par,
            MemStack::new(&mut buf),
        );
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    /// Solves `A x = b`, refining while the residual exceeds
    /// [`PIVOT_THRESHOLD`] and keeps decreasing.
    pub fn solve(&self, b: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
        let start = Instant::now();
        let n = self.matrix.n_rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: b.len(),
            });
        }
        let mut x = b.to_vec();
        self.solve_raw(&mut x);
        let mut residual = checked_residual(&self.matrix, &x, b)?;
        let mut iterations = 1;
        while residual > PIVOT_THRESHOLD && iterations <= MAX_REFINEMENTS {
            let ax = self.matrix.spmv(&x)?;
            let mut correction: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
            self.solve_raw(&mut correction);
            let refined: Vec<f64> = x.iter().zip(&correction).map(|(xi, ci)| xi + ci).collect();
            let refined_residual = checked_residual(&self.matrix, &refined, b)?;
            iterations += 1;
            if !(refined_residual < residual) {
                break;
            }
            x = refined;
            residual = refined_residual;
        }
        if residual > PIVOT_THRESHOLD {
            return Err(Error::SingularMatrix(format!(
                "relative residual {residual:e} after refinement exceeds {PIVOT_THRESHOLD:e}"
            )));
        }
        Ok((
            x,
            SolveReport {
                method: SolveMethod::Direct,
                iterations,
                relative_residual: residual,
                elapsed: start.elapsed(),
            },
        ))
    }
}

fn checked_residual(a: &SparseMatrix, x: &[f64], b: &[f64]) -> Result<f64> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix(
            "zero pivot produced a non-finite solution".into(),
        ));
    }
    relative_residual(a, x, b)
}

/// One-shot factor-and-solve.
pub fn solve_direct(a: &SparseMatrix, b: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
    let start = Instant::now();
    let (x, mut report) = LuFactorization::new(a)?.solve(b)?;
    report.elapsed = start.elapsed();
    Ok((x, report))
}
