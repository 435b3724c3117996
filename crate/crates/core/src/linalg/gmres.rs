use std::time::Instant;

use super::sparse::{norm2, relative_residual};
use super::{SolveMethod, SolveReport, SparseMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    pub restart: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            restart: 50,
            tol: 1e-9,
            max_iter: 20_000,
        }
    }
}

/// Restarted GMRES, right-preconditioned with `diag(|a_ii|)` (unit where the
/// diagonal vanishes). `x0` is an optional initial guess.
pub fn solve_gmres(
    a: &SparseMatrix,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: GmresOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let start = Instant::now();
    let n = a.n_rows();
    if a.n_cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: a.n_cols(),
        });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    if opts.restart == 0 || !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(
            "GMRES needs restart >= 1 and tol > 0".into(),
        ));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d != 0.0 { 1.0 / d.abs() } else { 1.0 })
        .collect();

    let mut x = match x0 {
        Some(x0) if x0.len() == n => x0.to_vec(),
        Some(x0) => {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: x0.len(),
            });
        }
        None => vec![0.0; n],
    };
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        let report = SolveReport {
            method: SolveMethod::Iterative,
            iterations: 0,
            relative_residual: 0.0,
            elapsed: start.elapsed(),
        };
        return Ok((vec![0.0; n], report));
    }

    let m = opts.restart;
    let mut basis: Vec<Vec<f64>> = vec![vec![0.0; n]; m + 1];
    let mut hess = vec![vec![0.0; m]; m + 1];
    let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
    let mut g = vec![0.0; m + 1];
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut iterations = 0;
    let mut best = (f64::INFINITY, x.clone());

    loop {
        // true residual at the start of each cycle
        a.spmv_into(&x, &mut w)?;
        for i in 0..n {
            basis[0][i] = b[i] - w[i];
        }
        let beta = norm2(&basis[0]);
        let rel = beta / b_norm;
        if rel < best.0 {
            best = (rel, x.clone());
        }
        if rel <= opts.tol {
            break;
        }
        if iterations >= opts.max_iter {
            return Err(Error::NonConvergence {
                iterations,
                residual: best.0,
                best: best.1,
            });
        }
        basis[0].iter_mut().for_each(|v| *v /= beta);
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;

        let mut k_used = 0;
        for k in 0..m {
            if iterations >= opts.max_iter {
                break;
            }
            iterations += 1;
            for i in 0..n {
                z[i] = inv_diag[i] * basis[k][i];
            }
            a.spmv_into(&z, &mut w)?;
            // modified Gram-Schmidt
            for j in 0..=k {
                let h: f64 = w.iter().zip(&basis[j]).map(|(p, q)| p * q).sum();
                hess[j][k] = h;
                w.iter_mut().zip(&basis[j]).for_each(|(p, q)| *p -= h * q);
            }
            let h_next = norm2(&w);
            hess[k + 1][k] = h_next;
            for j in 0..k {
                let t = cs[j] * hess[j][k] + sn[j] * hess[j + 1][k];
                hess[j + 1][k] = -sn[j] * hess[j][k] + cs[j] * hess[j + 1][k];
                hess[j][k] = t;
            }
            let r = hess[k][k].hypot(hess[k + 1][k]);
            if r == 0.0 {
                break;
            }
            cs[k] = hess[k][k] / r;
            sn[k] = hess[k + 1][k] / r;
            hess[k][k] = r;
            hess[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            if h_next > 0.0 {
                basis[k + 1]
                    .iter_mut()
                    .zip(&w)
                    .for_each(|(p, q)| *p = q / h_next);
            }
            if g[k + 1].abs() / b_norm <= opts.tol || h_next == 0.0 {
                break;
            }
        }
        if k_used == 0 {
            return Err(Error::NonConvergence {
                iterations,
                residual: best.0,
                best: best.1,
            });
        }
        // back substitution on the triangular Hessenberg block
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let s: f64 = ((i + 1)..k_used).map(|j| hess[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / hess[i][i];
        }
        z.iter_mut().for_each(|v| *v = 0.0);
        for (j, yj) in y.iter().enumerate() {
            z.iter_mut().zip(&basis[j]).for_each(|(p, q)| *p += yj * q);
        }
        for i in 0..n {
            x[i] += inv_diag[i] * z[i];
        }
    }

    let relative_residual = relative_residual(a, &x, b)?;
    Ok((
        x,
        SolveReport {
            method: SolveMethod::Iterative,
            iterations,
            relative_residual,
            elapsed: start.elapsed(),
        },
    ))
}
