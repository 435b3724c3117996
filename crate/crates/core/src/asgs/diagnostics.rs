//! Dense eigenvalue diagnostics: coercivity of the backward-Euler operator and
//! the discrete inf-sup constant. Intended for small meshes.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::assembly::Discretization;
use super::local::local_galerkin_matrices;
use super::params::{StabilizationParams, TimeScheme};
use crate::error::{Error, Result};
use crate::fem::DofMap;
use crate::linalg::SparseMatrix;
use crate::mesh::Mesh;

/// Orthonormal basis (columns of `n x (n - 1)`) of the complement of `v`.
fn complement_basis(v: &[f64]) -> DMatrix<f64> {
    let n = v.len();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    // Householder reflector taking v/|v| to -sign(v0) e0
    let mut h = DVector::from_iterator(n, v.iter().map(|x| x / norm));
    let s = if h[0] >= 0.0 { 1.0 } else { -1.0 };
    h[0] += s;
    let hn2 = h.norm_squared();
    let reflector = DMatrix::<f64>::identity(n, n) - (&h * h.transpose()) * (2.0 / hn2);
    reflector.columns(1, n - 1).into_owned()
}

/// Orthonormal basis of the admissible space: interior velocity dofs and
/// zero-mean pressures (multiplier direction excluded).
pub fn constrained_basis(dofmap: &DofMap) -> DMatrix<f64> {
    let free_velocity: Vec<usize> = (0..2 * dofmap.n_u)
        .filter(|&d| !dofmap.is_dirichlet(d))
        .collect();
    let pressure = complement_basis(&dofmap.mean_vector);
    let n = dofmap.dimension();
    let cols = free_velocity.len() + pressure.ncols();
    let mut q = DMatrix::<f64>::zeros(n, cols);
    for (c, &d) in free_velocity.iter().enumerate() {
        q[(d, c)] = 1.0;
    }
    let off = 2 * dofmap.n_u;
    for c in 0..pressure.ncols() {
        for r in 0..dofmap.n_p {
            q[(off + r, free_velocity.len() + c)] = pressure[(r, c)];
        }
    }
    q
}

/// Symmetric part of `a` restricted to the span of `basis`.
pub fn projected_symmetric_part(a: &SparseMatrix, basis: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.n_rows();
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for (i, j, v) in a.triplets() {
        dense[(i, j)] += 0.5 * v;
        dense[(j, i)] += 0.5 * v;
    }
    basis.transpose() * dense * basis
}

pub fn min_eigenvalue(sym: &DMatrix<f64>) -> Result<f64> {
    if sym.nrows() == 0 {
        return Err(Error::Eigen("empty matrix".into()));
    }
    let eig = SymmetricEigen::try_new(sym.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
    Ok(eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// The backward-Euler operator (without subscale history) projected onto
/// the admissible space and symmetrized.
pub fn coercivity_operator(
    mesh: &Mesh,
    dofmap: &DofMap,
    params: &StabilizationParams,
    dt: f64,
) -> Result<DMatrix<f64>> {
    let scheme = TimeScheme::backward_euler(dt, dt)?;
    let disc = Discretization::new(mesh, dofmap, scheme, *params)?;
    let a = disc.operator_matrix()?;
    Ok(projected_symmetric_part(&a, &constrained_basis(dofmap)))
}

/// Smallest eigenvalue of the symmetric part of the backward-Euler operator
/// on the Dirichlet- and mean-constrained space.
pub fn coercivity_check(
    mesh: &Mesh,
    dofmap: &DofMap,
    params: &StabilizationParams,
    dt: f64,
) -> Result<f64> {
    min_eigenvalue(&coercivity_operator(mesh, dofmap, params, dt)?)
}

/// Discrete inf-sup constant `sqrt(lambda_min)` of the pressure Schur
/// complement `B A^{-1} B^T` against the pressure mass matrix on zero-mean
/// pressures, with `A` the velocity H1 operator on interior dofs. With
/// `stabilized`, `A` gains the grad-div block and the Schur complement the
/// pressure-Laplacian block (using `dt_eff` for `tau1'`).
pub fn infsup_constant(
    mesh: &Mesh,
    dofmap: &DofMap,
    stabilized: bool,
    params: &StabilizationParams,
    dt_eff: f64,
) -> Result<f64> {
    params.validate()?;
    let n = dofmap.n_u;
    let free: Vec<usize> = (0..2 * n).filter(|&d| !dofmap.is_dirichlet(d)).collect();
    let mut local_index = vec![usize::MAX; 2 * n];
    for (i, &d) in free.iter().enumerate() {
        local_index[d] = i;
    }
    let nv = free.len();
    let np = dofmap.n_p;
    let mut a = DMatrix::<f64>::zeros(nv, nv);
    let mut b = DMatrix::<f64>::zeros(np, nv);
    let mut mp = DMatrix::<f64>::zeros(np, np);
    let mut cp = DMatrix::<f64>::zeros(np, np);
    let stab = StabilizationParams {
        stabilized,
        ..*params
    };
    for (k, tri) in mesh.triangles().iter().enumerate() {
        let g = mesh.element_geometry(k)?;
        let l = local_galerkin_matrices(&g);
        let tau = stab.element_taus(&g, dt_eff)?;
        for i in 0..3 {
            for j in 0..3 {
                mp[(tri[i], tri[j])] += l.mass[i][j];
                cp[(tri[i], tri[j])] += tau.tau1p * l.stiffness[i][j];
                for c in 0..2 {
                    let row = local_index[dofmap.velocity(c, tri[i])];
                    if row == usize::MAX {
                        continue;
                    }
                    // b(v, q) = int q div v
                    b[(tri[j], row)] += l.div[c][j][i];
                    for d in 0..2 {
                        let col = local_index[dofmap.velocity(d, tri[j])];
                        if col == usize::MAX {
                            continue;
                        }
                        let mut val =
                            tau.tau2 * g.area * g.shape_gradients[i][c] * g.shape_gradients[j][d];
                        if c == d {
                            val += l.mass[i][j] + l.stiffness[i][j];
                        }
                        a[(row, col)] += val;
                    }
                }
            }
        }
    }
    let a_chol = a
        .cholesky()
        .ok_or_else(|| Error::Eigen("velocity operator is not positive definite".into()))?;
    let schur = &b * a_chol.solve(&b.transpose()) + cp;
    let m_chol = mp
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Eigen("pressure mass matrix is not positive definite".into()))?;
    let l_inv = m_chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::Eigen("singular Cholesky factor".into()))?;
    let mut k = &l_inv * schur * l_inv.transpose();
    k = (&k + k.transpose()) * 0.5;
    // constants map to w = L^T 1, an exact null vector; shift it out of the way
    let w = m_chol.l().transpose() * DVector::from_element(np, 1.0);
    let w = &w / w.norm();
    let shift = 1.0 + k.diagonal().amax() * np as f64;
    k += (&w * w.transpose()) * shift;
    let lambda = min_eigenvalue(&k)?;
    Ok(lambda.max(0.0).sqrt())
}
