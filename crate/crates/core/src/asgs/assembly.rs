//! Assembly of the fully discrete ASGS system.
//!
//! Unknowns are `u^{n+1}` and the interval pressure `p = p^{n,theta}`. With
//! `alpha = (1 + theta)/2` the velocity entering the spatial operator is
//! `u* = alpha u^{n+1} + (1 - alpha) u^n`. Per element `k`, with
//! `m = tau1/(dt_eff + tau1)`, `w = 1 - m` and `d1 = u'^n / dt_eff`:
//!
//! ```text
//! momentum:   ((u^{n+1}-u^n)/dt, v) + mu (grad u*, grad v) - (p, div v)
//!             + tau2 (div u*, div v)_k - m ((u^{n+1}-u^n)/dt + grad p, v)_k
//!             - w (d1, v)_k  =  (f*, v) - m (f*, v)_k
//! continuity: (div u*, q) + tau1' ((u^{n+1}-u^n)/dt + grad p, grad q)_k
//!             - tau1' (d1, grad q)_k  =  tau1' (f*, grad q)_k
//! ```
//!
//! Second derivatives of P1 fields vanish elementwise and are dropped.
//! Boundary velocity rows are replaced by identity rows, and a Lagrange
//! multiplier row/column enforces a zero-mean pressure.

use super::local::{LocalMatrices, local_galerkin_matrices};
use super::params::{ElementTaus, StabilizationParams, TimeScheme};
use super::state::{FieldState, Forcing, SubscaleState};
use crate::error::{Error, Result};
use crate::fem::{DofMap, QuadratureRule};
use crate::linalg::SparseMatrix;
use crate::mesh::{ElementGeometry, Mesh};

/// Quadrature degree used for assembly and subscale storage.
pub const ASSEMBLY_DEGREE: usize = 5;

/// Sparse matrix and right-hand side in [`DofMap`] layout.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
}

/// Precomputed per-element data for one mesh, time scheme and parameter set.
#[derive(Debug, Clone)]
pub struct Discretization<'a> {
    mesh: &'a Mesh,
    dofmap: &'a DofMap,
    scheme: TimeScheme,
    params: StabilizationParams,
    geometries: Vec<ElementGeometry>,
    locals: Vec<LocalMatrices>,
    taus: Vec<ElementTaus>,
    rule: QuadratureRule,
    qp_coords: Vec<[f64; 2]>,
}

impl<'a> Discretization<'a> {
    pub fn new(
        mesh: &'a Mesh,
        dofmap: &'a DofMap,
        scheme: TimeScheme,
        params: StabilizationParams,
    ) -> Result<Self> {
        params.validate()?;
        if dofmap.n_u != mesh.n_vertices() || dofmap.n_p != mesh.n_vertices() {
            return Err(Error::DimensionMismatch {
                expected: mesh.n_vertices(),
                actual: dofmap.n_u,
            });
        }
        let geometries = mesh.geometries()?;
        let locals = geometries.iter().map(local_galerkin_matrices).collect();
        let taus = geometries
            .iter()
            .map(|g| params.element_taus(g, scheme.dt_eff()))
            .collect::<Result<Vec<_>>>()?;
        let rule = QuadratureRule::new(ASSEMBLY_DEGREE)?;
        let qp_coords = geometries
            .iter()
            .flat_map(|g| rule.points.iter().map(|&b| g.point(b)))
            .collect();
        Ok(Self {
            mesh,
            dofmap,
            scheme,
            params,
            geometries,
            locals,
            taus,
            rule,
            qp_coords,
        })
    }

    pub fn mesh(&self) -> &'a Mesh {
        self.mesh
    }

    pub fn dofmap(&self) -> &'a DofMap {
        self.dofmap
    }

    pub fn scheme(&self) -> &TimeScheme {
        &self.scheme
    }

    pub fn params(&self) -> &StabilizationParams {
        &self.params
    }

    pub fn geometries(&self) -> &[ElementGeometry] {
        &self.geometries
    }

    pub fn taus(&self) -> &[ElementTaus] {
        &self.taus
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn n_qp(&self) -> usize {
        self.rule.len()
    }

    pub fn qp_coords(&self) -> &[[f64; 2]] {
        &self.qp_coords
    }

    pub fn zero_subscales(&self) -> SubscaleState {
        SubscaleState::zeros(self.geometries.len(), self.n_qp())
    }

    /// `f^{n,theta}` at every assembly quadrature point for the step that
    /// starts at `t_n`.
    pub fn forcing_at_qps(&self, forcing: &dyn Forcing, t_n: f64) -> Vec<[f64; 2]> {
        let alpha = self.scheme.alpha();
        let t_np1 = t_n + self.scheme.dt();
        self.qp_coords
            .iter()
            .map(|&[x, y]| {
                let f1 = forcing.eval(x, y, t_np1);
                if alpha == 1.0 {
                    f1
                } else {
                    let f0 = forcing.eval(x, y, t_n);
                    [
                        alpha * f1[0] + (1.0 - alpha) * f0[0],
                        alpha * f1[1] + (1.0 - alpha) * f0[1],
                    ]
                }
            })
            .collect()
    }

    /// Left-hand-side operator in triplet form, without boundary conditions or
    /// the mean-pressure multiplier. Triplets are emitted in element order.
    pub fn operator_triplets(&self) -> Vec<(usize, usize, f64)> {
        let dm = self.dofmap;
        let dt = self.scheme.dt();
        let alpha = self.scheme.alpha();
        let mu = self.params.mu;
        let mut t = Vec::with_capacity(self.geometries.len() * 81);
        for (k, tri) in self.mesh.triangles().iter().enumerate() {
            let g = &self.geometries[k];
            let l = &self.locals[k];
            let tau = &self.taus[k];
            let grads = &g.shape_gradients;
            let third = g.area / 3.0;
            for i in 0..3 {
                for j in 0..3 {
                    let (vi, vj) = (tri[i], tri[j]);
                    let diag = tau.w / dt * l.mass[i][j] + alpha * mu * l.stiffness[i][j];
                    for c in 0..2 {
                        let row = dm.velocity(c, vi);
                        for d in 0..2 {
                            let mut val = alpha * tau.tau2 * g.area * grads[i][c] * grads[j][d];
                            if c == d {
                                val += diag;
                            }
                            t.push((row, dm.velocity(d, vj), val));
                        }
                        // -(p, div v) - m (grad p, v)
                        let vp = -third * grads[i][c] - tau.m * third * grads[j][c];
                        t.push((row, dm.pressure(vj), vp));
                    }
                    let prow = dm.pressure(vi);
                    for d in 0..2 {
                        // (div u*, q) + tau1'/dt (u, grad q)
                        let val =
                            alpha * third * grads[j][d] + tau.tau1p / dt * third * grads[i][d];
                        t.push((prow, dm.velocity(d, vj), val));
                    }
                    t.push((prow, dm.pressure(vj), tau.tau1p * l.stiffness[i][j]));
                }
            }
        }
        t
    }

    /// Raw operator, used by the coercivity diagnostic.
    pub fn operator_matrix(&self) -> Result<SparseMatrix> {
        let n = self.dofmap.dimension();
        SparseMatrix::from_triplets(n, n, &self.operator_triplets())
    }

    /// System matrix with Dirichlet rows replaced and the multiplier added.
    pub fn system_matrix(&self) -> Result<SparseMatrix> {
        let dm = self.dofmap;
        let n = dm.dimension();
        let mut t: Vec<_> = self
            .operator_triplets()
            .into_iter()
            .filter(|&(r, _, _)| !dm.is_dirichlet(r))
            .collect();
        t.extend(dm.dirichlet_dofs.iter().map(|&d| (d, d, 1.0)));
        let lm = dm.multiplier();
        for (v, &mv) in dm.mean_vector.iter().enumerate() {
            t.push((dm.pressure(v), lm, mv));
            t.push((lm, dm.pressure(v), mv));
        }
        SparseMatrix::from_triplets(n, n, &t)
    }

    /// Right-hand side for the step starting from `state_n`, with the forcing
    /// already sampled at the quadrature points.
    pub fn rhs_with_forcing(
        &self,
        state_n: &FieldState,
        subscale_n: &SubscaleState,
        f_qp: &[[f64; 2]],
    ) -> Result<Vec<f64>> {
        self.check_inputs(state_n, subscale_n)?;
        if f_qp.len() != self.qp_coords.len() {
            return Err(Error::DimensionMismatch {
                expected: self.qp_coords.len(),
                actual: f_qp.len(),
            });
        }
        let dm = self.dofmap;
        let dt = self.scheme.dt();
        let dt_eff = self.scheme.dt_eff();
        let alpha = self.scheme.alpha();
        let mu = self.params.mu;
        let nq = self.n_qp();
        // Galerkin has no subscale history
        let d_factor = if self.params.stabilized {
            1.0 / dt_eff
        } else {
            0.0
        };
        let mut b = vec![0.0; dm.dimension()];
        for (k, tri) in self.mesh.triangles().iter().enumerate() {
            let g = &self.geometries[k];
            let l = &self.locals[k];
            let tau = &self.taus[k];
            let grads = &g.shape_gradients;
            let third = g.area / 3.0;
            let un = [0, 1].map(|c| tri.map(|v| state_n.velocity(c)[v]));
            let div_n: f64 = (0..2)
                .map(|c| (0..3).map(|a| grads[a][c] * un[c][a]).sum::<f64>())
                .sum();

            // quadrature moments: int (f*) lambda_i, int f*, int d1 lambda_i, int d1
            let mut f_lam = [[0.0; 3]; 2];
            let mut f_int = [0.0; 2];
            let mut d_lam = [[0.0; 3]; 2];
            let mut d_int = [0.0; 2];
            for q in 0..nq {
                let wq = self.rule.weights[q] * g.area;
                let lam = self.rule.points[q];
                let f = f_qp[k * nq + q];
                let up = subscale_n.get(k, q);
                for c in 0..2 {
                    let d1 = up[c] * d_factor;
                    f_int[c] += wq * f[c];
                    d_int[c] += wq * d1;
                    for i in 0..3 {
                        f_lam[c][i] += wq * f[c] * lam[i];
                        d_lam[c][i] += wq * d1 * lam[i];
                    }
                }
            }

            for i in 0..3 {
                for c in 0..2 {
                    let mut val = tau.w * f_lam[c][i] + tau.w * d_lam[c][i]
                        - (1.0 - alpha) * tau.tau2 * g.area * grads[i][c] * div_n;
                    for a in 0..3 {
                        val += (tau.w / dt * l.mass[i][a] - (1.0 - alpha) * mu * l.stiffness[i][a])
                            * un[c][a];
                    }
                    b[dm.velocity(c, tri[i])] += val;
                }
                let mut val = -(1.0 - alpha) * div_n * third;
                for c in 0..2 {
                    let u_int = third * (un[c][0] + un[c][1] + un[c][2]);
                    val +=
                        grads[i][c] * (tau.tau1p / dt * u_int + tau.tau1p * (d_int[c] + f_int[c]));
                }
                b[dm.pressure(tri[i])] += val;
            }
        }
        for &d in &dm.dirichlet_dofs {
            b[d] = 0.0;
        }
        Ok(b)
    }

    pub fn rhs(
        &self,
        state_n: &FieldState,
        subscale_n: &SubscaleState,
        forcing: &dyn Forcing,
    ) -> Result<Vec<f64>> {
        let f_qp = self.forcing_at_qps(forcing, state_n.t);
        self.rhs_with_forcing(state_n, subscale_n, &f_qp)
    }

    pub fn assemble(
        &self,
        state_n: &FieldState,
        subscale_n: &SubscaleState,
        forcing: &dyn Forcing,
    ) -> Result<AssembledSystem> {
        Ok(AssembledSystem {
            matrix: self.system_matrix()?,
            rhs: self.rhs(state_n, subscale_n, forcing)?,
        })
    }

    fn check_inputs(&self, state: &FieldState, subscale: &SubscaleState) -> Result<()> {
        let n = self.mesh.n_vertices();
        for len in [state.u1.len(), state.u2.len(), state.p.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: len,
                });
            }
        }
        if subscale.n_qp() != self.n_qp() || subscale.n_elements() != self.geometries.len() {
            return Err(Error::DimensionMismatch {
                expected: self.geometries.len() * self.n_qp(),
                actual: subscale.values().len(),
            });
        }
        Ok(())
    }
}

/// Assembles the linear system for one step from `state_n` to `t^n + dt`.
pub fn assemble_system(
    mesh: &Mesh,
    dofmap: &DofMap,
    state_n: &FieldState,
    subscale_n: &SubscaleState,
    scheme: &TimeScheme,
    params: &StabilizationParams,
    forcing: &dyn Forcing,
) -> Result<AssembledSystem> {
    Discretization::new(mesh, dofmap, *scheme, *params)?.assemble(state_n, subscale_n, forcing)
}
