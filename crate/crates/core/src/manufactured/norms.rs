//! Discrete space-time error norms.
//!
//! With `e^{n,theta} = alpha e^{n+1} + (1 - alpha) e^n` constant on each
//! interval, the time integrals reduce to `dt * ||e^{n,theta}||^2`. The
//! V-tilde norm squared is `max_n ||e^n||^2 + ||e||^2_{L2(H1)}`.

use super::exact::ExactSolution;
use crate::asgs::FieldState;
use crate::error::Result;
use crate::fem::QuadratureRule;
use crate::mesh::{ElementGeometry, Mesh};

/// Quadrature degree for error integrals.
pub const NORM_DEGREE: usize = 8;

/// Spatial error norms of one snapshot or interval.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpatialErrors {
    pub velocity_l2_sq: f64,
    /// Full H1: L2 plus both first-derivative terms.
    pub velocity_h1_sq: f64,
    pub pressure_l2_sq: f64,
    /// `||div u_h||^2`
    pub divergence_sq: f64,
}

#[derive(Debug, Clone)]
pub struct ErrorAccumulator {
    geometries: Vec<ElementGeometry>,
    triangles: Vec<[usize; 3]>,
    rule: QuadratureRule,
    pub velocity_l2l2_sq: f64,
    pub velocity_l2h1_sq: f64,
    pub velocity_max_l2_sq: f64,
    pub pressure_l2l2_sq: f64,
    pub divergence_l2l2_sq: f64,
    pub estimator_sq: f64,
    pub steps: usize,
}

impl ErrorAccumulator {
    pub fn new(mesh: &Mesh) -> Result<Self> {
        Ok(Self {
            geometries: mesh.geometries()?,
            triangles: mesh.triangles().to_vec(),
            rule: QuadratureRule::new(NORM_DEGREE)?,
            velocity_l2l2_sq: 0.0,
            velocity_l2h1_sq: 0.0,
            velocity_max_l2_sq: 0.0,
            pressure_l2l2_sq: 0.0,
            divergence_l2l2_sq: 0.0,
            estimator_sq: 0.0,
            steps: 0,
        })
    }

    /// Velocity errors of a snapshot at `state.t`; feeds the max-in-time term.
    pub fn record_snapshot(
        &mut self,
        state: &FieldState,
        exact: &dyn ExactSolution,
    ) -> SpatialErrors {
        let e = self.spatial_errors(state, state, 1.0, exact, state.t, state.t, state.p_time);
        self.velocity_max_l2_sq = self.velocity_max_l2_sq.max(e.velocity_l2_sq);
        e
    }

    /// Adds the interval `[t^n, t^{n+1}]`. Returns the interval errors and the
    /// snapshot errors at `t^{n+1}`. The pressure of `next` is compared with
    /// the exact pressure at `next.p_time`.
    pub fn accumulate(
        &mut self,
        prev: &FieldState,
        next: &FieldState,
        exact: &dyn ExactSolution,
        theta: f64,
    ) -> (SpatialErrors, SpatialErrors) {
        let alpha = 0.5 * (1.0 + theta);
        let dt = next.t - prev.t;
        let interval = self.spatial_errors(prev, next, alpha, exact, prev.t, next.t, next.p_time);
        self.velocity_l2l2_sq += dt * interval.velocity_l2_sq;
        self.velocity_l2h1_sq += dt * interval.velocity_h1_sq;
        self.pressure_l2l2_sq += dt * interval.pressure_l2_sq;
        self.divergence_l2l2_sq += dt * interval.divergence_sq;
        self.steps += 1;
        let snapshot = if alpha == 1.0 {
            self.velocity_max_l2_sq = self.velocity_max_l2_sq.max(interval.velocity_l2_sq);
            interval
        } else {
            self.record_snapshot(next, exact)
        };
        (interval, snapshot)
    }

    /// Adds `dt * eta^2`.
    pub fn add_estimator(&mut self, eta_sq: f64, dt: f64) {
        self.estimator_sq += dt * eta_sq;
    }

    pub fn velocity_vtilde_sq(&self) -> f64 {
        self.velocity_max_l2_sq + self.velocity_l2h1_sq
    }

    pub fn err_u_vtilde(&self) -> f64 {
        self.velocity_vtilde_sq().sqrt()
    }

    pub fn err_p_l2l2(&self) -> f64 {
        self.pressure_l2l2_sq.sqrt()
    }

    /// `sqrt(||e_u||^2_Vtilde + ||e_p||^2_L2(L2))`
    pub fn total_error(&self) -> f64 {
        (self.velocity_vtilde_sq() + self.pressure_l2l2_sq).sqrt()
    }

    pub fn estimator(&self) -> f64 {
        self.estimator_sq.sqrt()
    }

    pub fn divergence_l2l2(&self) -> f64 {
        self.divergence_l2l2_sq.sqrt()
    }

    /// Errors of `alpha next + (1 - alpha) prev` against the same combination
    /// of exact velocities at `t0`, `t1`; pressure of `next` against the exact
    /// pressure at `tp`.
    #[allow(clippy::too_many_arguments)]
    fn spatial_errors(
        &self,
        prev: &FieldState,
        next: &FieldState,
        alpha: f64,
        exact: &dyn ExactSolution,
        t0: f64,
        t1: f64,
        tp: f64,
    ) -> SpatialErrors {
        let beta = 1.0 - alpha;
        let mut out = SpatialErrors::default();
        for (g, tri) in self.geometries.iter().zip(&self.triangles) {
            let uh = [0, 1]
                .map(|c| tri.map(|v| alpha * next.velocity(c)[v] + beta * prev.velocity(c)[v]));
            let ph = tri.map(|v| next.p[v]);
            let grads = &g.shape_gradients;
            let grad_uh =
                [0, 1].map(|c| [0, 1].map(|d| (0..3).map(|a| grads[a][d] * uh[c][a]).sum::<f64>()));
            let (mut l2, mut h1, mut pl2) = (0.0, 0.0, 0.0);
            for (lam, &w) in self.rule.points.iter().zip(&self.rule.weights) {
                let [x, y] = g.point(*lam);
                let mut u = exact.velocity(x, y, t1);
                let mut gu = exact.velocity_gradient(x, y, t1);
                if beta != 0.0 {
                    let u0 = exact.velocity(x, y, t0);
                    let gu0 = exact.velocity_gradient(x, y, t0);
                    for c in 0..2 {
                        u[c] = alpha * u[c] + beta * u0[c];
                        for d in 0..2 {
                            gu[c][d] = alpha * gu[c][d] + beta * gu0[c][d];
                        }
                    }
                }
                let mut e2 = 0.0;
                let mut ge2 = 0.0;
                for c in 0..2 {
                    let val = lam[0] * uh[c][0] + lam[1] * uh[c][1] + lam[2] * uh[c][2];
                    e2 += (val - u[c]).powi(2);
                    for d in 0..2 {
                        ge2 += (grad_uh[c][d] - gu[c][d]).powi(2);
                    }
                }
                let p = lam[0] * ph[0] + lam[1] * ph[1] + lam[2] * ph[2];
                let ep = p - exact.pressure(x, y, tp);
                l2 += w * e2;
                h1 += w * (e2 + ge2);
                pl2 += w * ep * ep;
            }
            out.velocity_l2_sq += g.area * l2;
            out.velocity_h1_sq += g.area * h1;
            out.pressure_l2_sq += g.area * pl2;
            out.divergence_sq += g.area * (grad_uh[0][0] + grad_uh[1][1]).powi(2);
        }
        out
    }
}
