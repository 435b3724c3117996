//! Dynamic subscale history: `u'^{n+1} = tau1' (R1 + u'^n / dt_eff)` at every
//! assembly quadrature point.

use super::assembly::Discretization;
use super::params::{StabilizationParams, TimeScheme};
use super::state::{FieldState, Forcing, SubscaleState};
use crate::error::{Error, Result};
use crate::fem::DofMap;
use crate::mesh::Mesh;

/// One step of the subscale recursion at a single point.
#[inline]
pub fn advance_subscale(
    previous: [f64; 2],
    residual: [f64; 2],
    tau1p: f64,
    dt_eff: f64,
) -> [f64; 2] {
    [
        tau1p * (residual[0] + previous[0] / dt_eff),
        tau1p * (residual[1] + previous[1] / dt_eff),
    ]
}

impl Discretization<'_> {
    /// Momentum residual `f* - (u^{n+1} - u^n)/dt - grad p` at every assembly
    /// quadrature point (element-major).
    pub fn momentum_residuals(
        &self,
        next: &FieldState,
        prev: &FieldState,
        f_qp: &[[f64; 2]],
    ) -> Vec<[f64; 2]> {
        let dt = self.scheme().dt();
        let nq = self.n_qp();
        let rule = self.rule();
        let mut out = Vec::with_capacity(f_qp.len());
        for (k, tri) in self.mesh().triangles().iter().enumerate() {
            let grads = &self.geometries()[k].shape_gradients;
            let grad_p = [0, 1].map(|c| (0..3).map(|a| grads[a][c] * next.p[tri[a]]).sum::<f64>());
            let rate =
                [0, 1].map(|c| tri.map(|v| (next.velocity(c)[v] - prev.velocity(c)[v]) / dt));
            for q in 0..nq {
                let lam = rule.points[q];
                let f = f_qp[k * nq + q];
                out.push([0, 1].map(|c| {
                    let dudt = lam[0] * rate[c][0] + lam[1] * rate[c][1] + lam[2] * rate[c][2];
                    f[c] - dudt - grad_p[c]
                }));
            }
        }
        out
    }

    pub fn update_subscales_with_forcing(
        &self,
        next: &FieldState,
        prev: &FieldState,
        subscale_n: &SubscaleState,
        f_qp: &[[f64; 2]],
    ) -> Result<SubscaleState> {
        if subscale_n.values().len() != f_qp.len() || subscale_n.n_qp() != self.n_qp() {
            return Err(Error::DimensionMismatch {
                expected: f_qp.len(),
                actual: subscale_n.values().len(),
            });
        }
        let dt_eff = self.scheme().dt_eff();
        let nq = self.n_qp();
        let residuals = self.momentum_residuals(next, prev, f_qp);
        let values = residuals
            .iter()
            .zip(subscale_n.values())
            .enumerate()
            .map(|(i, (&r, &up))| advance_subscale(up, r, self.taus()[i / nq].tau1p, dt_eff))
            .collect();
        Ok(SubscaleState::from_values(nq, values))
    }

    pub fn update_subscales(
        &self,
        next: &FieldState,
        prev: &FieldState,
        subscale_n: &SubscaleState,
        forcing: &dyn Forcing,
    ) -> Result<SubscaleState> {
        let f_qp = self.forcing_at_qps(forcing, prev.t);
        self.update_subscales_with_forcing(next, prev, subscale_n, &f_qp)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn update_subscales(
    mesh: &Mesh,
    dofmap: &DofMap,
    next: &FieldState,
    prev: &FieldState,
    subscale_n: &SubscaleState,
    scheme: &TimeScheme,
    params: &StabilizationParams,
    forcing: &dyn Forcing,
) -> Result<SubscaleState> {
    Discretization::new(mesh, dofmap, *scheme, *params)?
        .update_subscales(next, prev, subscale_n, forcing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_residual_and_history_stay_zero() {
        assert_eq!(advance_subscale([0.0; 2], [0.0; 2], 0.3, 0.1), [0.0; 2]);
    }

    #[test]
    fn decay_without_residual() {
        let (tau1, dt_eff) = (0.02, 0.1);
        let tau1p = tau1 * dt_eff / (dt_eff + tau1);
        let next = advance_subscale([1.0, -2.0], [0.0; 2], tau1p, dt_eff);
        let ratio = tau1 / (dt_eff + tau1);
        assert!((next[0] - ratio).abs() < 1e-15);
        assert!((next[1] + 2.0 * ratio).abs() < 1e-15);
    }
}
