//! Residual-based error indicator
//! `eta_k^2 = h_k^2 ||R1||^2_k + ||R2||^2_k` with
//! `R1 = f* - (u^{n+1} - u^n)/dt - grad p` and `R2 = -div u^{n,theta}`.

use crate::asgs::{Discretization, FieldState, Forcing};

#[derive(Debug, Clone)]
pub struct ResidualIndicator {
    /// `eta_k^2` per element.
    pub element_sq: Vec<f64>,
    /// `sum_k eta_k^2`
    pub global_sq: f64,
}

impl ResidualIndicator {
    pub fn global(&self) -> f64 {
        self.global_sq.sqrt()
    }
}

/// Indicator for the step `prev -> next` with the forcing already sampled at
/// the assembly quadrature points.
pub fn residual_indicator_with_forcing(
    disc: &Discretization<'_>,
    prev: &FieldState,
    next: &FieldState,
    f_qp: &[[f64; 2]],
) -> ResidualIndicator {
    let alpha = disc.scheme().alpha();
    let nq = disc.n_qp();
    let rule = disc.rule();
    let r1 = disc.momentum_residuals(next, prev, f_qp);
    let mut element_sq = Vec::with_capacity(disc.geometries().len());
    for (k, tri) in disc.mesh().triangles().iter().enumerate() {
        let g = &disc.geometries()[k];
        let r1_sq: f64 = (0..nq)
            .map(|q| {
                let r = r1[k * nq + q];
                rule.weights[q] * (r[0] * r[0] + r[1] * r[1])
            })
            .sum::<f64>()
            * g.area;
        let div: f64 = (0..2)
            .map(|c| {
                (0..3)
                    .map(|a| {
                        let v = tri[a];
                        g.shape_gradients[a][c]
                            * (alpha * next.velocity(c)[v] + (1.0 - alpha) * prev.velocity(c)[v])
                    })
                    .sum::<f64>()
            })
            .sum();
        element_sq.push(g.diameter * g.diameter * r1_sq + g.area * div * div);
    }
    let global_sq = element_sq.iter().sum();
    ResidualIndicator {
        element_sq,
        global_sq,
    }
}

pub fn residual_indicator(
    disc: &Discretization<'_>,
    prev: &FieldState,
    next: &FieldState,
    forcing: &dyn Forcing,
) -> ResidualIndicator {
    let f_qp = disc.forcing_at_qps(forcing, prev.t);
    residual_indicator_with_forcing(disc, prev, next, &f_qp)
}
