use crate::fem::{DofMap, interpolate};
use crate::mesh::Mesh;

/// Body force `f(x, y, t)`.
pub trait Forcing {
    fn eval(&self, x: f64, y: f64, t: f64) -> [f64; 2];
}

impl<F: Fn(f64, f64, f64) -> [f64; 2]> Forcing for F {
    fn eval(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        self(x, y, t)
    }
}

/// Resolved (finite element) velocity and pressure at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub p: Vec<f64>,
    /// Time of the velocity snapshot, `t^n`.
    pub t: f64,
    /// Time the pressure approximates: `t^{n-1,theta}` after a step.
    pub p_time: f64,
}

impl FieldState {
    pub fn zeros(n_vertices: usize, t: f64) -> Self {
        Self {
            u1: vec![0.0; n_vertices],
            u2: vec![0.0; n_vertices],
            p: vec![0.0; n_vertices],
            t,
            p_time: t,
        }
    }

    /// Nodal interpolant of the given velocity and pressure fields at time `t`.
    pub fn interpolated(
        mesh: &Mesh,
        velocity: impl Fn(f64, f64, f64) -> [f64; 2],
        pressure: impl Fn(f64, f64, f64) -> f64,
        t: f64,
    ) -> Self {
        Self {
            u1: interpolate(mesh, |x, y| velocity(x, y, t)[0]),
            u2: interpolate(mesh, |x, y| velocity(x, y, t)[1]),
            p: interpolate(mesh, |x, y| pressure(x, y, t)),
            t,
            p_time: t,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.p.len()
    }

    pub fn velocity(&self, component: usize) -> &[f64] {
        if component == 0 { &self.u1 } else { &self.u2 }
    }

    /// Global solution vector in [`DofMap`] layout (multiplier set to zero).
    pub fn to_vector(&self, dofmap: &DofMap) -> Vec<f64> {
        let mut x = Vec::with_capacity(dofmap.dimension());
        x.extend_from_slice(&self.u1);
        x.extend_from_slice(&self.u2);
        x.extend_from_slice(&self.p);
        x.push(0.0);
        x
    }

    pub fn boundary_velocity_is_zero(&self, dofmap: &DofMap) -> bool {
        dofmap.dirichlet_dofs.iter().all(|&d| {
            let (c, v) = (d / dofmap.n_u, d % dofmap.n_u);
            self.velocity(c)[v] == 0.0
        })
    }
}

/// Subscale velocity at every (element, quadrature point) pair, stored
/// element-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SubscaleState {
    n_qp: usize,
    values: Vec<[f64; 2]>,
}

impl SubscaleState {
    pub fn zeros(n_elements: usize, n_qp: usize) -> Self {
        Self {
            n_qp,
            values: vec![[0.0; 2]; n_elements * n_qp],
        }
    }

    pub fn from_values(n_qp: usize, values: Vec<[f64; 2]>) -> Self {
        assert!(n_qp > 0 && values.len() % n_qp == 0);
        Self { n_qp, values }
    }

    pub fn n_qp(&self) -> usize {
        self.n_qp
    }

    pub fn n_elements(&self) -> usize {
        self.values.len() / self.n_qp
    }

    pub fn get(&self, element: usize, qp: usize) -> [f64; 2] {
        self.values[element * self.n_qp + qp]
    }

    pub fn element(&self, element: usize) -> &[[f64; 2]] {
        &self.values[element * self.n_qp..(element + 1) * self.n_qp]
    }

    pub fn values(&self) -> &[[f64; 2]] {
        &self.values
    }

    /// Euclidean norm over all stored vectors.
    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v[0] * v[0] + v[1] * v[1])
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v[0].is_finite() && v[1].is_finite())
    }
}
